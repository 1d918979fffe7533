//! The golden-certificate corpus: a manifest of pinned command lines and
//! the JSON each one must reproduce byte for byte.

use std::fs;
use std::path::Path;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cli::{execute, Cli, Command};
use crate::error::{Error, Result};

/// File name of the manifest inside a golden directory.
pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub file: String,
    /// Arguments after the program name.
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Manifest {
    entries: Vec<GoldenEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub file: String,
    /// First differing line (1-based); `None` when the file is missing.
    pub line: Option<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub checked: usize,
    pub blessed: bool,
    pub mismatches: Vec<Mismatch>,
}

fn load_manifest(dir: &Path) -> Result<Vec<GoldenEntry>> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Parse(format!("no golden manifest at {}: {e}", path.display())))?;
    let m: Manifest = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("malformed {}: {e}", path.display())))?;
    if m.entries.is_empty() {
        return Err(Error::Parse(format!("{} lists no certificates", path.display())));
    }
    Ok(m.entries)
}

/// Recompute an entry's report as JSON.
pub fn render_entry(entry: &GoldenEntry) -> Result<String> {
    let argv = std::iter::once("gsf".to_string()).chain(entry.args.iter().cloned());
    let cli =
        Cli::try_parse_from(argv).map_err(|e| Error::Parse(format!("{}: {}", entry.file, e.render())))?;
    if matches!(cli.command, Command::GoldenCheck { .. }) || cli.run.output.is_some() {
        return Err(Error::Parse(format!("{}: not a pinnable command", entry.file)));
    }
    Ok(execute(&cli)?.json())
}

fn first_diff(expected: &str, actual: &str) -> Mismatch {
    let (mut e, mut a) = (expected.lines(), actual.lines());
    let mut line = 1;
    loop {
        match (e.next(), a.next()) {
            (Some(x), Some(y)) if x == y => line += 1,
            (x, y) => {
                return Mismatch {
                    file: String::new(),
                    line: Some(line),
                    expected: x.unwrap_or("<end of file>").to_string(),
                    actual: y.unwrap_or("<end of file>").to_string(),
                }
            }
        }
    }
}

/// Recompute every certificate listed in `dir/manifest.json` and compare it
/// with the pinned file, or rewrite the files when `bless` is set.
///
/// A missing or empty manifest is a usage error.
pub fn golden_check(dir: &Path, bless: bool) -> Result<GoldenReport> {
    let entries = load_manifest(dir)?;
    let mut mismatches = Vec::new();
    for entry in &entries {
        let actual = render_entry(entry)?;
        let path = dir.join(&entry.file);
        if bless {
            fs::write(&path, &actual).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            Ok(expected) => {
                let mut m = first_diff(&expected, &actual);
                m.file = entry.file.clone();
                mismatches.push(m);
            }
            Err(_) => mismatches.push(Mismatch {
                file: entry.file.clone(),
                line: None,
                expected: "<missing>".into(),
                actual: actual.lines().next().unwrap_or_default().to_string(),
            }),
        }
    }
    Ok(GoldenReport { checked: entries.len(), blessed: bless, mismatches })
}

/// One line per mismatching file.
pub(crate) fn summary(report: &Value) -> String {
    let mut out = String::new();
    for m in report["mismatches"].as_array().into_iter().flatten() {
        let at = match m["line"].as_u64() {
            Some(l) => format!("line {l}"),
            None => "missing file".into(),
        };
        out.push_str(&format!(
            "golden mismatch: {} ({at}): expected {} got {}\n",
            m["file"].as_str().unwrap_or_default(),
            m["expected"],
            m["actual"],
        ));
    }
    out
}
