//! Command-line driver: argument parsing, dispatch onto the library
//! operations, JSON and table rendering, and the golden-certificate corpus.
//!
//! Exit codes: 0 success or `pass`, 2 `fail` or a golden mismatch,
//! 3 `outside_hypotheses`, 1 usage, input and budget errors.

mod golden;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use golden::{golden_check, render_entry, GoldenEntry, GoldenReport, Mismatch, MANIFEST};

use crate::decomp::{
    min_rank_lower_bound, refine_a1_2k, refine_a1_pow4, refine_ai_mod2, verify_full_refined, verify_global,
    verify_rank_laws, Certificate, Instance, Verdict,
};
use crate::error::{Error, Result};
use crate::exactla::Subspace;
use crate::extremal::{
    block_construction, construct_regular_rep_subspace, construct_symmetric_witness, exhaustive_search,
    greedy_search, real_mu_interval, RhoDecomposition, SearchResult, Target,
};
use crate::ffield::{FieldTower, PrimePower};
use crate::formspace::{
    degenerate_by_norm, expected_family_dim, family, gram, radical, rank_profile, run_with_workers,
    EnumConfig, Policy, DEFAULT_BUDGET, DEFAULT_SAMPLES, DEFAULT_SEED,
};

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "GSF_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_OUTSIDE: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "gsf",
    version,
    about = "Symmetric trace forms of GF(q^n)/GF(q): constructions and certificates"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Enumeration policy for rank histograms.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    /// Forms drawn per piece in sampled mode.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest number of forms enumerated exhaustively (default from GSF_BUDGET, else 2000000).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl RunConfig {
    pub fn enum_config(&self) -> Result<EnumConfig> {
        let budget = match self.budget {
            Some(b) => b,
            None => match std::env::var(BUDGET_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("{BUDGET_ENV}={v:?} is not a count")))?,
                Err(_) => DEFAULT_BUDGET,
            },
        };
        if budget == 0 {
            return Err(Error::Parse("budget must be positive".into()));
        }
        let policy = match self.mode {
            ModeArg::Auto => Policy::Auto,
            ModeArg::Exhaustive => Policy::Exhaustive,
            ModeArg::Sampled => Policy::Sampled,
        };
        Ok(EnumConfig {
            policy,
            budget,
            samples: self.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct TowerArgs {
    /// Characteristic (odd prime).
    #[arg(long)]
    pub p: u64,
    /// Base field is GF(p^s).
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    /// Extension degree.
    #[arg(long)]
    pub n: usize,
}

impl TowerArgs {
    pub fn tower(&self) -> Result<FieldTower> {
        FieldTower::new(self.p, self.s, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Tau,
    Mu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Exhaustive,
    Greedy,
    Construct,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Defining polynomials of GF(q^n)/GF(q).
    Tower(TowerArgs),
    /// Gram matrix, rank, radical and norm criterion of one form.
    Form {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
        /// Parameter b as comma-separated little-endian coefficient codes.
        #[arg(long)]
        b: String,
    },
    /// Basis and rank histogram of A^i.
    Family {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
    /// Rank laws for every representative power of the Frobenius.
    RankLaws(TowerArgs),
    /// Global decomposition of Sym(L); `--refined` for the fully refined one.
    Decompose {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        refined: bool,
    },
    /// Refinement of A^i chosen by the order of the Frobenius power.
    Refine {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
    /// Eigenspace refinement of A^1 over GF(q), q = 3 (mod 4), 4 | n.
    TheoremC {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Lower bound n - 2kk on ranks in A^1 + ... + A^kk.
    MinRank {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long)]
        kk: usize,
    },
    /// Radon-Hurwitz number.
    Rho {
        #[arg(long)]
        n: u64,
    },
    /// Bracket for the real symmetric invariant mu_n.
    RealMu {
        #[arg(long)]
        n: u64,
    },
    /// Invertible-closed subspaces of M(n, GF(q)) or S(n, GF(q)).
    Search {
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Exhaustive)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        restarts: u32,
    },
    /// Block construction S(2n) from the regular representation of GF(q^n).
    Block(TowerArgs),
    /// Recompute the pinned certificates and byte-compare them.
    GoldenCheck {
        #[arg(long, default_value = "golden")]
        dir: PathBuf,
        /// Rewrite the pinned files instead of comparing.
        #[arg(long)]
        bless: bool,
    },
}

/// A rendered command result with its exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub code: i32,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, code: EXIT_OK }
    }

    fn certificate(cert: &Certificate) -> Self {
        let code = match cert.verdict {
            Verdict::Pass => EXIT_OK,
            Verdict::Fail => EXIT_FAIL,
            Verdict::OutsideHypotheses => EXIT_OUTSIDE,
        };
        Report { value: serde_json::to_value(cert).expect("certificates serialize"), code }
    }

    /// Pretty JSON, keys sorted, newline-terminated.
    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        render_table(&self.value)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Table => self.table(),
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_table(v: &Value) -> String {
    let mut out = String::new();
    let Some(obj) = v.as_object() else {
        return format!("{}\n", compact(v));
    };
    if let Some(claims) = obj.get("claims").and_then(Value::as_array) {
        out.push_str(&format!(
            "{}  {}  verdict={}  direct_sum={}\n",
            compact(&obj["theorem_id"]),
            compact(&obj["instance"]),
            compact(&obj["verdict"]),
            compact(&obj["direct_sum_ok"]),
        ));
        out.push_str(&format!(
            "{:<12} {:>8} {:>8} {:<16} {:<28} {}\n",
            "piece", "claimed", "observed", "allowed ranks", "histogram", "ok"
        ));
        for c in claims {
            let hist = c.get("rank_profile").map(|p| compact(&p["histogram"]));
            out.push_str(&format!(
                "{:<12} {:>8} {:>8} {:<16} {:<28} {}\n",
                compact(&c["name"]),
                compact(c.get("claimed_dim").unwrap_or(&Value::Null)),
                compact(&c["observed_dim"]),
                compact(c.get("claimed_ranks").unwrap_or(&Value::Null)),
                hist.unwrap_or_else(|| "-".into()),
                compact(&c["ok"]),
            ));
        }
        if let Some(checks) = obj.get("checks").and_then(Value::as_object) {
            for (k, ok) in checks {
                out.push_str(&format!("check {k}: {}\n", compact(ok)));
            }
        }
        return out;
    }
    for (k, val) in obj {
        out.push_str(&format!("{k}: {}\n", compact(val)));
    }
    out
}

/// Parse `1,0,2` into little-endian coefficient codes padded to n.
pub fn parse_element(tower: &FieldTower, text: &str) -> Result<crate::ffield::FieldElement> {
    let n = tower.degree();
    let mut coeffs = text
        .split(',')
        .map(|t| {
            t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad coefficient {t:?} in {text:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.len() > n {
        return Err(Error::Parse(format!("{} coefficients given for degree {n}", coeffs.len())));
    }
    coeffs.resize(n, 0);
    tower.element(coeffs)
}

fn base_tower(q: u64, n: usize) -> Result<FieldTower> {
    let pp = PrimePower::from_order(q)?;
    FieldTower::new(pp.p() as u64, pp.s(), n)
}

fn search_value(r: &SearchResult) -> Value {
    serde_json::to_value(r).expect("search results serialize")
}

fn theorem_c(q: u64, n: usize, cfg: &EnumConfig) -> Result<Certificate> {
    let tower = base_tower(q, n)?;
    match refine_a1_pow4(&tower, cfg) {
        Err(Error::Hypothesis(why)) => {
            Ok(Certificate::outside("theorem-c", Instance::of(&tower).with("reason", why)))
        }
        other => other,
    }
}

/// Run one parsed command on the configured number of workers.
pub fn execute(cli: &Cli) -> Result<Report> {
    let cfg = cli.run.enum_config()?;
    let job = || execute_with(cli, &cfg);
    match cli.run.workers {
        Some(w) => run_with_workers(w, job)?,
        None => job(),
    }
}

fn execute_with(cli: &Cli, cfg: &EnumConfig) -> Result<Report> {
    Ok(match &cli.command {
        Command::Tower(t) => Report::ok(serde_json::to_value(t.tower()?.spec()).expect("spec")),
        Command::Form { tower, i, b } => {
            let t = tower.tower()?;
            let b = parse_element(&t, b)?;
            let form = gram(&t, &b, *i)?;
            let order = t.order_of_power(*i);
            let by_norm = if order > 2 { Some(degenerate_by_norm(&t, &b, *i)?) } else { None };
            Report::ok(json!({
                "b": b,
                "i": i,
                "order": order,
                "gram": form.gram.to_rows(),
                "rank": form.rank(&t),
                "radical_dim": radical(&t, &form).dim(),
                "degenerate_by_norm": by_norm,
            }))
        }
        Command::Family { tower, i } => {
            let t = tower.tower()?;
            let fam = family(&t, *i)?;
            let prof = rank_profile(&t, &Subspace::full(t.degree()), *i, cfg)?;
            Report::ok(json!({
                "i": i,
                "order": t.order_of_power(*i),
                "dim": fam.dim,
                "expected_dim": expected_family_dim(&t, *i),
                "basis": fam.basis,
                "rank_profile": prof,
            }))
        }
        Command::RankLaws(t) => Report::certificate(&verify_rank_laws(&t.tower()?, cfg)?),
        Command::Decompose { tower, refined } => {
            let t = tower.tower()?;
            let cert = if *refined { verify_full_refined(&t, cfg)? } else { verify_global(&t)? };
            Report::certificate(&cert)
        }
        Command::Refine { tower, i } => {
            let t = tower.tower()?;
            let n = t.degree();
            let cert = match (*i, n % 4) {
                (1, 2) => refine_a1_2k(&t, cfg)?,
                (1, 0) => theorem_c(t.q() as u64, n, cfg)?,
                _ => refine_ai_mod2(&t, *i, cfg)?,
            };
            Report::certificate(&cert)
        }
        Command::TheoremC { q, n } => Report::certificate(&theorem_c(*q, *n, cfg)?),
        Command::MinRank { tower, kk } => {
            Report::certificate(&min_rank_lower_bound(&tower.tower()?, *kk, cfg)?)
        }
        Command::Rho { n } => Report::ok(json!({ "rho": RhoDecomposition::new(*n)?.rho() })),
        Command::RealMu { n } => {
            let r = RhoDecomposition::new(*n)?;
            Report::ok(json!({ "n": n, "rho": r.rho(), "real_mu": real_mu_interval(*n)? }))
        }
        Command::Search { target, n, q, strategy, restarts } => {
            let target = match target {
                TargetArg::Tau => Target::Tau,
                TargetArg::Mu => Target::Mu,
            };
            let r = match strategy {
                Strategy::Exhaustive => exhaustive_search(target, *n, *q, cfg)?,
                Strategy::Greedy => greedy_search(target, *n, *q, cfg.seed, *restarts, cfg)?,
                Strategy::Construct => {
                    let t = base_tower(*q, *n)?;
                    match target {
                        Target::Tau => construct_regular_rep_subspace(&t, cfg)?,
                        Target::Mu => construct_symmetric_witness(&t, cfg)?,
                    }
                }
            };
            let code = if r.all_invertible { EXIT_OK } else { EXIT_FAIL };
            Report { value: search_value(&r), code }
        }
        Command::Block(tower) => {
            let t = tower.tower()?;
            let u = construct_regular_rep_subspace(&t, cfg)?;
            let b = block_construction(t.base(), &u, cfg)?;
            let code = if b.verified { EXIT_OK } else { EXIT_FAIL };
            Report { value: search_value(&b), code }
        }
        Command::GoldenCheck { dir, bless } => {
            let rep = golden_check(dir, *bless)?;
            let code = if rep.mismatches.is_empty() { EXIT_OK } else { EXIT_FAIL };
            Report { value: serde_json::to_value(&rep).expect("golden report"), code }
        }
    })
}

/// What a process invocation prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (program name first), run, and render; never panics on bad input.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.exit_code() == 0 {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            } else {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    };
    let text = report.render(cli.run.format);
    let mut stderr = String::new();
    if report.code == EXIT_FAIL {
        if let Command::GoldenCheck { .. } = cli.command {
            stderr = golden::summary(&report.value);
        }
    }
    match &cli.run.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code: report.code, stdout: String::new(), stderr },
            Err(e) => Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code: report.code, stdout: text, stderr },
    }
}

#[cfg(test)]
mod tests;
