use std::process::Command;

use serde_json::Value;

fn gsf(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gsf")).args(args).env_remove("GSF_BUDGET").output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn decompose_odd_exits_zero() {
    let (code, out, _) = gsf(&["decompose", "--p", "3", "--s", "1", "--n", "5"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn rho_sixteen() {
    let (code, out, _) = gsf(&["rho", "--n", "16"]);
    assert_eq!((code, out.as_str()), (0, "{\n  \"rho\": 9\n}\n"));
}

#[test]
fn theorem_c_outside_exits_three() {
    let (code, out, _) =
        gsf(&["theorem-c", "--q", "11", "--n", "32", "--mode", "sampled", "--samples", "300", "--seed", "3"]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "outside_hypotheses");
    assert_eq!(v["instance"]["case"], "outside");
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err) = gsf(&["decompose", "--p", "3", "--n", "5", "--bogus"]);
    assert_eq!(code, 1);
    assert!(err.contains("--bogus"));
    let (code, _, err) = gsf(&["form", "--p", "3", "--n", "3", "--b", "1,,2"]);
    assert_eq!(code, 1);
    assert!(err.contains("bad coefficient"));
}

#[test]
fn budget_env_var_overrides_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_gsf"))
        .args(["rank-laws", "--p", "3", "--n", "4", "--mode", "exhaustive"])
        .env("GSF_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget of 5"));
    // an explicit flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_gsf"))
        .args(["rank-laws", "--p", "3", "--n", "4", "--mode", "exhaustive", "--budget", "100"])
        .env("GSF_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn golden_check_outcomes() {
    let golden = concat!(env!("CARGO_MANIFEST_DIR"), "/../../golden");
    assert_eq!(gsf(&["golden-check", "--dir", golden]).0, 0);

    let empty = tempfile::tempdir().unwrap();
    let (code, _, err) = gsf(&["golden-check", "--dir", empty.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("manifest"));

    let copy = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(golden).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, copy.path().join(path.file_name().unwrap())).unwrap();
    }
    let target = copy.path().join("global-3-1-5.json");
    let text = std::fs::read_to_string(&target).unwrap().replace("\"pass\"", "\"fail\"");
    std::fs::write(&target, text).unwrap();
    let (code, _, err) = gsf(&["golden-check", "--dir", copy.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("global-3-1-5.json"));
}

#[test]
fn table_output() {
    let (code, out, _) = gsf(&["theorem-c", "--q", "3", "--n", "4", "--format", "table"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("A1.E1")));
}
