use super::*;

fn run(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("gsf").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn rho_report() {
    let out = run(&["rho", "--n", "16"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out), json!({ "rho": 9 }));
}

#[test]
fn real_mu_report() {
    let out = run(&["real-mu", "--n", "32"]);
    assert_eq!(json(&out)["real_mu"], json!([9, 10]));
}

#[test]
fn decompose_odd_passes() {
    let out = run(&["decompose", "--p", "3", "--s", "1", "--n", "5"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["theorem_id"], "global-decomposition");
}

#[test]
fn theorem_c_outside_exits_3() {
    let out = run(&["theorem-c", "--q", "7", "--n", "4"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    // 5 = 1 (mod 4): -1 is a square, the theorem does not apply
    let out = run(&["theorem-c", "--q", "5", "--n", "4"]);
    assert_eq!(out.code, EXIT_OUTSIDE);
    assert_eq!(json(&out)["verdict"], "outside_hypotheses");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["rho"]).code, EXIT_USAGE);
    assert_eq!(run(&["rho", "--n", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["tower", "--p", "4", "--n", "2"]).code, EXIT_USAGE);
    assert_eq!(run(&["rho", "--n", "4", "--budget", "0"]).code, EXIT_USAGE);
    let bad = run(&["form", "--p", "3", "--n", "3", "--b", "1,x"]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.stderr.contains("bad coefficient"));
    assert_eq!(run(&["form", "--p", "3", "--n", "2", "--b", "1,0,2"]).code, EXIT_USAGE);
    assert_eq!(run(&["form", "--p", "3", "--n", "2", "--b", "3"]).code, EXIT_USAGE);
    let over = run(&["rank-laws", "--p", "3", "--n", "4", "--mode", "exhaustive", "--budget", "10"]);
    assert_eq!(over.code, EXIT_USAGE);
    assert!(over.stderr.contains("budget"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).code, EXIT_OK);
    assert_eq!(run(&["--version"]).code, EXIT_OK);
}

#[test]
fn form_report() {
    let out = run(&["form", "--p", "3", "--n", "4", "--i", "1", "--b", "1"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["b"], json!([1, 0, 0, 0]));
    let rank = v["rank"].as_u64().unwrap();
    assert_eq!(v["radical_dim"].as_u64().unwrap(), 4 - rank);
    assert_eq!(v["degenerate_by_norm"], json!(rank < 4));
    let inv = run(&["form", "--p", "3", "--n", "4", "--i", "2", "--b", "1"]);
    assert_eq!(json(&inv)["degenerate_by_norm"], Value::Null);
}

#[test]
fn family_report() {
    let v = json(&run(&["family", "--p", "3", "--n", "4", "--i", "2"]));
    assert_eq!((v["dim"].clone(), v["expected_dim"].clone()), (json!(2), json!(2)));
    assert_eq!(v["rank_profile"]["histogram"], json!({ "0": 8, "4": 72 }));
}

#[test]
fn search_and_block_reports() {
    let v = json(&run(&["search", "--target", "tau", "--n", "2", "--q", "3"]));
    assert_eq!(v["best_dim"], 2);
    let v = json(&run(&["search", "--target", "mu", "--n", "3", "--q", "5", "--strategy", "construct"]));
    assert_eq!((v["best_dim"].clone(), v["verified"].clone()), (json!(3), json!(true)));
    let out =
        run(&["search", "--target", "mu", "--n", "3", "--q", "3", "--strategy", "greedy", "--seed", "1"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&run(&["block", "--p", "3", "--n", "2"]));
    assert_eq!((v["n"].clone(), v["best_dim"].clone()), (json!(4), json!(2)));
}

#[test]
fn workers_do_not_change_reports() {
    let args = ["theorem-c", "--q", "3", "--n", "4"];
    let one = run(&[&args[..], &["--workers", "1"]].concat());
    let many = run(&[&args[..], &["--workers", "8"]].concat());
    assert_eq!(one, many);
    assert_eq!(one.code, EXIT_OK);
}

#[test]
fn table_format_lists_claims() {
    let out = run(&["refine", "--p", "3", "--n", "6", "--format", "table"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("refine-a1-2k"));
    assert!(out.stdout.contains("A1.U"));
    assert!(out.stdout.contains("check L = U + V: true"));
}

#[test]
fn output_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    let out = run(&["rho", "--n", "8", "--output", path.to_str().unwrap()]);
    assert_eq!((out.code, out.stdout.as_str()), (EXIT_OK, ""));
    assert_eq!(std::fs::read_to_string(path).unwrap(), "{\n  \"rho\": 8\n}\n");
}

#[test]
fn golden_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(run(&["golden-check", "--dir", d]).code, EXIT_USAGE);

    let manifest = json!({ "entries": [
        { "file": "rho.json", "args": ["rho", "--n", "64"] },
        { "file": "global.json", "args": ["decompose", "--p", "3", "--n", "3"] },
    ]});
    std::fs::write(dir.path().join(MANIFEST), manifest.to_string()).unwrap();
    let missing = run(&["golden-check", "--dir", d]);
    assert_eq!(missing.code, EXIT_FAIL);
    assert!(missing.stderr.contains("missing file"));

    assert_eq!(run(&["golden-check", "--dir", d, "--bless"]).code, EXIT_OK);
    let ok = run(&["golden-check", "--dir", d]);
    assert_eq!(ok.code, EXIT_OK);
    assert_eq!(json(&ok)["checked"], 2);

    std::fs::write(dir.path().join("rho.json"), "{\n  \"rho\": 13\n}\n").unwrap();
    let bad = run(&["golden-check", "--dir", d]);
    assert_eq!(bad.code, EXIT_FAIL);
    assert!(bad.stderr.contains("rho.json (line 2)"));
}

#[test]
fn golden_manifest_rejects_nested_checks() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = json!({ "entries": [{ "file": "x.json", "args": ["golden-check"] }] });
    std::fs::write(dir.path().join(MANIFEST), manifest.to_string()).unwrap();
    assert!(matches!(golden_check(dir.path(), false), Err(Error::Parse(_))));
}
