use bpp_core::cli::{execute, Outcome};
use serde_json::Value;

fn run(args: &[&str]) -> Outcome {
    execute(std::iter::once("bpp").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn envelope_records_the_configuration() {
    let v = json(&["--seed", "5", "wg", "--d", "3", "--class", "2,1"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["ok"], true);
    assert_eq!(v["config"]["command"], "wg");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["cap_d"], 7);
    assert_eq!(v["result"]["value"], "-1/(N^4 - 5*N^2 + 4)");
}

#[test]
fn csv_output() {
    let out = run(&["--format", "csv", "wg", "--d", "3", "--class", "3"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "field,value\nvalue,2/(N^5 - 5*N^3 + 4*N)\n");
}

#[test]
fn tau_limit_monomial_counts() {
    let v = json(&["tau", "--p", "2,1,1", "--q", "2,1,1", "--limit"]);
    let limit = &v["result"]["limit"];
    assert_eq!(limit["monomials"], 14);
    assert_eq!(limit["classical_monomials"], 10);
    assert_eq!(limit["quantum_monomials"], 4);
    // the first letter of exponent 1 overlaps with the others
    let v = json(&["tau", "--p", "1,1,1", "--q", "1,1,1", "--limit"]);
    assert_eq!(v["result"]["limit"]["monomials"], 10);
}

#[test]
fn tau_evaluation_and_free_moment() {
    let v = json(&["tau", "--p", "3", "--q", "0", "--n", "4", "--hbar", "1/3", "--a", "2,3,11"]);
    assert_eq!(v["result"]["value"]["total"], "11");
    assert_eq!(v["result"]["value"]["quantum"], "0");
    let v = json(&["free", "--p", "1,1", "--q", "1,1", "--a", "2,7", "--b", "3,5"]);
    assert_eq!(v["result"]["free_moment"], "47");
    assert_eq!(v["result"]["agree"], true);
}

#[test]
fn walks_and_biasimir() {
    let v = json(&["walks", "--pi1", "1,2,3", "--pi2", "(1 2 3)", "--steps", "2"]);
    assert_eq!(v["result"]["count"], "2");
    let v = json(&["biasimir", "--perm", "(1 3 2)", "--exp", "2,1,1"]);
    assert_eq!(v["ok"], true);
}

#[test]
fn checks_report_success() {
    for args in [
        &["check-pp", "--lambda", "2,0", "--k", "1,2,3", "--hbar", "1/2"][..],
        &["check-biane", "--lambda", "2,1", "--mu", "1,0", "--k", "1,2", "--hbar", "1"][..],
    ] {
        let v = json(args);
        assert_eq!(v["ok"], true, "{args:?}");
    }
}

#[test]
fn measure_samples_are_deterministic() {
    let args = ["--seed", "11", "measure", "--lambda", "2,1,0", "--mu", "1,0,0", "--count", "50"];
    let a = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, run(&args).stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["result"]["total"], "1");
    assert_eq!(v["result"]["measure"]["(3,1,0)"], "5/8");
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        &["wg", "--d", "9", "--class", "9"][..],
        &["wg", "--d", "3", "--class", "2,2"][..],
        &["tau", "--p", "1,2", "--q", "1"][..],
        &["lr", "--lambda", "0,1", "--mu", "0,0"][..],
        &["--cap-d", "0", "wg", "--d", "2", "--class", "2"][..],
        &["no-such-command"][..],
    ] {
        let out = run(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}
