use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    report: Option<Value>,
}

fn run(args: &[&str], input: Option<&str>) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logineq"));
    cmd.args(args).env_remove("LOGINEQ_SEED");
    if let Some(name) = input {
        cmd.arg("--input").arg(fixture(name));
    }
    cmd.arg("--out").arg(&out);
    let output = cmd.output().unwrap();
    let report = std::fs::read_to_string(&out)
        .ok()
        .map(|s| serde_json::from_str(&s).unwrap());
    Run {
        code: output.status.code().unwrap(),
        stdout: String::from_utf8(output.stdout).unwrap(),
        report,
    }
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn close(v: &Value, expected: f64, eps: f64) {
    let got = f(v);
    assert!((got - expected).abs() <= eps, "{got} vs {expected}");
}

fn ssl(v: &[f64]) -> f64 {
    v.iter().map(|x| x.ln().powi(2)).sum()
}

#[test]
fn feasible_pair_without_pairing() {
    let r = run(&["check", "ssli-conjecture", "--exact"], Some("feasible_without_pairing.json"));
    assert_eq!(r.code, 0, "{}", r.stdout);
    let rep = r.report.unwrap();
    assert_eq!(rep["schema"], 1);
    let res = &rep["result"];
    assert_eq!(res["exact"], true);
    assert_eq!(res["verdict"]["hypothesis"], "conjecture_1_2");
    assert_eq!(res["e_a"]["exact"], serde_json::json!(["26", "188", "280"]));
    assert_eq!(res["e_b"]["exact"], serde_json::json!(["29", "194", "280"]));
    assert_eq!(f(&res["feasibility_residual"]), 0.0);

    let r = run(&["check", "ssli-rearrangement"], Some("feasible_without_pairing.json"));
    assert_eq!(r.code, 2);
    let p = &r.report.unwrap()["result"]["report"]["pairing"];
    assert_eq!(p["found"], false);
    assert_eq!(p["exhaustive"], true);
}

#[test]
fn pairing_with_unequal_products() {
    let r = run(&["check", "ssli-rearrangement"], Some("pairing_with_unequal_products.json"));
    assert_eq!(r.code, 0, "{}", r.stdout);
    let rep = &r.report.unwrap()["result"]["report"];
    assert_eq!(rep["verdict"]["hypothesis"], "thm_3_2a");
    let slack = ssl(&[10.0, 8.0, 3.0]) - ssl(&[6.0, 5.0, 7.0]);
    close(&rep["verdict"]["slack"], slack, 1e-12);
    close(&rep["verdict"]["slack"], 1.246, 1e-3);
    for (got, want) in rep["pairing"]["ratios"].as_array().unwrap().iter().zip([10.0 / 6.0, 8.0 / 5.0, 3.0 / 7.0]) {
        close(got, want, 1e-12);
    }
    for (got, want) in rep["pairing"]["products"].as_array().unwrap().iter().zip([60.0, 40.0, 21.0]) {
        close(got, want, 1e-12);
    }

    let r = run(&["check", "ssli-conjecture", "--exact"], Some("pairing_with_unequal_products.json"));
    assert_eq!(r.code, 2);
    let res = &r.report.unwrap()["result"];
    assert_eq!(res["e_a"]["exact"][2], "210");
    assert_eq!(res["e_b"]["exact"][2], "240");
    close(&res["feasibility_residual"], 30.0 / 210.0, 1e-15);
}

#[test]
fn common_reindex_flag_is_accepted() {
    let r = run(
        &["check", "ssli-rearrangement", "--common-reindex"],
        Some("pairing_with_unequal_products.json"),
    );
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["common_reindex"], true);
}

#[test]
fn equal_entries_pair() {
    let r = run(&["check", "ssli-conjecture"], Some("equal_entries_pair.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["exact"], true);
    let r = run(&["check", "ssli-rearrangement"], Some("equal_entries_pair.json"));
    assert_eq!(r.code, 0);
    let p = &r.report.unwrap()["result"]["report"]["pairing"];
    for (got, want) in p["ratios"].as_array().unwrap().iter().zip([2.0, 1.0, 0.5]) {
        close(got, want, 1e-12);
    }
    for (got, want) in p["products"].as_array().unwrap().iter().zip([8.0, 4.0, 2.0]) {
        close(got, want, 1e-12);
    }
}

#[test]
fn majorized_pairs_on_both_sides_of_the_inequality() {
    let r = run(&["check", "majorize"], Some("majorized_smaller_logs.json"));
    assert_eq!(r.code, 0);
    let res = &r.report.unwrap()["result"];
    assert_eq!(res["verdict"]["strong"], true);
    assert_eq!(res["consistent"], true);
    close(&res["boundary"]["lhs"], 2.17, 0.005);
    close(&res["boundary"]["rhs"], 2.40, 0.005);
    assert_eq!(res["boundary"]["direction"], "below");

    let r = run(&["check", "majorize"], Some("majorized_larger_logs.json"));
    assert_eq!(r.code, 0);
    let res = &r.report.unwrap()["result"];
    assert_eq!(res["verdict"]["strong"], true);
    close(&res["boundary"]["lhs"], 5.77, 0.005);
    close(&res["boundary"]["rhs"], 5.30, 0.005);
    assert_eq!(res["boundary"]["direction"], "above");
}

#[test]
fn dominating_profile_without_majorization() {
    let r = run(&["check", "majorize"], Some("dominating_profile_not_majorized.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["verdict"]["strong"], false);
    let r = run(&["check", "ssli-conjecture", "--exact"], Some("dominating_profile_not_majorized.json"));
    let res = &r.report.unwrap()["result"];
    let ea = res["e_a"]["values"].as_array().unwrap();
    let eb = res["e_b"]["values"].as_array().unwrap();
    assert!(ea.iter().zip(eb).all(|(x, y)| f(x) >= f(y)));
}

#[test]
fn family_monotonicity_intervals() {
    let r = run(&["check", "family"], Some("family_increasing.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["direction"], "increasing");
    let r = run(&["check", "family"], Some("family_decreasing.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["direction"], "decreasing");
}

#[test]
fn minimize_runs() {
    let r = run(&["minimize", "--seed", "1"], Some("minimize_equal_entries.json"));
    assert_eq!(r.code, 0, "{}", r.stdout);
    let res = &r.report.unwrap()["result"];
    close(&res["target_value"], 3.0 * 2f64.ln().powi(2), 1e-12);
    let gap = f(&res["gap"]);
    assert!((-1e-6..=1e-4).contains(&gap));
    assert_eq!(res["per_start_trace"].as_array().unwrap().len(), 16);

    let r = run(&["minimize", "--starts", "32"], Some("minimize_mixed_entries.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["per_start_trace"].as_array().unwrap().len(), 32);

    let r = run(&["minimize"], Some("minimize_single_entry.json"));
    assert_eq!(r.code, 64);
}

#[test]
fn information_checks() {
    let r = run(&["check", "gibbs"], Some("gibbs_uniform.json"));
    assert_eq!(r.code, 0);
    let rep = &r.report.unwrap()["result"]["report"];
    assert_eq!(f(&rep["kl"]), 0.0);
    close(&rep["cross_entropy"], f(&rep["entropy"]), 1e-15);

    let r = run(&["check", "gibbs"], Some("gibbs_skewed.json"));
    assert_eq!(r.code, 0);
    close(&r.report.unwrap()["result"]["report"]["kl"], 0.5 * (4.0f64 / 3.0).ln(), 1e-12);

    let r = run(&["check", "logsum"], Some("logsum_shifts.json"));
    assert_eq!(r.code, 0);
    close(&r.report.unwrap()["result"]["generalized"]["gap"], 0.905, 1e-3);

    let r = run(&["check", "gibbs"], Some("logsum_shifts.json"));
    assert_eq!(r.code, 2);
}

#[test]
fn exponential_checks() {
    let r = run(&["check", "cardano"], Some("cardano_same_triple.json"));
    assert_eq!(r.code, 0);
    let rep = &r.report.unwrap()["result"]["report"];
    close(&rep["p"], -7.0, 1e-12);
    close(&rep["u1_lhs"], (-3f64).exp() + 2f64.exp() + (-6f64).exp(), 1e-12);
    close(&rep["u1_lhs"], 7.4418, 1e-3);

    let r = run(&["check", "triple-equiv"], Some("triple_equiv_endpoints.json"));
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["result"]["report"]["biconditional"], true);

    assert_eq!(run(&["check", "cardano"], Some("feasible_without_pairing.json")).code, 64);
}

#[test]
fn powered_logs() {
    assert_eq!(run(&["check", "powered"], Some("powered_weakly_majorized.json")).code, 0);
    let r = run(&["check", "powered"], Some("powered_not_weakly_majorized.json"));
    assert_eq!(r.code, 2);
}

#[test]
fn fuzz_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lemma.json");
    let status = Command::new(env!("CARGO_BIN_EXE_logineq"))
        .args(["fuzz", "lemma_5_2", "--trials", "1000", "--seed", "7", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("lemma.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);
    assert_eq!(csv.lines().next().unwrap(), "theorem_id,trial,n,slack,verdict,seed");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["trials"], 1000);
    assert_eq!(json["prng"], "ChaCha8");

    let r = run(&["fuzz", "thm_3_2", "--trials", "0"], None);
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["min_slack"], Value::Null);

    let r = run(&["fuzz", "conj_1_2", "--trials", "10000", "--n", "3", "--seed", "1"], None);
    assert_eq!(r.code, 0);
    assert_eq!(r.report.unwrap()["severity"], "FINDING");

    assert_eq!(run(&["fuzz", "thm_7_7"], None).code, 64);
    assert_eq!(run(&["fuzz", "thm_3_2", "--n", "1"], None).code, 64);
}

fn report_bytes(args: &[&str], input: Option<&str>, env_seed: Option<&str>) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_logineq"));
    cmd.args(args).arg("--out").arg(&out).env_remove("LOGINEQ_SEED");
    if let Some(s) = env_seed {
        cmd.env("LOGINEQ_SEED", s);
    }
    if let Some(name) = input {
        cmd.arg("--input").arg(fixture(name));
    }
    cmd.status().unwrap();
    std::fs::read(out).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let fuzz = ["fuzz", "thm_4_4", "--trials", "200", "--seed", "11"];
    assert_eq!(report_bytes(&fuzz, None, None), report_bytes(&fuzz, None, None));
    let min = ["minimize", "--seed", "3", "--starts", "4"];
    let a = report_bytes(&min, Some("minimize_mixed_entries.json"), None);
    assert_eq!(a, report_bytes(&min, Some("minimize_mixed_entries.json"), None));
}

#[test]
fn seed_falls_back_to_environment() {
    let explicit = report_bytes(&["fuzz", "prop_4_1", "--trials", "50", "--seed", "9"], None, None);
    let from_env = report_bytes(&["fuzz", "prop_4_1", "--trials", "50"], None, Some("9"));
    let other = report_bytes(&["fuzz", "prop_4_1", "--trials", "50"], None, Some("10"));
    assert_eq!(explicit, from_env);
    assert_ne!(explicit, other);
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let code = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_logineq"))
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(code(&["check", "majorize", "--input", bad.to_str().unwrap()]), 64);
    let missing = fixture("minimize_equal_entries.json");
    assert_eq!(code(&["check", "majorize", "--input", missing.to_str().unwrap()]), 64);
    assert_eq!(code(&["check", "nonsense"]), 64);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}
