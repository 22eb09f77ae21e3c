//! The command-line contract: outputs, verdicts and exit codes.

use std::path::{Path, PathBuf};

use tfnp::bits::BitString;
use tfnp::cli::run;

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel).display().to_string()
}

fn tfnp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tfnp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = tfnp(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn witness_value(report: &serde_json::Value) -> u64 {
    let hex = report["cases"][0]["witness"].as_str().unwrap();
    BitString::from_hex(hex).unwrap().value().unwrap()
}

#[test]
fn solve_factoring() {
    let (code, r) = json(&["solve", &data("problems/factoring.json"), "15"]);
    assert_eq!(code, 0);
    let m = witness_value(&r);
    // trial division: the proper divisors of 15
    assert!((2..15).filter(|d| 15 % d == 0).any(|d| d == m), "witness {m}");
    assert_eq!(r["cases"][0]["verdict"], "VERIFIED");
    assert!(r["cases"][0]["steps"].as_u64().unwrap() > 0);

    let (code, r) = json(&["solve", &data("problems/factoring.json"), "7"]);
    assert_eq!(code, 0);
    assert_eq!(witness_value(&r), 0);

    let (code, _, err) = tfnp(&["solve", &data("problems/factoring.json"), "4:fz"]);
    assert_eq!(code, 2);
    assert!(err.contains("4:fz"));
    let (code, _, _) = tfnp(&["solve", &data("problems/missing.json"), "3"]);
    assert_eq!(code, 2);
}

#[test]
fn solve_hits_the_sweep_limit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"sweep_limit": 4}"#).unwrap();
    // 221 = 13 * 17 has no divisor among the first four candidates
    let (code, out, _) = tfnp(&["--config", cfg.to_str().unwrap(), "solve", &data("problems/factoring.json"), "221"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("LIMIT"));
}

#[test]
fn check_reduction_verdicts() {
    let (code, r) = json(&["check-reduction", &data("reductions/identity.json"), "--domain", "strings:4"]);
    assert_eq!(code, 0);
    assert_eq!(r["summary"], "PASS");
    assert_eq!(r["cases"].as_array().unwrap().len(), 31);

    let (code, r) = json(&["check-reduction", &data("reductions/pigeon_to_hcs.json")]);
    assert_eq!(code, 0, "{r}");

    let (code, out, _) = tfnp(&["check-reduction", &data("reductions/drop_last_control.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("first counterexample"), "{out}");
    assert!(out.lines().last().unwrap().starts_with("FAIL"));

    let (code, _, _) = tfnp(&["check-reduction", &data("reductions/identity.json"), "--domain", "nums:9..1"]);
    assert_eq!(code, 2);
}

#[test]
fn check_reduction_over_the_domain_cap_is_partial() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"max_domain": 10}"#).unwrap();
    let (code, r) = json(&["--config", cfg.to_str().unwrap(), "check-reduction", &data("reductions/identity.json")]);
    assert_eq!(code, 3);
    assert_eq!(r["cases"].as_array().unwrap().len(), 10);
    assert_eq!(r["summary"], "PASS");
}

#[test]
fn herbrand_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("so.cnf");
    let cnf_s = cnf.to_str().unwrap();
    let (code, r) = json(&["herbrand", &data("sentences/strict_order.txt"), "--depth", "2", "--solve", "--out", cnf_s]);
    assert_eq!(code, 0);
    assert_eq!(r["cases"][0]["verdict"], "SAT");
    // the written CNF is the one the model satisfies
    let parsed = tfnp::prop::read_dimacs(&std::fs::read_to_string(&cnf).unwrap()).unwrap();
    assert!(tfnp::prop::sat_solve(&parsed).is_some());

    let (code, r) = json(&["herbrand", &data("sentences/inconsistent.txt"), "--solve", "--out", cnf_s]);
    assert_eq!(code, 1);
    assert_eq!(r["cases"][0]["verdict"], "UNSAT");
    let (code, r) =
        json(&["herbrand", &data("sentences/inconsistent.txt"), "--max-tuples", "0", "--solve", "--out", cnf_s]);
    assert_eq!(code, 0);
    assert_eq!(r["cases"][0]["verdict"], "SAT");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "functions c/0\nrelations R/2\nforall x. R(x)").unwrap();
    let (code, _, err) = tfnp(&["herbrand", bad.to_str().unwrap(), "--out", cnf_s]);
    assert_eq!(code, 2);
    assert!(err.contains("R"));
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: serde_json::Value| {
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    let args = ["check-reduction", &data("reductions/universal_embeds.json")];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(strip(a), strip(b));
}

#[test]
fn selftest_filters() {
    let (code, r) = json(&["selftest", "--filter", "numeral"]);
    assert_eq!(code, 0);
    assert_eq!(r["cases"].as_array().unwrap().len(), 1);
    let (code, r) = json(&["selftest", "--filter", "nothing-matches"]);
    assert_eq!(code, 0);
    assert!(r["notes"][0].as_str().unwrap().contains("nothing-matches"));
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for e in std::fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        let target = to.join(e.file_name());
        if e.file_type().unwrap().is_dir() {
            copy_dir(&e.path(), &target);
        } else {
            std::fs::copy(e.path(), target).unwrap();
        }
    }
}

#[test]
fn corrupted_record_is_a_named_failure() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().join("crate");
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    copy_dir(&manifest.join("data"), &root.join("data"));
    copy_dir(&manifest.join("programs"), &root.join("programs"));
    std::fs::write(root.join("data/reductions/identity.json"), "{ \"kind\": \"identity\", ").unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, format!("{{\"data_dir\": {:?}}}", root.join("data").display().to_string())).unwrap();
    let (code, out, _) = tfnp(&["--config", cfg.to_str().unwrap(), "selftest", "--filter", "reductions"]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL 04 many-one-contract"), "{out}");
    assert!(out.contains("identity.json"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tfnp(&["bogus"]).0, 2);
    assert_eq!(tfnp(&["--gate-cap", "0", "selftest", "--filter", "numeral"]).0, 2);
    let (code, out, _) = tfnp(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check-reduction"));
}
