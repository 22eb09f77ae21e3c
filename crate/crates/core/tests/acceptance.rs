//! The acceptance checklist, one PASS/FAIL line per item.
//!
//! Lines are written straight to the process stdout so they show up in the
//! test log even when the harness captures `println!`.

use std::io::Write;

use tfnp::cli::WorkspaceConfig;
use tfnp::selftest::run_selftest;

#[test]
fn acceptance_checklist() {
    let results = run_selftest(&WorkspaceConfig::default(), None);
    let mut out = std::io::stdout().lock();
    for r in &results {
        let budget = r.budget_ms.map(|b| format!(", budget {b} ms")).unwrap_or_default();
        writeln!(out, "{} [{} ms{budget}]", r.line(), r.duration_ms).unwrap();
    }
    out.flush().unwrap();
    assert_eq!(results.len(), 11);
    let failed: Vec<u8> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed checklist items: {failed:?}");
}
