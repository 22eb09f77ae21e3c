//! The four commands. Each returns a report; `Err` is an input error.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::logic::{all_tuples, enumerate_herbrand_terms, herbrand_expand, parse_sentence_file};
use crate::prop::write_dimacs;
use crate::selftest::run_selftest;
use crate::tfnp::{check_many_one, expansion_cnf, solve_brute_limited, solve_expansion, verify_solution};
use crate::vm::run;

use super::config::WorkspaceConfig;
use super::records::{build_reductions, load_problem_with_program, load_reduction_file, parse_instance, DomainSpec, Expect};
use super::report::{CaseResult, Exit, RunReport};

pub fn solve(cfg: &WorkspaceConfig, echo: Vec<String>, problem: &Path, instance: &str) -> Result<RunReport, String> {
    let start = Instant::now();
    let (p, program) = load_problem_with_program(problem).map_err(|e| e.to_string())?;
    let x = parse_instance(instance)?;
    let label = x.to_hex();
    let (case, exit) = match solve_brute_limited(&p, &x, cfg.sweep_limit).and_then(|y| Ok((verify_solution(&p, &x, &y)?, y))) {
        Ok((verified, y)) => {
            let mut case = CaseResult::new(label, verified, if verified { "VERIFIED" } else { "REJECTED" }).witness(y.to_hex());
            if let Some(v) = y.value() {
                case = case.detail(format!("witness value {v}"));
            }
            if let Some(prog) = &program {
                if let Ok(r) = run(prog, &[&x, &y]) {
                    case = case.steps(r.steps);
                }
            }
            (case, Exit::Ok)
        }
        Err(e) if e.is_resource_limit() => (CaseResult::new(label, false, "LIMIT").detail(e.to_string()), Exit::Resource),
        Err(e) => (CaseResult::new(label, false, "NO-WITNESS").detail(e.to_string()), Exit::Semantic),
    };
    let notes = vec![format!("problem {}", p.name)];
    Ok(RunReport::new(echo, vec![case], notes, start.elapsed()).escalate(exit))
}

pub fn check_reduction(
    cfg: &WorkspaceConfig,
    echo: Vec<String>,
    path: &Path,
    domain: Option<&str>,
) -> Result<RunReport, String> {
    let start = Instant::now();
    let file = load_reduction_file(path).map_err(|e| e.to_string())?;
    let built = build_reductions(path, &file.reduction).map_err(|e| e.to_string())?;
    let spec = DomainSpec::parse(domain.unwrap_or(&file.domain))?;
    let instances = spec.instances(cfg.max_domain);
    let mut notes = Vec::new();
    let mut exit = Exit::Ok;
    if spec.size() > cfg.max_domain as u64 {
        exit = Exit::Resource;
        notes.push(format!("domain has {} instances; checked the first {}", spec.size(), cfg.max_domain));
    }
    if file.expect == Expect::Fail {
        notes.push("negative control: this reduction is expected to fail".into());
    }
    let mut cases = Vec::new();
    for b in &built {
        let report = check_many_one(&b.reduction, &b.source, &b.target, &instances);
        let mut summary = format!(
            "{}: {} -> {}: {}, {} witnesses checked",
            b.reduction.name,
            b.source.name,
            b.target.name,
            if report.pass { "PASS" } else { "FAIL" },
            report.witnesses_checked()
        );
        if let Some(c) = report.first_failure() {
            let _ = write!(summary, "; first counterexample x = {}", c.instance.to_hex());
        }
        notes.push(summary);
        for c in report.cases {
            if c.resource_limit {
                exit = Exit::Resource;
            }
            let verdict = match (c.ok, c.resource_limit) {
                (true, _) => "PASS",
                (false, true) => "LIMIT",
                (false, false) => "FAIL",
            };
            let mut case = CaseResult::new(format!("{} {}", b.reduction.name, c.instance.to_hex()), c.ok, verdict);
            if let Some(e) = c.error {
                case = case.detail(e);
            } else if let Some(w) = c.witnesses.iter().find(|w| !w.ok) {
                let back = w.back.as_ref().map_or("nothing".to_string(), |y| y.to_hex());
                case = case.witness(w.z.to_hex()).detail(format!("g maps z back to {back}, not a source witness"));
            } else {
                case = case.detail(format!("{} witnesses", c.witnesses.len()));
            }
            cases.push(case);
        }
    }
    Ok(RunReport::new(echo, cases, notes, start.elapsed()).escalate(exit))
}

pub fn herbrand(
    cfg: &WorkspaceConfig,
    echo: Vec<String>,
    sentence: &Path,
    depth: usize,
    max_tuples: Option<usize>,
    out: &Path,
    solve: bool,
) -> Result<RunReport, String> {
    let start = Instant::now();
    let text = std::fs::read_to_string(sentence).map_err(|e| format!("{}: {e}", sentence.display()))?;
    let phi = parse_sentence_file(&text).map_err(|e| format!("{}: {e}", sentence.display()))?;
    let terms = enumerate_herbrand_terms(&phi.signature, depth);
    let count = terms.len().checked_pow(phi.arity() as u32).unwrap_or(usize::MAX);
    // all tuples are built before truncation, so the cap applies to all of them
    if count > cfg.max_domain {
        let case = CaseResult::new(format!("depth {depth}"), false, "LIMIT")
            .detail(format!("{count} tuples exceed max_domain {}", cfg.max_domain));
        return Ok(RunReport::new(echo, vec![case], vec![], start.elapsed()).escalate(Exit::Resource));
    }
    let mut tuples = all_tuples(&terms, phi.arity());
    tuples.truncate(max_tuples.unwrap_or(usize::MAX));
    let g = herbrand_expand(&phi, &tuples).map_err(|e| e.to_string())?;
    let cnf = expansion_cnf(&g);
    let mut dimacs = format!("c herbrand expansion of {phi}\nc depth {depth}, {} tuples\n", tuples.len());
    for (i, a) in g.atoms().iter().enumerate() {
        let _ = writeln!(dimacs, "c atom {} {a}", i + 1);
    }
    dimacs.push_str(&write_dimacs(&cnf));
    std::fs::write(out, dimacs).map_err(|e| format!("{}: {e}", out.display()))?;
    let label = format!("depth {depth}, {} tuples, {} atoms", tuples.len(), g.num_atoms());
    let case = if solve {
        match solve_expansion(&g) {
            Some(v) if g.eval(&v) => {
                let bits: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
                CaseResult::new(label, true, "SAT").witness(bits).detail("assignment verified against the ground conjunction")
            }
            Some(_) => CaseResult::new(label, false, "SAT-UNVERIFIED").detail("the ground conjunction rejects the solver's model"),
            None => CaseResult::new(label, false, "UNSAT")
                .detail("the sentence is inconsistent, so it violates the Herbrand consistency search precondition"),
        }
    } else {
        CaseResult::new(label, true, "WRITTEN")
    };
    let notes = vec![format!("wrote {} ({} variables, {} clauses)", out.display(), cnf.num_vars, cnf.clauses.len())];
    Ok(RunReport::new(echo, vec![case], notes, start.elapsed()))
}

pub fn selftest(cfg: &WorkspaceConfig, echo: Vec<String>, filter: Option<&str>) -> RunReport {
    let start = Instant::now();
    let results = run_selftest(cfg, filter);
    let mut notes = Vec::new();
    if results.is_empty() {
        notes.push(format!("no checklist item matches {:?}", filter.unwrap_or_default()));
    }
    let cases = results
        .into_iter()
        .map(|r| {
            CaseResult::new(format!("{:02} {}", r.id, r.name), r.pass, if r.pass { "PASS" } else { "FAIL" })
                .detail(r.detail)
        })
        .collect();
    RunReport::new(echo, cases, notes, start.elapsed())
}
