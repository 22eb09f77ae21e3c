//! The acceptance checklist. Each item runs against independent oracles
//! (truth tables, trial division, brute-force model search, direct VM runs)
//! and reports how many checks it made and how many disagreed.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::cli::config::WorkspaceConfig;
use crate::cli::records::{build_reductions, load_reduction_file, DomainSpec, Expect, ReductionRecord};
use crate::logic::{
    all_tuples, binary_numeral, enumerate_herbrand_terms, eval_arith, herbrand_expand, parse_sentence_file,
    random_model_sentence, FiniteStructure, GroundConjunction, Signature, UniversalSentence, NUMERAL_SIZE_FACTOR,
};
use crate::pairs::{
    canonical_conp_pair, check_npmv_reduction, check_pair_reduction, check_resolution, circuit_battery,
    composite_sat_system, conp_instance, divisor_function, find_refutation, gamma_cnf, gamma_factors, gamma_proof,
    is_composite, lift_tfnp_reduction_to_conp_pairs, php_cnf, pigeon_universal_setup, resolution_proof_system,
    PairClass,
};
use crate::prop::{sat_solve, tseitin, BoolCircuit, CircuitBuilder, PropFormula, Wire};
use crate::tfnp::{
    add2_problem, all_transcripts, check_many_one, encode_transcript, factoring_problem, pigeon_problem, solve_brute,
    solve_expansion, succ_problem, turing_to_many_one, unpad, verify_solution, verify_transcript, wrap_completion,
    NativeTransformer, PigeonMap, TfnpError, TfnpProblem, TuringReduction, COMPLETION_LIST_LIMIT,
};
use crate::vm::{compile_to_circuit, library, run};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub budget: Option<Duration>,
    run: fn(&WorkspaceConfig) -> Outcome,
}

impl Criterion {
    /// A filter selects by tag, by a substring of the name, or by number.
    pub fn matches(&self, filter: &str) -> bool {
        self.tags.contains(&filter) || self.name.contains(filter) || filter == self.id.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub duration_ms: u64,
    pub budget_ms: Option<u64>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!("{} {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

pub fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion { id: 1, name: "hcs-correctness", tags: &["logic", "herbrand", "hcs"], budget: secs(10), run: hcs_correctness },
        Criterion { id: 2, name: "herbrand-principle", tags: &["logic", "herbrand"], budget: None, run: herbrand_principle },
        Criterion { id: 3, name: "totality-sweeps", tags: &["tfnp", "totality"], budget: secs(60), run: totality_sweeps },
        Criterion { id: 4, name: "many-one-contract", tags: &["tfnp", "reductions"], budget: None, run: many_one_contract },
        Criterion { id: 5, name: "completion-lemma", tags: &["tfnp", "completion"], budget: None, run: completion_lemma },
        Criterion { id: 6, name: "conp-trichotomy-lifting", tags: &["pairs", "conp"], budget: None, run: conp_lifting },
        Criterion { id: 7, name: "compiler-equivalence", tags: &["vm", "compiler"], budget: None, run: compiler_equivalence },
        Criterion { id: 8, name: "resolution-soundness", tags: &["pairs", "proofsys", "resolution"], budget: None, run: resolution_soundness },
        Criterion { id: 9, name: "gamma-system", tags: &["pairs", "proofsys", "gamma"], budget: secs(120), run: gamma_system },
        Criterion { id: 10, name: "numeral-size", tags: &["logic", "numeral"], budget: None, run: numeral_size },
        Criterion { id: 11, name: "npmv-set-equality", tags: &["pairs", "npmv"], budget: None, run: npmv_set_equality },
    ]
}

/// Runs the selected items in order. An item over its time budget fails.
pub fn run_selftest(cfg: &WorkspaceConfig, filter: Option<&str>) -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .filter(|c| filter.is_none_or(|f| c.matches(f)))
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)(cfg);
            let elapsed = start.elapsed();
            let late = c.budget.is_some_and(|b| elapsed > b);
            let mut detail = outcome.detail;
            if late {
                detail.push_str(&format!("; took {:.1}s, over the {}s budget", elapsed.as_secs_f64(), c.budget.unwrap().as_secs()));
            }
            CriterionResult {
                id: c.id,
                name: c.name.to_string(),
                pass: outcome.pass && !late,
                detail,
                duration_ms: elapsed.as_millis() as u64,
                budget_ms: c.budget.map(|b| b.as_millis() as u64),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Herbrand expansions

/// A labelled expansion; `consistent` says the sentence holds in a finite
/// structure, so the expansion must be satisfiable.
pub struct Expansion {
    pub label: String,
    pub consistent: bool,
    pub expansion: GroundConjunction,
}

const MAX_EXPANSION_ATOMS: usize = 20;

fn expand(sentence: &UniversalSentence, depth: usize) -> GroundConjunction {
    let terms = enumerate_herbrand_terms(&sentence.signature, depth);
    let tuples = all_tuples(&terms, sentence.arity());
    herbrand_expand(sentence, &tuples).expect("enumerated tuples are ground")
}

/// The deepest expansion (depth ≤ 2) with between 1 and 20 atoms.
fn bounded_expansion(sentence: &UniversalSentence) -> Option<(usize, GroundConjunction)> {
    (0..=2).rev().find_map(|d| {
        let terms = enumerate_herbrand_terms(&sentence.signature, d);
        if terms.len().pow(sentence.arity() as u32) > 400 {
            return None;
        }
        let g = expand(sentence, d);
        (1..=MAX_EXPANSION_ATOMS).contains(&g.num_atoms()).then_some((d, g))
    })
}

/// Hand-built sentences together with the depth whose expansion refutes them.
pub const INCONSISTENT_SENTENCES: &[(&str, usize)] = &[
    ("functions c/0\nrelations R/2\nforall x. R(x,x) & ~R(x,x)", 0),
    ("functions c/0 f/1\nrelations P/1\nforall x. P(x) & ~P(f(x))", 1),
    ("functions c/0 f/1\nrelations L/2\nforall x,y,z. ~L(x,x) & (L(x,y) & L(y,z) -> L(x,z)) & L(x,f(x)) & L(f(x),x)", 1),
    ("functions a/0 b/0\nrelations E/2\nforall x,y. E(x,x) & (E(x,y) -> E(y,x)) & E(a,b) & ~E(b,a)", 0),
];

/// Seeded consistent sentences followed by the hand-built inconsistent ones.
pub fn herbrand_suite(cfg: &WorkspaceConfig) -> Vec<Expansion> {
    let signatures = [
        Signature::from_slices(&[("c", 0), ("f", 1)], &[("R", 2), ("P", 1)]).expect("fixed signature"),
        Signature::from_slices(&[("a", 0), ("b", 0)], &[("E", 2)]).expect("fixed signature"),
        Signature::from_slices(&[("c", 0), ("g", 2)], &[("P", 1), ("Q", 1)]).expect("fixed signature"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < cfg.sentences && attempts < 50 * cfg.sentences {
        attempts += 1;
        let sig = &signatures[attempts % signatures.len()];
        let model = FiniteStructure::random(sig, rng.gen_range(1..=3), &mut rng);
        let sentence = random_model_sentence(sig, &model, rng.gen_range(1..=2), rng.gen_range(1..=5), &mut rng);
        if let Some((d, g)) = bounded_expansion(&sentence) {
            out.push(Expansion { label: format!("{sentence} @ depth {d}"), consistent: true, expansion: g });
        }
    }
    for (text, depth) in INCONSISTENT_SENTENCES {
        let sentence = parse_sentence_file(text).expect("hand-built sentence parses");
        out.push(Expansion { label: format!("{sentence} @ depth {depth}"), consistent: false, expansion: expand(&sentence, *depth) });
    }
    out
}

fn brute_force_model(g: &GroundConjunction) -> bool {
    let n = g.num_atoms();
    (0u64..1 << n).any(|m| g.eval(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
}

fn hcs_correctness(cfg: &WorkspaceConfig) -> Outcome {
    let suite = herbrand_suite(cfg);
    let consistent = suite.iter().filter(|e| e.consistent).count();
    let mut bad = Vec::new();
    for e in &suite {
        let verdict = match solve_expansion(&e.expansion) {
            Some(v) if e.expansion.eval(&v) => "SAT",
            Some(_) => "SAT with a model the conjunction rejects",
            None => "UNSAT",
        };
        let want = if e.consistent { "SAT" } else { "UNSAT" };
        if verdict != want {
            bad.push(format!("{}: {verdict}", e.label));
        }
    }
    let enough = consistent >= 20;
    Outcome::new(
        enough && bad.is_empty(),
        format!(
            "{consistent} consistent sentences solved and verified, {} inconsistent refuted, {} failures{}{}",
            suite.len() - consistent,
            bad.len(),
            if enough { "" } else { "; fewer than 20 generated" },
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn herbrand_principle(cfg: &WorkspaceConfig) -> Outcome {
    let suite = herbrand_suite(cfg);
    let small: Vec<&Expansion> = suite.iter().filter(|e| e.expansion.num_atoms() <= 12).collect();
    let mut disagreements = Vec::new();
    let mut modelled = 0;
    for e in &small {
        let brute = brute_force_model(&e.expansion);
        modelled += usize::from(brute);
        let solver = solve_expansion(&e.expansion).is_some_and(|v| e.expansion.eval(&v));
        if brute != solver || (e.consistent && !brute) {
            disagreements.push(e.label.clone());
        }
    }
    Outcome::new(
        disagreements.is_empty() && modelled > 0,
        format!(
            "{} expansions with at most 12 atoms, {modelled} with a brute-force model, {} disagreements{}",
            small.len(),
            disagreements.len(),
            disagreements.first().map(|d| format!("; first: {d}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// Totality

/// Circuits for PIGEON over `w`-bit arguments: the constant 0, `f(r,x) = x`,
/// `f(r,x) = r`, then `count` circuits whose outputs are random DNFs over at
/// most four argument bits.
pub fn pigeon_battery(w: usize, count: usize, seed: u64) -> Vec<BoolCircuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5049_4745_4f4e);
    let build = |f: &mut dyn FnMut(&mut CircuitBuilder, &[Wire]) -> Vec<Wire>| {
        let mut b = CircuitBuilder::new(2 * w, usize::MAX);
        let ins: Vec<Wire> = (0..2 * w).map(|i| b.input(i)).collect();
        let outs = f(&mut b, &ins);
        b.finish(outs).expect("uncapped builder")
    };
    let mut out = vec![
        build(&mut |b, _| vec![b.constant(false); w]),
        build(&mut |_, ins| ins[w..].to_vec()),
        build(&mut |_, ins| ins[..w].to_vec()),
    ];
    for _ in 0..count {
        out.push(build(&mut |b, ins| {
            (0..w)
                .map(|_| {
                    let k = rng.gen_range(1..=4usize);
                    let support: Vec<Wire> = (0..k).map(|_| ins[rng.gen_range(0..ins.len())]).collect();
                    let mut terms = Vec::new();
                    for row in 0..1usize << k {
                        if rng.gen_bool(0.4) {
                            let lits: Vec<Wire> = support
                                .iter()
                                .enumerate()
                                .map(|(j, &s)| if row >> j & 1 == 1 { s } else { b.not(s) })
                                .collect();
                            terms.push(b.and_all(&lits));
                        }
                    }
                    b.or_all(&terms)
                })
                .collect()
        }));
    }
    out
}

fn totality_sweeps(cfg: &WorkspaceConfig) -> Outcome {
    let battery = pigeon_battery(5, 4 * cfg.battery_size, cfg.seed);
    let pigeon_cases: Vec<(usize, u64)> = (0..battery.len()).flat_map(|i| (0..=16u64).map(move |r| (i, r))).collect();
    let problems: Vec<TfnpProblem> = battery.iter().map(|c| pigeon_problem(PigeonMap::Circuit(c.clone()))).collect();
    let pigeon_bad: Vec<String> = pigeon_cases
        .par_iter()
        .filter_map(|&(i, r)| {
            let x = BitString::from_num(r);
            match solve_brute(&problems[i], &x) {
                Ok(y) if verify_solution(&problems[i], &x, &y).unwrap_or(false) => None,
                Ok(y) => Some(format!("circuit {i}, r = {r}: returned non-witness {y}")),
                Err(e) => Some(format!("circuit {i}, r = {r}: {e}")),
            }
        })
        .collect();
    let factoring = factoring_problem();
    let factoring_bad: Vec<String> = (0..=1u64 << 16)
        .into_par_iter()
        .filter_map(|n| {
            let x = BitString::from_num(n);
            match solve_brute(&factoring, &x) {
                // trial division decides what a witness must look like
                Ok(m) => {
                    let m = m.value().unwrap_or(0);
                    let proper = 1 < m && m < n && n % m == 0;
                    (is_composite(n) && !proper).then(|| format!("N = {n}: {m} is not a proper divisor"))
                }
                Err(e) => Some(format!("N = {n}: {e}")),
            }
        })
        .collect();
    let violations = pigeon_bad.len() + factoring_bad.len();
    Outcome::new(
        violations == 0,
        format!(
            "PIGEON: {} circuits x r <= 16, FACTORING: N <= 65536, {violations} totality violations{}",
            battery.len(),
            pigeon_bad.iter().chain(&factoring_bad).next().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// Many-one reductions

fn reduction_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn many_one_contract(cfg: &WorkspaceConfig) -> Outcome {
    let dir = cfg.data_dir.join("reductions");
    let files = match reduction_files(&dir) {
        Ok(f) => f,
        Err(e) => return Outcome::new(false, e),
    };
    let mut lines = Vec::new();
    let mut ok = true;
    let (mut identity, mut php, mut embeds, mut controls) = (false, false, false, 0);
    for file in &files {
        let name = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let loaded = load_reduction_file(file).and_then(|r| Ok((build_reductions(file, &r.reduction)?, r)));
        let (built, record) = match loaded {
            Ok(v) => v,
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e}"));
                continue;
            }
        };
        let domain = match DomainSpec::parse(&record.domain) {
            Ok(d) if d.size() <= cfg.max_domain as u64 => d.instances(cfg.max_domain),
            Ok(_) => {
                ok = false;
                lines.push(format!("{name}: domain exceeds max_domain"));
                continue;
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e}"));
                continue;
            }
        };
        match record.reduction {
            ReductionRecord::Identity { .. } => identity = true,
            ReductionRecord::PigeonToHcs { .. } => php = true,
            ReductionRecord::UniversalEmbeds { .. } => embeds = true,
            ReductionRecord::Programs { .. } => {}
        }
        if record.expect == Expect::Fail {
            controls += 1;
        }
        for b in &built {
            let report = check_many_one(&b.reduction, &b.source, &b.target, &domain);
            let as_expected = match record.expect {
                Expect::Pass => report.pass,
                Expect::Fail => !report.pass && report.first_failure().is_some_and(|c| c.error.is_none()),
            };
            ok &= as_expected;
            lines.push(format!(
                "{name}/{} from {}: {} over {} instances ({} witnesses){}",
                b.reduction.name,
                b.source.name,
                if report.pass { "PASS" } else { "FAIL" },
                domain.len(),
                report.witnesses_checked(),
                if as_expected { "" } else { " UNEXPECTED" }
            ));
        }
    }
    let mut missing = Vec::new();
    for (present, what) in [(identity, "identity"), (php, "PIGEON to HCS"), (embeds, "registry embeds"), (controls > 0, "negative control")] {
        if !present {
            missing.push(what);
        }
    }
    ok &= missing.is_empty();
    if !missing.is_empty() {
        lines.push(format!("missing shipped reductions: {}", missing.join(", ")));
    }
    Outcome::new(ok, lines.join("; "))
}

// ---------------------------------------------------------------------------
// Completion

struct ToyTuring {
    turing: TuringReduction,
    oracle: TfnpProblem,
}

fn toy_turing_reductions() -> Vec<ToyTuring> {
    let factoring = factoring_problem();
    let succ = succ_problem();
    vec![
        ToyTuring {
            turing: TuringReduction::new(library::query_once(), factoring.clone(), factoring.clone()).expect("shipped program"),
            oracle: factoring,
        },
        ToyTuring {
            turing: TuringReduction::new(library::add2_via_succ(), add2_problem(), succ.clone()).expect("shipped program"),
            oracle: succ,
        },
    ]
}

/// Forged transcripts on `x`: single-bit flips of valid ones, and runs where
/// every query gets the same answer. Returns (forgeries, wrongly accepted).
fn tamper(t: &ToyTuring, x: &BitString, c: &BoolCircuit, answer_sweep: bool) -> Result<(usize, usize), TfnpError> {
    let oracle = &t.oracle;
    let good = all_transcripts(oracle, x, c, COMPLETION_LIST_LIMIT)?;
    let valid: HashSet<BitString> = good.iter().cloned().collect();
    let (mut forged, mut accepted) = (0, 0);
    for v in &good {
        for i in 0..v.len() {
            let mut bits = v.bits().to_vec();
            bits[i] = !bits[i];
            let f = BitString::from_bits(bits);
            if !valid.contains(&f) {
                forged += 1;
                accepted += usize::from(verify_transcript(oracle, x, c, &f)?);
            }
        }
    }
    if answer_sweep {
        let widths: HashSet<usize> = c
            .gates
            .iter()
            .filter_map(|g| match g {
                crate::prop::Gate::Oracle { answer_width, .. } => Some(*answer_width),
                _ => None,
            })
            .collect();
        for w in widths {
            for a in BitString::all_of_length(w) {
                let mut honest = true;
                let run = c.eval_with_oracle(x.bits(), &mut |q| {
                    // the oracle is trusted only through its own relation
                    let q = BitString::from_bits(q.to_vec());
                    honest &= a.len() == oracle.bound.eval(q.len()) + 1
                        && unpad(&a).is_some_and(|s| verify_solution(oracle, &q, &s).unwrap_or(false));
                    Ok(a.bits().to_vec())
                });
                let Ok((_, transcript)) = run else { continue };
                if !honest {
                    forged += 1;
                    accepted += usize::from(verify_transcript(oracle, x, c, &encode_transcript(&transcript))?);
                }
            }
        }
    }
    Ok((forged, accepted))
}

fn completion_lemma(cfg: &WorkspaceConfig) -> Outcome {
    let domain: Vec<BitString> = BitString::all_up_to(10).collect();
    let mut lines = Vec::new();
    let mut ok = true;
    for t in toy_turing_reductions() {
        let red = turing_to_many_one(&t.turing, cfg.gate_cap);
        let target = wrap_completion(&t.oracle);
        let report = check_many_one(&red, &t.turing.source, &target, &domain);
        ok &= report.pass;
        let tampering: Result<Vec<(usize, usize)>, TfnpError> = domain
            .par_iter()
            .filter(|x| x.len() <= 6)
            .map(|x| {
                let c = t.turing.compile(x.len(), cfg.gate_cap)?;
                tamper(&t, x, &c, x.len() <= 5)
            })
            .collect();
        let (forged, accepted) = match tampering {
            Ok(v) => v.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1)),
            Err(e) => {
                ok = false;
                lines.push(format!("{}: tamper test error {e}", t.turing.name));
                continue;
            }
        };
        ok &= accepted == 0 && forged > 0;
        lines.push(format!(
            "{}: check_many_one {} on {} instances ({} witnesses), {forged} forged transcripts, {accepted} accepted{}",
            t.turing.name,
            if report.pass { "PASS" } else { "FAIL" },
            domain.len(),
            report.witnesses_checked(),
            report.first_failure().map(|c| format!(", first failure at {}", c.instance)).unwrap_or_default()
        ));
    }
    Outcome::new(ok, lines.join("; "))
}

// ---------------------------------------------------------------------------
// coNP pairs

fn conp_lifting(cfg: &WorkspaceConfig) -> Outcome {
    let (p_hat, u_hat, red) = match pigeon_universal_setup(PigeonMap::Mod(3)) {
        Ok(v) => v,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let lifted = match lift_tfnp_reduction_to_conp_pairs(&red, &p_hat, &u_hat, cfg.gate_cap) {
        Ok(l) => l,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let source = canonical_conp_pair(&p_hat);
    let target = canonical_conp_pair(&u_hat);
    let mut domain = Vec::new();
    for x in BitString::all_up_to(6) {
        for c in circuit_battery(p_hat.witness_bound(&x), 6, cfg.battery_size, cfg.seed) {
            domain.push(conp_instance(&x, &c));
        }
    }
    let report = check_pair_reduction(&lifted, &source, &target, &domain);
    let both = report.cases.iter().filter(|c| c.source == Some(PairClass::Both) || c.target == Some(PairClass::Both)).count();
    let violations = report.cases.iter().filter(|c| !c.ok).count();
    Outcome::new(
        both == 0 && report.pass,
        format!(
            "{} instances (x, C) with |x| <= 6: {} in A0, {} in A1, {both} in both, {violations} lifting violations{}",
            domain.len(),
            report.count(PairClass::First),
            report.count(PairClass::Second),
            report.first_failure().map(|c| format!("; first: {:?}", c.error)).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// Compiler

fn compiler_equivalence(cfg: &WorkspaceConfig) -> Outcome {
    let programs = library::shipped_verifiers();
    let jobs: Vec<(usize, usize, usize)> = (0..programs.len())
        .flat_map(|p| (0..=12usize).flat_map(move |w0| (0..=12 - w0).map(move |w1| (p, w0, w1))))
        .collect();
    let results: Vec<Result<(usize, usize), String>> = jobs
        .par_iter()
        .map(|&(p, w0, w1)| {
            let prog = &programs[p];
            let c = compile_to_circuit(prog, &[w0, w1], cfg.gate_cap).map_err(|e| format!("{}: {e}", prog.name))?;
            let inputs: Vec<Vec<bool>> = (0u64..1 << (w0 + w1))
                .map(|v| (0..w0 + w1).rev().map(|i| v >> i & 1 == 1).collect())
                .collect();
            let outs = c.eval_batch(&inputs).map_err(|e| e.to_string())?;
            let mut disagree = 0;
            for (input, out) in inputs.iter().zip(outs) {
                let x = BitString::from_bits(input[..w0].to_vec());
                let y = BitString::from_bits(input[w0..].to_vec());
                let accepted = run(prog, &[&x, &y]).map_err(|e| e.to_string())?.accepted;
                disagree += usize::from(out[0] != accepted);
            }
            Ok((inputs.len(), disagree))
        })
        .collect();
    let mut checked = 0;
    let mut disagreements = 0;
    for r in results {
        match r {
            Ok((n, d)) => {
                checked += n;
                disagreements += d;
            }
            Err(e) => return Outcome::new(false, e),
        }
    }
    Outcome::new(
        disagreements == 0,
        format!("{} verifiers, {checked} inputs of total width <= 12, {disagreements} disagreements", programs.len()),
    )
}

// ---------------------------------------------------------------------------
// Proof systems

fn random_formula(rng: &mut ChaCha8Rng, vars: u32, size: usize) -> PropFormula {
    if size == 0 {
        return match rng.gen_range(0..10) {
            0 => PropFormula::Const(rng.gen_bool(0.5)),
            _ => PropFormula::var(rng.gen_range(1..=vars)),
        };
    }
    let left = rng.gen_range(0..size);
    match rng.gen_range(0..4) {
        0 => PropFormula::not(random_formula(rng, vars, size - 1)),
        1 => PropFormula::and(random_formula(rng, vars, left), random_formula(rng, vars, size - 1 - left)),
        2 => PropFormula::or(random_formula(rng, vars, left), random_formula(rng, vars, size - 1 - left)),
        _ => PropFormula::implies(random_formula(rng, vars, left), random_formula(rng, vars, size - 1 - left)),
    }
}

/// Random formulas over at most four variables, half of them forced into
/// tautologies by disjoining a random formula with its negation.
fn formula_battery(cfg: &WorkspaceConfig) -> Vec<PropFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7265_736f);
    (0..400)
        .map(|i| {
            let size = rng.gen_range(1..=7);
            let f = random_formula(&mut rng, 4, size);
            if i % 2 == 0 {
                let g = random_formula(&mut rng, 4, 2);
                PropFormula::or(f, PropFormula::or(g.clone(), PropFormula::not(g)))
            } else {
                f
            }
        })
        .collect()
}

fn resolution_soundness(cfg: &WorkspaceConfig) -> Outcome {
    let formulas = formula_battery(cfg);
    let cnfs: Vec<_> = formulas.iter().map(|f| tseitin(&PropFormula::not(f.clone()))).collect();
    let refutations: Vec<_> = cnfs.par_iter().map(find_refutation).collect();
    let system = resolution_proof_system();
    let mut accepted = 0usize;
    let mut violations = Vec::new();
    // every found refutation is tried against every CNF of the battery
    for (i, r) in refutations.iter().enumerate() {
        let Some(r) = r else { continue };
        for (j, cnf) in cnfs.iter().enumerate() {
            if (i + j) % 7 != 0 && i != j {
                continue;
            }
            if check_resolution(cnf, r) {
                accepted += 1;
                if !formulas[j].is_tautology_brute() {
                    violations.push(formulas[j].to_string());
                }
            }
        }
    }
    let mut system_accepted = 0;
    for f in &formulas {
        if let Some(proof) = crate::pairs::resolution_proof(f) {
            if let Some(g) = system.check_strict(&proof) {
                system_accepted += 1;
                if !g.is_tautology_brute() {
                    violations.push(g.to_string());
                }
            }
        }
    }
    // completeness on the battery keeps the check from being vacuous
    let missed = formulas.iter().zip(&refutations).filter(|(f, r)| f.is_tautology_brute() && r.is_none()).count();
    let php = find_refutation(&php_cnf(2, 1));
    let php_ok = php.as_ref().is_some_and(|r| check_resolution(&php_cnf(2, 1), r));
    let sat_agrees = formulas.iter().zip(&cnfs).all(|(f, c)| f.is_tautology_brute() == sat_solve(c).is_none());
    Outcome::new(
        violations.is_empty() && php_ok && missed == 0 && sat_agrees && accepted > 0,
        format!(
            "{} formulas, {accepted} accepted refutations, {system_accepted} accepted proofs, {} violations, {missed} tautologies without a refutation, PHP(2,1) {}",
            formulas.len(),
            violations.len(),
            if php_ok { "validates" } else { "does not validate" }
        ),
    )
}

fn gamma_system(_: &WorkspaceConfig) -> Outcome {
    let system = composite_sat_system();
    let bad: Vec<String> = (0..=1000u64)
        .into_par_iter()
        .filter_map(|n| {
            let composite = is_composite(n);
            let model = sat_solve(&gamma_cnf(n));
            let factors_ok = match &model {
                Some(m) => {
                    let (a, b) = gamma_factors(n, m.values());
                    a > 1 && b > 1 && a * b == n
                }
                None => true,
            };
            let accepted = system.check_strict(&gamma_proof(n)).is_some();
            (model.is_some() != composite || !factors_ok || accepted != composite)
                .then(|| format!("n = {n}: composite {composite}, satisfiable {}, accepted {accepted}", model.is_some()))
        })
        .collect();
    Outcome::new(
        bad.is_empty(),
        format!(
            "n <= 1000: {} disagreements between the solver, the proof system and trial division{}",
            bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------------------
// Numerals and multivalued functions

fn numeral_size(_: &WorkspaceConfig) -> Outcome {
    let bad: Vec<u64> = (0..=1u64 << 16)
        .into_par_iter()
        .filter(|&n| {
            let t = binary_numeral(n);
            let bits = (64 - n.leading_zeros() as usize).max(1);
            eval_arith(&t) != Some(n) || t.size() > NUMERAL_SIZE_FACTOR * bits
        })
        .collect();
    Outcome::new(
        bad.is_empty(),
        format!(
            "n <= 65536: {} numerals with a wrong value or size above {NUMERAL_SIZE_FACTOR} per bit{}",
            bad.len(),
            bad.first().map(|n| format!("; first: {n}")).unwrap_or_default()
        ),
    )
}

fn npmv_set_equality(_: &WorkspaceConfig) -> Outcome {
    let domain: Vec<BitString> = (0..=256u64).map(BitString::from_num).collect();
    let divisors = divisor_function(false);
    let lead_zero = NativeTransformer::new("lead-zero", 1, |v| Ok(BitString::from("0").concat(v[0])));
    let positive = check_npmv_reduction(&divisors, &divisors, &lead_zero, &domain);
    let identity = NativeTransformer::new("identity", 1, |v| Ok(v[0].clone()));
    let negative = check_npmv_reduction(&divisors, &divisor_function(true), &identity, &domain);
    // the control must fail by strict inclusion, not by an error
    let strict = negative.first_failure().is_some_and(|c| {
        c.error.is_none() && c.source_values.iter().all(|v| c.target_values.contains(v)) && c.source_values.len() < c.target_values.len()
    });
    Outcome::new(
        positive.pass && !negative.pass && strict,
        format!(
            "divisors via lead-zero padding: {}; divisors into divisors-with-trivial: {}{}",
            if positive.pass { "PASS" } else { "FAIL" },
            if negative.pass { "PASS (control did not fail)" } else { "FAIL as expected" },
            negative.first_failure().map(|c| format!(", first counterexample N = {}", c.instance.value().unwrap_or(0))).unwrap_or_default()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_select_by_tag_name_and_number() {
        let all = criteria();
        assert_eq!(all.len(), 11);
        let pairs: Vec<u8> = all.iter().filter(|c| c.matches("pairs")).map(|c| c.id).collect();
        assert_eq!(pairs, vec![6, 8, 9, 11]);
        assert!(all[9].matches("10") && all[9].matches("numeral"));
    }

    #[test]
    fn pigeon_battery_shapes() {
        let b = pigeon_battery(5, 3, 0);
        assert_eq!(b.len(), 6);
        assert!(b.iter().all(|c| c.input_width == 10 && c.outputs.len() == 5));
        assert_eq!(PigeonMap::Circuit(b[1].clone()).eval(9, 4), 4);
        assert_eq!(PigeonMap::Circuit(b[2].clone()).eval(9, 4), 9);
    }

    #[test]
    fn inconsistent_sentences_have_no_model() {
        for (text, depth) in INCONSISTENT_SENTENCES {
            let s = parse_sentence_file(text).unwrap();
            let g = expand(&s, *depth);
            assert!(g.num_atoms() <= 12);
            assert!(!brute_force_model(&g), "{text}");
        }
    }

    #[test]
    fn missing_data_dir_is_a_named_failure() {
        let cfg = WorkspaceConfig { data_dir: PathBuf::from("/nonexistent/tfnp-data"), ..WorkspaceConfig::default() };
        let out = many_one_contract(&cfg);
        assert!(!out.pass);
        assert!(out.detail.contains("/nonexistent/tfnp-data"));
    }
}
