//! JSON records for shipped problems and reductions, and domain specs.
//!
//! Paths inside a record are relative to the record file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::logic::parse_sentence_file;
use crate::tfnp::{
    add2_problem, embed_reduction, factoring_problem, hcs_problem, identity_reduction, pigeon_problem, pigeon_to_hcs,
    php_sentence, rev_problem, succ_problem, universal_problem, ManyOneReduction, PigeonMap, Registry, TfnpProblem,
};
use crate::vm::{parse_program, PolyBound, VerifierProgram};

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemRecord {
    /// A bytecode verifier `R(x, y)` with witness bound `bound`.
    Program { name: String, program: PathBuf, bound: PolyBound },
    /// One of `factoring`, `succ`, `add2`, `rev`.
    Builtin { name: String },
    Pigeon { map: PigeonMap },
    /// `HCS(Φ)` for the sentence in a sentence file.
    Hcs { sentence: PathBuf },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionRecord {
    Identity { problem: PathBuf },
    /// PIGEON(f) to `HCS(Φ_PHP)`, once per listed map.
    PigeonToHcs { maps: Vec<PigeonMap> },
    /// Every listed problem, registered under its own name, into `U`.
    UniversalEmbeds { key: String, problems: Vec<PathBuf> },
    /// `f` and `g` given as bytecode programs.
    Programs { name: String, source: PathBuf, target: PathBuf, f: PathBuf, g: PathBuf, f_bound: Option<PolyBound> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ReductionFile {
    #[serde(flatten)]
    pub reduction: ReductionRecord,
    /// Default domain spec for `check-reduction`.
    pub domain: String,
    /// `fail` marks a negative control.
    pub expect: Expect,
}

#[derive(Clone, Debug)]
pub struct BuiltReduction {
    pub reduction: ManyOneReduction,
    pub source: TfnpProblem,
    pub target: TfnpProblem,
}

fn read(path: &Path) -> Result<String, RecordError> {
    std::fs::read_to_string(path).map_err(|e| RecordError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn parse_err(path: &Path, msg: impl ToString) -> RecordError {
    RecordError::Parse { path: path.display().to_string(), msg: msg.to_string() }
}

fn relative(base: &Path, p: &Path) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(p)
}

fn load_program(path: &Path) -> Result<VerifierProgram, RecordError> {
    parse_program(&read(path)?).map_err(|e| parse_err(path, e))
}

pub fn load_problem(path: &Path) -> Result<TfnpProblem, RecordError> {
    load_problem_with_program(path).map(|(p, _)| p)
}

/// The problem and, for `program` records, its verifier.
pub fn load_problem_with_program(path: &Path) -> Result<(TfnpProblem, Option<VerifierProgram>), RecordError> {
    let record: ProblemRecord = serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))?;
    let problem = match record {
        ProblemRecord::Program { name, program, bound } => {
            let prog = load_program(&relative(path, &program))?;
            if prog.arity != 2 {
                return Err(parse_err(path, format!("verifier {} has arity {}, not 2", prog.name, prog.arity)));
            }
            return Ok((TfnpProblem::new(name, bound, Arc::new(prog.clone())), Some(prog)));
        }
        ProblemRecord::Builtin { name } => match name.as_str() {
            "factoring" => factoring_problem(),
            "succ" => succ_problem(),
            "add2" => add2_problem(),
            "rev" => rev_problem(),
            other => return Err(parse_err(path, format!("unknown builtin problem {other:?}"))),
        },
        ProblemRecord::Pigeon { map } => pigeon_problem(map),
        ProblemRecord::Hcs { sentence } => {
            let file = relative(path, &sentence);
            hcs_problem(&parse_sentence_file(&read(&file)?).map_err(|e| parse_err(&file, e))?)
        }
    };
    Ok((problem, None))
}

pub fn load_reduction_file(path: &Path) -> Result<ReductionFile, RecordError> {
    serde_json::from_str(&read(path)?).map_err(|e| parse_err(path, e))
}

/// Builds every reduction a record describes.
pub fn build_reductions(path: &Path, record: &ReductionRecord) -> Result<Vec<BuiltReduction>, RecordError> {
    Ok(match record {
        ReductionRecord::Identity { problem } => {
            let p = load_problem(&relative(path, problem))?;
            vec![BuiltReduction { reduction: identity_reduction(), source: p.clone(), target: p }]
        }
        ReductionRecord::PigeonToHcs { maps } => {
            let target = hcs_problem(&php_sentence());
            maps.iter()
                .map(|m| BuiltReduction {
                    reduction: pigeon_to_hcs(m.clone()),
                    source: pigeon_problem(m.clone()),
                    target: target.clone(),
                })
                .collect()
        }
        ReductionRecord::UniversalEmbeds { key, problems } => {
            let mut registry = Registry::new(key.as_bytes());
            let mut names = Vec::new();
            for p in problems {
                let problem = load_problem(&relative(path, p))?;
                names.push(problem.name.clone());
                registry.register(&problem.name.clone(), problem).map_err(|e| parse_err(path, e))?;
            }
            let registry = Arc::new(registry);
            let target = universal_problem(registry.clone());
            names
                .iter()
                .map(|n| {
                    Ok(BuiltReduction {
                        reduction: embed_reduction(registry.clone(), n).map_err(|e| parse_err(path, e))?,
                        source: registry.get(n).expect("just registered").problem.clone(),
                        target: target.clone(),
                    })
                })
                .collect::<Result<_, RecordError>>()?
        }
        ReductionRecord::Programs { name, source, target, f, g, f_bound } => {
            let f = load_program(&relative(path, f))?;
            let g = load_program(&relative(path, g))?;
            if f.arity != 1 || g.arity != 2 {
                return Err(parse_err(path, "f must read x and g must read (x, z)"));
            }
            let mut red = ManyOneReduction::new(name.clone(), Arc::new(f), Arc::new(g));
            if let Some(b) = f_bound {
                red = red.with_f_bound(*b);
            }
            vec![BuiltReduction {
                reduction: red,
                source: load_problem(&relative(path, source))?,
                target: load_problem(&relative(path, target))?,
            }]
        }
    })
}

/// A set of instances: `nums:A..B` (inclusive, canonical numerals) or
/// `strings:W` (every string of length at most `W`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    Nums(u64, u64),
    Strings(usize),
}

impl DomainSpec {
    pub fn parse(spec: &str) -> Result<Self, String> {
        let bad = || format!("bad domain spec {spec:?}; expected nums:A..B or strings:W");
        let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
        match kind {
            "nums" => {
                let (a, b) = rest.split_once("..").ok_or_else(bad)?;
                let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                Ok(DomainSpec::Nums(a, b))
            }
            "strings" => Ok(DomainSpec::Strings(rest.trim().parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }

    /// Number of instances, saturating.
    pub fn size(&self) -> u64 {
        match *self {
            DomainSpec::Nums(a, b) => (b - a).saturating_add(1),
            DomainSpec::Strings(w) if w >= 63 => u64::MAX,
            DomainSpec::Strings(w) => (2u64 << w) - 1,
        }
    }

    /// The first `limit` instances.
    pub fn instances(&self, limit: usize) -> Vec<BitString> {
        match *self {
            DomainSpec::Nums(a, b) => (a..=b).take(limit).map(BitString::from_num).collect(),
            DomainSpec::Strings(w) => BitString::all_up_to(w.min(62)).take(limit).collect(),
        }
    }
}

/// A decimal number or `<len>:<hex>`.
pub fn parse_instance(text: &str) -> Result<BitString, String> {
    let t = text.trim();
    if t.contains(':') {
        return BitString::from_hex(t).map_err(|e| e.to_string());
    }
    t.parse::<u64>()
        .map(BitString::from_num)
        .map_err(|_| format!("instance {text:?} is neither a decimal number nor <len>:<hex>"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domains_and_instances() {
        assert_eq!(DomainSpec::parse("nums:2..5").unwrap().instances(10).len(), 4);
        assert_eq!(DomainSpec::parse("strings:3").unwrap().size(), 15);
        assert_eq!(DomainSpec::parse("strings:3").unwrap().instances(100).len(), 15);
        assert!(DomainSpec::parse("nums:5..2").is_err());
        assert!(DomainSpec::parse("bits:3").is_err());
        assert_eq!(parse_instance("15").unwrap(), BitString::from_num(15));
        assert_eq!(parse_instance("4:f").unwrap(), BitString::from_num(15));
        assert!(parse_instance("4:fz").is_err());
        assert!(parse_instance("0x1f").is_err());
    }

    #[test]
    fn program_record_needs_a_verifier() {
        let dir = std::env::temp_dir().join(format!("tfnp-records-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let prog = dir.join("id.asm");
        std::fs::write(&prog, crate::vm::print_program(&crate::vm::library::identity())).unwrap();
        let rec = dir.join("p.json");
        std::fs::write(&rec, r#"{"kind":"program","name":"ID","program":"id.asm","bound":{"c":1,"k":1,"d":0}}"#)
            .unwrap();
        assert!(matches!(load_problem(&rec), Err(RecordError::Parse { .. })));
        std::fs::write(&rec, r#"{"kind":"builtin","name":"nope"}"#).unwrap();
        assert!(load_problem(&rec).unwrap_err().to_string().contains("nope"));
        assert!(matches!(load_problem(&dir.join("missing.json")), Err(RecordError::Io { .. })));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
