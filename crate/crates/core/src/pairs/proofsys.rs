//! Propositional proof systems as total functions from byte strings onto
//! formulas. Strings that are not proofs map to a fixed default formula.

use std::fmt;
use std::sync::Arc;

use crate::prop::{tseitin, PropFormula};

use super::resolution::{check_resolution, find_refutation, ResolutionRefutation};

/// What every emitted formula belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SoundnessDomain {
    Taut,
    Sat,
}

pub type Checker = Arc<dyn Fn(&[u8]) -> Option<PropFormula> + Send + Sync>;

#[derive(Clone)]
pub struct ProofSystem {
    pub name: String,
    pub domain: SoundnessDomain,
    /// Output on strings the checker rejects; lies in the domain.
    pub default: PropFormula,
    checker: Checker,
}

impl fmt::Debug for ProofSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProofSystem").field("name", &self.name).field("domain", &self.domain).finish()
    }
}

impl ProofSystem {
    pub fn new(name: impl Into<String>, domain: SoundnessDomain, default: PropFormula, checker: Checker) -> Self {
        ProofSystem { name: name.into(), domain, default, checker }
    }

    /// The proven formula, or `None` when `proof` is not a proof.
    pub fn check_strict(&self, proof: &[u8]) -> Option<PropFormula> {
        (self.checker)(proof)
    }

    /// The total proof function.
    pub fn check(&self, proof: &[u8]) -> PropFormula {
        self.check_strict(proof).unwrap_or_else(|| self.default.clone())
    }
}

/// Largest variable count the truth-table escape accepts.
pub const TRUTH_TABLE_MAX_VARS: u32 = 16;

fn excluded_middle() -> PropFormula {
    PropFormula::or(PropFormula::var(1), PropFormula::not(PropFormula::var(1)))
}

/// `TAUT:<φ>:<row values>` where row `k` assigns bit `i-1` of `k` to `x_i`
/// and every row value is `1`.
pub fn truth_table_proof(phi: &PropFormula) -> Option<Vec<u8>> {
    let n = phi.max_var();
    if n > TRUTH_TABLE_MAX_VARS {
        return None;
    }
    let rows: String = (0u64..1 << n)
        .map(|k| if phi.eval_with(&|i| k >> (i - 1) & 1 == 1) { '1' } else { '0' })
        .collect();
    rows.bytes().all(|b| b == b'1').then(|| format!("TAUT:{phi}:{rows}").into_bytes())
}

fn check_truth_table(text: &str) -> Option<PropFormula> {
    let body = text.strip_prefix("TAUT:")?;
    let (formula, rows) = body.rsplit_once(':')?;
    let phi: PropFormula = formula.parse().ok()?;
    let n = phi.max_var();
    if n > TRUTH_TABLE_MAX_VARS || rows.len() as u64 != 1 << n || rows.bytes().any(|b| b != b'1') {
        return None;
    }
    (0u64..1 << n).all(|k| phi.eval_with(&|i| k >> (i - 1) & 1 == 1)).then_some(phi)
}

/// `RES:<φ>` on the first line, then a refutation of `tseitin(¬φ)`.
pub fn resolution_proof(phi: &PropFormula) -> Option<Vec<u8>> {
    let r = find_refutation(&tseitin(&PropFormula::not(phi.clone())))?;
    Some(format!("RES:{phi}\n{}", r.to_text()).into_bytes())
}

fn check_resolution_text(text: &str) -> Option<PropFormula> {
    let (head, steps) = text.split_once('\n').unwrap_or((text, ""));
    let phi: PropFormula = head.strip_prefix("RES:")?.parse().ok()?;
    let r = ResolutionRefutation::from_text(steps).ok()?;
    check_resolution(&tseitin(&PropFormula::not(phi.clone())), &r).then_some(phi)
}

/// Resolution refutations of the negation, plus the truth-table escape.
pub fn resolution_proof_system() -> ProofSystem {
    let checker: Checker = Arc::new(|proof| {
        let text = std::str::from_utf8(proof).ok()?;
        check_resolution_text(text).or_else(|| check_truth_table(text))
    });
    ProofSystem::new("resolution", SoundnessDomain::Taut, excluded_middle(), checker)
}

/// Only the truth-table escape.
pub fn truth_table_system() -> ProofSystem {
    let checker: Checker = Arc::new(|proof| check_truth_table(std::str::from_utf8(proof).ok()?));
    ProofSystem::new("truth-table", SoundnessDomain::Taut, excluded_middle(), checker)
}

/// The shortest of the exhibited truth-table and resolution proofs of `phi`.
pub fn shortest_exhibited_proof(system: &ProofSystem, phi: &PropFormula) -> Option<Vec<u8>> {
    [truth_table_proof(phi), resolution_proof(phi)]
        .into_iter()
        .flatten()
        .filter(|d| system.check_strict(d).as_ref() == Some(phi))
        .min_by_key(Vec::len)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> PropFormula {
        s.parse().unwrap()
    }

    #[test]
    fn truth_table_escape() {
        let phi = f("x1 | ~x1");
        let d = truth_table_proof(&phi).unwrap();
        assert_eq!(d, b"TAUT:x1 | ~x1:11");
        assert_eq!(resolution_proof_system().check(&d), phi);
        assert!(truth_table_proof(&f("x1 | x2")).is_none());
        assert!(truth_table_system().check_strict(b"TAUT:x1 | x2:1111").is_none());
    }

    #[test]
    fn resolution_proof_of_pigeonhole() {
        // two pigeons cannot both sit in one hole
        let php = f("~(x1 & x2 & (~x1 | ~x2))");
        let d = resolution_proof(&php).unwrap();
        assert!(d.starts_with(b"RES:"));
        assert_eq!(resolution_proof_system().check_strict(&d), Some(php.clone()));
        assert!(truth_table_system().check_strict(&d).is_none());
        assert!(resolution_proof(&f("x1 | x2")).is_none());
    }

    #[test]
    fn junk_maps_to_default() {
        let sys = resolution_proof_system();
        for junk in [&b"\xff\x00junk"[..], b"", b"RES:x1\nINIT 0", b"TAUT:x1:1"] {
            assert_eq!(sys.check(junk), f("x1 | ~x1"));
        }
    }
}
