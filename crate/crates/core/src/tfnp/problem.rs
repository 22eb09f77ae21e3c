use std::fmt;
use std::sync::Arc;

use crate::bits::{length_lex, BitString};
use crate::vm::{run, PolyBound, VerifierProgram};

use super::TfnpError;

/// A polynomial-time predicate on a fixed number of bit strings.
pub trait Relation: Send + Sync {
    fn arity(&self) -> usize;
    fn holds(&self, inputs: &[&BitString]) -> Result<bool, TfnpError>;
    fn name(&self) -> String;
    /// The bytecode behind this relation, when it has one.
    fn program(&self) -> Option<&VerifierProgram> {
        None
    }
}

impl Relation for VerifierProgram {
    fn arity(&self) -> usize {
        self.arity
    }

    fn holds(&self, inputs: &[&BitString]) -> Result<bool, TfnpError> {
        Ok(run(self, inputs)?.accepted)
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn program(&self) -> Option<&VerifierProgram> {
        Some(self)
    }
}

type NativeFn = dyn Fn(&[&BitString]) -> Result<bool, TfnpError> + Send + Sync;

/// A relation given by Rust code.
#[derive(Clone)]
pub struct NativeRelation {
    name: String,
    arity: usize,
    f: Arc<NativeFn>,
}

impl NativeRelation {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[&BitString]) -> Result<bool, TfnpError> + Send + Sync + 'static,
    ) -> Self {
        NativeRelation { name: name.into(), arity, f: Arc::new(f) }
    }
}

impl Relation for NativeRelation {
    fn arity(&self) -> usize {
        self.arity
    }

    fn holds(&self, inputs: &[&BitString]) -> Result<bool, TfnpError> {
        if inputs.len() != self.arity {
            return Err(TfnpError::Arity { expected: self.arity, found: inputs.len() });
        }
        (self.f)(inputs)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// For an instance, a finite superset of its witnesses, or `None` when every
/// string up to the bound must be swept.
pub type CandidateFn = Arc<dyn Fn(&BitString) -> Result<Option<Vec<BitString>>, TfnpError> + Send + Sync>;

/// Largest exhaustive witness space (number of candidate strings) swept by default.
pub const DEFAULT_SWEEP_LIMIT: u64 = 1 << 22;

/// A total search problem: find `y` with `|y| <= bound(|x|)` and `R(x, y)`.
#[derive(Clone)]
pub struct TfnpProblem {
    pub name: String,
    pub bound: PolyBound,
    pub relation: Arc<dyn Relation>,
    /// Structural witness candidates; without it searches sweep every string
    /// up to the bound.
    pub candidates: Option<CandidateFn>,
}

impl fmt::Debug for TfnpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TfnpProblem")
            .field("name", &self.name)
            .field("bound", &self.bound)
            .field("relation", &self.relation.name())
            .finish()
    }
}

impl TfnpProblem {
    pub fn new(name: impl Into<String>, bound: PolyBound, relation: Arc<dyn Relation>) -> Self {
        assert_eq!(relation.arity(), 2, "search problems relate instances to witnesses");
        TfnpProblem { name: name.into(), bound, relation, candidates: None }
    }

    pub fn with_candidates(mut self, c: CandidateFn) -> Self {
        self.candidates = Some(c);
        self
    }

    pub fn witness_bound(&self, x: &BitString) -> usize {
        self.bound.eval(x.len())
    }
}

/// `|y| <= p(|x|)` and `R(x, y)`.
pub fn verify_solution(p: &TfnpProblem, x: &BitString, y: &BitString) -> Result<bool, TfnpError> {
    if y.len() > p.witness_bound(x) {
        return Ok(false);
    }
    p.relation.holds(&[x, y])
}

fn sweep_size(bound: usize) -> Option<u64> {
    // strings of length 0..=bound
    1u64.checked_shl(u32::try_from(bound).ok()?.checked_add(1)?).map(|v| v - 1)
}

fn sorted(mut v: Vec<BitString>) -> Vec<BitString> {
    v.sort_by(length_lex);
    v.dedup();
    v
}

/// Every witness of `x`, in length-lex order.
pub fn all_witnesses(p: &TfnpProblem, x: &BitString) -> Result<Vec<BitString>, TfnpError> {
    all_witnesses_limited(p, x, DEFAULT_SWEEP_LIMIT)
}

pub fn all_witnesses_limited(p: &TfnpProblem, x: &BitString, limit: u64) -> Result<Vec<BitString>, TfnpError> {
    let listed = match &p.candidates {
        Some(c) => c(x)?,
        None => None,
    };
    let candidates = match listed {
        Some(v) => sorted(v),
        None => {
            let bound = p.witness_bound(x);
            match sweep_size(bound) {
                Some(s) if s <= limit => BitString::all_up_to(bound).collect(),
                _ => return Err(TfnpError::SearchSpaceTooLarge { problem: p.name.clone(), bound }),
            }
        }
    };
    let mut out = Vec::new();
    for y in candidates {
        if verify_solution(p, x, &y)? {
            out.push(y);
        }
    }
    Ok(out)
}

/// The length-lex least witness of `x`.
pub fn solve_brute(p: &TfnpProblem, x: &BitString) -> Result<BitString, TfnpError> {
    solve_brute_limited(p, x, DEFAULT_SWEEP_LIMIT)
}

pub fn solve_brute_limited(p: &TfnpProblem, x: &BitString, limit: u64) -> Result<BitString, TfnpError> {
    let violation = || TfnpError::TotalityViolation { problem: p.name.clone(), instance: x.to_hex() };
    let listed = match &p.candidates {
        Some(c) => c(x)?,
        None => None,
    };
    if let Some(v) = listed {
        for y in sorted(v) {
            if verify_solution(p, x, &y)? {
                return Ok(y);
            }
        }
        return Err(violation());
    }
    // the sweep stops early, so only the number of tried candidates is capped
    let bound = p.witness_bound(x);
    for (tried, y) in BitString::all_up_to(bound).enumerate() {
        if tried as u64 >= limit {
            return Err(TfnpError::SearchSpaceTooLarge { problem: p.name.clone(), bound });
        }
        if p.relation.holds(&[x, &y])? {
            return Ok(y);
        }
    }
    Err(violation())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity_problem() -> TfnpProblem {
        // y is a single bit equal to the parity of x
        let r = NativeRelation::new("parity", 2, |v| {
            let ones = v[0].bits().iter().filter(|&&b| b).count();
            Ok(v[1].len() == 1 && v[1].bits()[0] == (ones % 2 == 1))
        });
        TfnpProblem::new("PARITY", PolyBound::constant(1), Arc::new(r))
    }

    #[test]
    fn sweep_and_bound() {
        let p = parity_problem();
        let x: BitString = "111".into();
        assert_eq!(solve_brute(&p, &x).unwrap(), BitString::from("1"));
        assert_eq!(all_witnesses(&p, &x).unwrap(), vec![BitString::from("1")]);
        assert!(!verify_solution(&p, &x, &"10".into()).unwrap());
    }

    #[test]
    fn totality_violation_and_guard() {
        let never = NativeRelation::new("never", 2, |_| Ok(false));
        let p = TfnpProblem::new("EMPTY", PolyBound::constant(3), Arc::new(never.clone()));
        assert!(matches!(solve_brute(&p, &BitString::new()), Err(TfnpError::TotalityViolation { .. })));
        let big = TfnpProblem::new("BIG", PolyBound::constant(40), Arc::new(never));
        assert!(matches!(all_witnesses(&big, &BitString::new()), Err(TfnpError::SearchSpaceTooLarge { .. })));
    }
}
