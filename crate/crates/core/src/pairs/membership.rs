//! Bounded-quantifier membership definitions, disjoint pairs of them, and
//! reductions between pairs.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::tfnp::{CandidateFn, Relation, TfnpError, Transformer, DEFAULT_SWEEP_LIMIT};
use crate::vm::PolyBound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quantifier {
    /// `x ∈ A` iff some `y` with `|y| <= bound(|x|)` has `R(x, y)`.
    Exists,
    /// `x ∈ A` iff every `y` with `|y| <= bound(|x|)` has `β(x, y)`.
    Forall,
}

#[derive(Clone)]
pub struct Membership {
    pub name: String,
    pub quantifier: Quantifier,
    pub bound: PolyBound,
    pub relation: Arc<dyn Relation>,
    /// A superset of the strings that decide membership: the witnesses for
    /// `Exists`, the counterexamples for `Forall`. `None` sweeps.
    pub candidates: Option<CandidateFn>,
}

impl fmt::Debug for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Membership")
            .field("name", &self.name)
            .field("quantifier", &self.quantifier)
            .field("bound", &self.bound)
            .finish()
    }
}

impl Membership {
    pub fn new(name: impl Into<String>, quantifier: Quantifier, bound: PolyBound, relation: Arc<dyn Relation>) -> Self {
        assert_eq!(relation.arity(), 2, "membership relations take an instance and a string");
        Membership { name: name.into(), quantifier, bound, relation, candidates: None }
    }

    pub fn with_candidates(mut self, c: CandidateFn) -> Self {
        self.candidates = Some(c);
        self
    }

    fn find(&self, x: &BitString, want: bool) -> Result<Option<BitString>, TfnpError> {
        let bound = self.bound.eval(x.len());
        let listed = match &self.candidates {
            Some(c) => c(x)?,
            None => None,
        };
        let strings: Box<dyn Iterator<Item = BitString>> = match listed {
            Some(mut v) => {
                v.sort_by(crate::bits::length_lex);
                v.dedup();
                Box::new(v.into_iter().filter(move |y| y.len() <= bound))
            }
            None => {
                let size = u32::try_from(bound).ok().and_then(|b| 1u64.checked_shl(b.checked_add(1)?));
                if size.map_or(true, |s| s > DEFAULT_SWEEP_LIMIT) {
                    return Err(TfnpError::SearchSpaceTooLarge { problem: self.name.clone(), bound });
                }
                Box::new(BitString::all_up_to(bound))
            }
        };
        for y in strings {
            if self.relation.holds(&[x, &y])? == want {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    /// A witness for `Exists`, a counterexample for `Forall`.
    pub fn evidence(&self, x: &BitString) -> Result<Option<BitString>, TfnpError> {
        self.find(x, self.quantifier == Quantifier::Exists)
    }

    pub fn contains(&self, x: &BitString) -> Result<bool, TfnpError> {
        let found = self.evidence(x)?.is_some();
        Ok(found == (self.quantifier == Quantifier::Exists))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairClass {
    First,
    Second,
    Neither,
    /// A disjointness violation.
    Both,
}

#[derive(Clone, Debug)]
pub struct DisjointPair {
    pub name: String,
    pub first: Membership,
    pub second: Membership,
}

impl DisjointPair {
    pub fn new(name: impl Into<String>, first: Membership, second: Membership) -> Self {
        DisjointPair { name: name.into(), first, second }
    }

    pub fn classify(&self, x: &BitString) -> Result<PairClass, TfnpError> {
        Ok(match (self.first.contains(x)?, self.second.contains(x)?) {
            (true, true) => PairClass::Both,
            (true, false) => PairClass::First,
            (false, true) => PairClass::Second,
            (false, false) => PairClass::Neither,
        })
    }
}

/// A single map sending the first member into the first member and the
/// second into the second.
#[derive(Clone)]
pub struct PairReduction {
    pub name: String,
    pub f: Arc<dyn Transformer>,
}

impl fmt::Debug for PairReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PairReduction").field("name", &self.name).field("f", &self.f.name()).finish()
    }
}

impl PairReduction {
    pub fn new(name: impl Into<String>, f: Arc<dyn Transformer>) -> Self {
        assert_eq!(f.arity(), 1, "pair reductions map single instances");
        PairReduction { name: name.into(), f }
    }

    pub fn apply(&self, x: &BitString) -> Result<BitString, TfnpError> {
        self.f.apply(&[x])
    }
}

struct Composed(Arc<dyn Transformer>, Arc<dyn Transformer>);

impl Transformer for Composed {
    fn arity(&self) -> usize {
        1
    }

    fn apply(&self, inputs: &[&BitString]) -> Result<BitString, TfnpError> {
        let mid = self.0.apply(inputs)?;
        self.1.apply(&[&mid])
    }

    fn name(&self) -> String {
        format!("{};{}", self.0.name(), self.1.name())
    }
}

/// `first` then `second`.
pub fn compose_pair_reductions(first: &PairReduction, second: &PairReduction) -> PairReduction {
    PairReduction::new(format!("{};{}", first.name, second.name), Arc::new(Composed(first.f.clone(), second.f.clone())))
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCase {
    pub instance: BitString,
    pub image: Option<BitString>,
    pub source: Option<PairClass>,
    pub target: Option<PairClass>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub reduction: String,
    pub cases: Vec<PairCase>,
    pub pass: bool,
}

impl PairReport {
    pub fn first_failure(&self) -> Option<&PairCase> {
        self.cases.iter().find(|c| !c.ok)
    }

    pub fn count(&self, class: PairClass) -> usize {
        self.cases.iter().filter(|c| c.source == Some(class)).count()
    }
}

fn check_case(red: &PairReduction, source: &DisjointPair, target: &DisjointPair, x: &BitString) -> PairCase {
    let mut case =
        PairCase { instance: x.clone(), image: None, source: None, target: None, error: None, ok: false };
    let run = |case: &mut PairCase| -> Result<(), TfnpError> {
        let s = source.classify(x)?;
        case.source = Some(s);
        let y = red.apply(x)?;
        let t = target.classify(&y)?;
        case.image = Some(y);
        case.target = Some(t);
        case.ok = t != PairClass::Both
            && match s {
                PairClass::First | PairClass::Second => t == s,
                PairClass::Neither => true,
                PairClass::Both => false,
            };
        Ok(())
    };
    if let Err(e) = run(&mut case) {
        case.error = Some(e.to_string());
        case.ok = false;
    }
    case
}

/// Checks that members map to the matching members and that no tested
/// instance or image lies in both members.
pub fn check_pair_reduction(
    red: &PairReduction,
    source: &DisjointPair,
    target: &DisjointPair,
    domain: &[BitString],
) -> PairReport {
    let cases: Vec<PairCase> = domain.par_iter().map(|x| check_case(red, source, target, x)).collect();
    let pass = cases.iter().all(|c| c.ok);
    PairReport { reduction: red.name.clone(), cases, pass }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::tfnp::{NativeRelation, NativeTransformer};

    /// Even and odd numbers, both as ∀-definitions over one-bit strings.
    pub(crate) fn parity_pair() -> DisjointPair {
        let member = |want: bool| {
            let rel = NativeRelation::new(if want { "odd" } else { "even" }, 2, move |v| {
                Ok(v[0].bits().last().copied().unwrap_or(false) == want)
            });
            Membership::new(if want { "ODD" } else { "EVEN" }, Quantifier::Forall, PolyBound::constant(1), Arc::new(rel))
        };
        DisjointPair::new("parity", member(false), member(true))
    }

    fn nums(n: u64) -> Vec<BitString> {
        (0..n).map(BitString::from_num).collect()
    }

    #[test]
    fn parity_classes() {
        let p = parity_pair();
        assert_eq!(p.classify(&BitString::from_num(6)).unwrap(), PairClass::First);
        assert_eq!(p.classify(&BitString::from_num(7)).unwrap(), PairClass::Second);
    }

    #[test]
    fn successor_twice_preserves_parity() {
        let p = parity_pair();
        let plus2 = PairReduction::new(
            "plus2",
            Arc::new(NativeTransformer::new("plus2", 1, |v| Ok(BitString::from_num(v[0].value().unwrap_or(0) + 2)))),
        );
        let report = check_pair_reduction(&plus2, &p, &p, &nums(64));
        assert!(report.pass);
        assert_eq!(report.count(PairClass::First), 32);
        let twice = compose_pair_reductions(&plus2, &plus2);
        assert!(check_pair_reduction(&twice, &p, &p, &nums(64)).pass);
        let plus1 = PairReduction::new(
            "plus1",
            Arc::new(NativeTransformer::new("plus1", 1, |v| Ok(BitString::from_num(v[0].value().unwrap_or(0) + 1)))),
        );
        let bad = check_pair_reduction(&plus1, &p, &p, &nums(8));
        assert!(!bad.pass);
        assert_eq!(bad.first_failure().unwrap().instance, BitString::from_num(0));
    }
}
