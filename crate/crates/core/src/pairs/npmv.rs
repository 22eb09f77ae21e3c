//! Total multivalued functions given by witnessed relations, their search
//! problems, and the set-equality reduction check between them.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;
use crate::tfnp::{flatten_np_relation, NativeRelation, Relation, TfnpError, TfnpProblem, Transformer};
use crate::vm::{decode_tuple, encode_tuple, PolyBound};

/// A superset of the pairs `(y, z)` with `R(x, y, z)`.
pub type PairCandidates = Arc<dyn Fn(&BitString) -> Vec<(BitString, BitString)> + Send + Sync>;

/// `f{x} = { y : ∃z R(x, y, z) }` with `|y| ≤ y_bound`, `|z| ≤ z_bound`.
#[derive(Clone)]
pub struct NpmvFunction {
    pub name: String,
    pub relation: Arc<dyn Relation>,
    pub y_bound: PolyBound,
    pub z_bound: PolyBound,
    pub candidates: Option<PairCandidates>,
}

impl fmt::Debug for NpmvFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NpmvFunction").field("name", &self.name).field("relation", &self.relation.name()).finish()
    }
}

/// Largest `(y, z)` sweep attempted without candidates.
pub const NPMV_SWEEP_LIMIT: u64 = 1 << 20;

impl NpmvFunction {
    pub fn new(name: impl Into<String>, relation: Arc<dyn Relation>, y_bound: PolyBound, z_bound: PolyBound) -> Self {
        assert_eq!(relation.arity(), 3, "multivalued functions are witnessed by R(x, y, z)");
        NpmvFunction { name: name.into(), relation, y_bound, z_bound, candidates: None }
    }

    pub fn with_candidates(mut self, c: PairCandidates) -> Self {
        self.candidates = Some(c);
        self
    }

    fn in_bounds(&self, x: &BitString, y: &BitString, z: &BitString) -> bool {
        y.len() <= self.y_bound.eval(x.len()) && z.len() <= self.z_bound.eval(x.len())
    }

    pub fn holds(&self, x: &BitString, y: &BitString, z: &BitString) -> Result<bool, TfnpError> {
        Ok(self.in_bounds(x, y, z) && self.relation.holds(&[x, y, z])?)
    }

    /// The value set in length-lex order.
    pub fn value_set(&self, x: &BitString) -> Result<Vec<BitString>, TfnpError> {
        let pairs: Vec<(BitString, BitString)> = match &self.candidates {
            Some(c) => c(x),
            None => {
                let (py, pz) = (self.y_bound.eval(x.len()), self.z_bound.eval(x.len()));
                if py + pz + 2 > 40 || (2u64 << py) * (2u64 << pz) > NPMV_SWEEP_LIMIT {
                    return Err(TfnpError::SearchSpaceTooLarge { problem: self.name.clone(), bound: py + pz });
                }
                let zs: Vec<BitString> = BitString::all_up_to(pz).collect();
                BitString::all_up_to(py).flat_map(|y| zs.iter().map(move |z| (y.clone(), z.clone()))).collect()
            }
        };
        let mut values = BTreeSet::new();
        for (y, z) in pairs {
            if !values.contains(&y) && self.holds(x, &y, &z)? {
                values.insert(y);
            }
        }
        Ok(values.into_iter().collect())
    }
}

/// `Q(x, u) = R(x, (u)_1, (u)_2)`.
pub fn npmv_to_tfnp(g: &NpmvFunction) -> Result<TfnpProblem, TfnpError> {
    let mut p = flatten_np_relation(&format!("Q[{}]", g.name), g.relation.clone(), g.y_bound, g.z_bound)?;
    if let Some(c) = g.candidates.clone() {
        p = p.with_candidates(Arc::new(move |x: &BitString| {
            Ok(Some(c(x).iter().map(|(y, z)| encode_tuple(&[y, z])).collect()))
        }));
    }
    Ok(p)
}

/// First component of a pair code, or `None` when malformed.
pub fn project_value(u: &BitString) -> Option<BitString> {
    decode_tuple(u, 2).map(|mut p| p.swap_remove(0))
}

#[derive(Clone, Debug, Serialize)]
pub struct NpmvCase {
    pub instance: BitString,
    pub image: Option<BitString>,
    pub source_values: Vec<BitString>,
    pub target_values: Vec<BitString>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NpmvReport {
    pub cases: Vec<NpmvCase>,
    pub pass: bool,
}

impl NpmvReport {
    pub fn first_failure(&self) -> Option<&NpmvCase> {
        self.cases.iter().find(|c| !c.ok)
    }
}

/// `f{x} = g{h(x)}` as sets on every `x` in `domain`.
pub fn check_npmv_reduction(
    f: &NpmvFunction,
    g: &NpmvFunction,
    h: &dyn Transformer,
    domain: &[BitString],
) -> NpmvReport {
    let cases: Vec<NpmvCase> = domain
        .par_iter()
        .map(|x| {
            let mut case = NpmvCase {
                instance: x.clone(),
                image: None,
                source_values: Vec::new(),
                target_values: Vec::new(),
                error: None,
                ok: false,
            };
            let run = |case: &mut NpmvCase| -> Result<(), TfnpError> {
                case.source_values = f.value_set(x)?;
                let hx = h.apply(&[x])?;
                case.target_values = g.value_set(&hx)?;
                case.image = Some(hx);
                case.ok = case.source_values == case.target_values;
                Ok(())
            };
            if let Err(e) = run(&mut case) {
                case.error = Some(e.to_string());
            }
            case
        })
        .collect();
    let pass = cases.iter().all(|c| c.ok);
    NpmvReport { cases, pass }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Trial-division certificate that `n` has no divisor in `2..=isqrt(n)`:
/// bit `d - 2` is 1 for each such `d`, which the checker verifies.
pub fn trial_division_certificate(n: u64) -> BitString {
    BitString::ones(isqrt(n).saturating_sub(1) as usize)
}

fn certifies_prime(n: u64, z: &BitString) -> bool {
    z.len() as u64 == isqrt(n).saturating_sub(1) && (2..=isqrt(n)).all(|d| z.bits()[(d - 2) as usize] && n % d != 0)
}

/// `d{N}`: the nontrivial divisors of `N` (with `z = ε`), or `N` itself when
/// it has none (with `z` its trial-division certificate). When `all` is set,
/// `1` and `N` are also values (witnessed by `z = ε`).
pub fn divisor_function(all: bool) -> NpmvFunction {
    let name = if all { "divisors-with-trivial" } else { "divisors" };
    let relation = NativeRelation::new(name, 3, move |v| {
        let (Some(n), Some(y)) = (v[0].value(), v[1].canonical_value()) else { return Ok(false) };
        let z = v[2];
        let nontrivial = 1 < y && y < n && n % y == 0;
        let trivial = all && z.is_empty() && (y == 1 || y == n) && n > 0;
        Ok((nontrivial && z.is_empty()) || trivial || (y == n && certifies_prime(n, z)))
    });
    let candidates: PairCandidates = Arc::new(|x: &BitString| {
        let n = x.value().unwrap_or(0);
        let mut out: Vec<(BitString, BitString)> =
            (1..=n).filter(|d| n % d == 0).map(|d| (BitString::from_num(d), BitString::new())).collect();
        out.push((BitString::from_num(n), trial_division_certificate(n)));
        out
    });
    // isqrt(N) - 1 <= |N|^2 for |N| <= 16
    NpmvFunction::new(name, Arc::new(relation), PolyBound::linear(), PolyBound::new(1, 2, 0)).with_candidates(candidates)
}
