//! The concrete search problems: PIGEON, FACTORING and small toy problems
//! used by the reduction tests.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::prop::BoolCircuit;
use crate::vm::{decode_tuple, encode_tuple, library, PolyBound};

use super::padding::unpad;
use super::problem::{NativeRelation, TfnpProblem};
use super::TfnpError;

/// Largest `r` whose PIGEON witnesses are listed structurally.
pub const PIGEON_LIST_LIMIT: u64 = 256;

/// The map `f(r, x)` of a PIGEON instance family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PigeonMap {
    Identity,
    Constant(u64),
    /// `x mod m`; `m = 0` behaves as the identity.
    Mod(u64),
    /// A circuit on `2w` inputs reading `r` then `x`, each as `w` bits
    /// MSB-first, with its outputs read MSB-first as the value. Arguments
    /// that do not fit in `w` bits map to 0.
    #[serde(skip)]
    Circuit(BoolCircuit),
}

impl PigeonMap {
    pub fn eval(&self, r: u64, x: u64) -> u64 {
        match self {
            PigeonMap::Identity => x,
            PigeonMap::Constant(c) => *c,
            PigeonMap::Mod(0) => x,
            PigeonMap::Mod(m) => x % m,
            PigeonMap::Circuit(c) => {
                let w = c.input_width / 2;
                if w < 64 && (r >> w != 0 || x >> w != 0) {
                    return 0;
                }
                let input: Vec<bool> = BitString::from_num_width(r, w)
                    .bits()
                    .iter()
                    .chain(BitString::from_num_width(x, w).bits())
                    .copied()
                    .collect();
                let out = c.eval(&input).expect("validated pigeon circuit");
                out.iter().take(64).fold(0, |acc, &b| acc << 1 | u64::from(b))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            PigeonMap::Identity => "id".into(),
            PigeonMap::Constant(c) => format!("const{c}"),
            PigeonMap::Mod(m) => format!("mod{m}"),
            PigeonMap::Circuit(c) => format!("circuit{}", c.size()),
        }
    }
}

/// A PIGEON witness: a range violation or a collision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PigeonWitness {
    Range(u64),
    Collision(u64, u64),
}

impl PigeonWitness {
    pub fn encode(&self) -> BitString {
        match *self {
            PigeonWitness::Range(u) => BitString::from_num(u),
            PigeonWitness::Collision(a, b) => encode_tuple(&[&BitString::from_num(a), &BitString::from_num(b)]),
        }
    }
}

/// Witness bound of PIGEON: a pair of two values of at most `n` bits each.
pub fn pigeon_bound() -> PolyBound {
    PolyBound::new(6, 1, 8)
}

/// `R(r, u)`: `u ≤ r ∧ f(r,u) ≥ r`, or `u = (x, x′)` with `x ≠ x′ ≤ r` and
/// `f(r,x) = f(r,x′)`. Distinctness is required; otherwise `(x, x)` would
/// be a trivial collision.
pub fn pigeon_holds(f: &PigeonMap, r: &BitString, u: &BitString) -> bool {
    let Some(r) = r.value() else { return true };
    if let Some(v) = u.canonical_value() {
        if v <= r && f.eval(r, v) >= r {
            return true;
        }
    }
    match decode_tuple(u, 2).as_deref() {
        Some([a, b]) => match (a.canonical_value(), b.canonical_value()) {
            (Some(a), Some(b)) => a != b && a <= r && b <= r && f.eval(r, a) == f.eval(r, b),
            _ => false,
        },
        _ => false,
    }
}

/// Every PIGEON witness of `r` as structured values.
pub fn pigeon_witnesses(f: &PigeonMap, r: u64) -> Vec<PigeonWitness> {
    let values: Vec<u64> = (0..=r).map(|x| f.eval(r, x)).collect();
    let mut out: Vec<PigeonWitness> = (0..=r).filter(|&x| values[x as usize] >= r).map(PigeonWitness::Range).collect();
    for a in 0..=r {
        for b in 0..=r {
            if a != b && values[a as usize] == values[b as usize] {
                out.push(PigeonWitness::Collision(a, b));
            }
        }
    }
    out
}

pub fn pigeon_problem(f: PigeonMap) -> TfnpProblem {
    let name = format!("PIGEON[{}]", f.label());
    let map = f.clone();
    let relation = NativeRelation::new(name.clone(), 2, move |v| Ok(pigeon_holds(&map, v[0], v[1])));
    let problem_name = name.clone();
    let candidates = Arc::new(move |x: &BitString| match x.value() {
        Some(r) if r <= PIGEON_LIST_LIMIT => Ok(Some(pigeon_witnesses(&f, r).iter().map(PigeonWitness::encode).collect())),
        Some(_) => Err(TfnpError::SearchSpaceTooLarge { problem: problem_name.clone(), bound: pigeon_bound().eval(x.len()) }),
        None => Ok(None),
    });
    TfnpProblem::new(name, pigeon_bound(), Arc::new(relation)).with_candidates(candidates)
}

/// FACTORING: `N` prime, or `N ≤ 1`, or `1 < M < N` with `M | N`;
/// `|M| ≤ |N|`. Decided by the shipped bytecode verifier.
pub fn factoring_problem() -> TfnpProblem {
    TfnpProblem::new("FACTORING", PolyBound::linear(), Arc::new(library::factoring_verifier()))
}

/// SUCC: `y = x + 1 mod 2^|x|` with `|y| = |x|`.
pub fn succ_problem() -> TfnpProblem {
    TfnpProblem::new("SUCC", PolyBound::linear(), Arc::new(library::add_const_verifier("succ", 1)))
}

/// ADD2: `y = x + 2 mod 2^|x|` with `|y| = |x|`.
pub fn add2_problem() -> TfnpProblem {
    TfnpProblem::new("ADD2", PolyBound::linear(), Arc::new(library::add_const_verifier("add2", 2)))
}

/// REV: `y` is `x` reversed. The relation runs the shipped reversal program.
pub fn rev_problem() -> TfnpProblem {
    let prog = library::reverse_pad();
    let relation = NativeRelation::new("rev", 2, move |v| {
        let out = crate::vm::run(&prog, &[v[0]])?.output;
        Ok(unpad(&out).as_ref() == Some(v[1]))
    });
    TfnpProblem::new("REV", PolyBound::linear(), Arc::new(relation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfnp::{solve_brute, verify_solution};

    fn num(n: u64) -> BitString {
        BitString::from_num(n)
    }

    #[test]
    fn factoring_examples() {
        let p = factoring_problem();
        assert!(verify_solution(&p, &num(15), &num(3)).unwrap());
        assert!(!verify_solution(&p, &num(15), &num(6)).unwrap());
        assert!(verify_solution(&p, &num(15), &num(5)).unwrap());
        assert!(verify_solution(&p, &num(13), &num(9)).unwrap());
        assert!(!verify_solution(&p, &num(16), &num(16)).unwrap());
        assert!(!verify_solution(&p, &num(13), &"10000".into()).unwrap());
        assert_eq!(solve_brute(&p, &num(7)).unwrap(), BitString::new());
        assert_eq!(solve_brute(&p, &num(4)).unwrap(), num(2));
        assert_eq!(solve_brute(&p, &num(15)).unwrap(), num(3));
    }

    #[test]
    fn pigeon_examples() {
        let id = pigeon_problem(PigeonMap::Identity);
        assert!(verify_solution(&id, &num(2), &num(2)).unwrap());
        assert!(!verify_solution(&id, &num(2), &num(1)).unwrap());
        let constant = pigeon_problem(PigeonMap::Constant(0));
        let pair = encode_tuple(&[&BitString::new(), &num(1)]);
        assert!(verify_solution(&constant, &num(2), &pair).unwrap());
        let same = encode_tuple(&[&num(1), &num(1)]);
        assert!(!verify_solution(&constant, &num(2), &same).unwrap());
        let m2 = pigeon_problem(PigeonMap::Mod(2));
        let want = PigeonWitness::Collision(0, 2).encode();
        assert_eq!(solve_brute(&m2, &num(2)).unwrap(), want);
    }

    #[test]
    fn pigeon_witness_lengths_within_bound() {
        for r in 0..=300u64 {
            let x = num(r);
            let bound = pigeon_bound().eval(x.len());
            for w in [PigeonWitness::Range(r), PigeonWitness::Collision(r, r.saturating_sub(1)), PigeonWitness::Collision(0, r)] {
                assert!(w.encode().len() <= bound, "r={r} {w:?}");
            }
        }
    }

    #[test]
    fn toy_problems() {
        let s = succ_problem();
        assert_eq!(solve_brute(&s, &"011".into()).unwrap(), BitString::from("100"));
        assert_eq!(solve_brute(&add2_problem(), &"111".into()).unwrap(), BitString::from("001"));
        assert_eq!(solve_brute(&rev_problem(), &"110".into()).unwrap(), BitString::from("011"));
    }
}
