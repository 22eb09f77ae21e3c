//! Flattening a witnessed NP relation `R(x, y, z)` into the search problem
//! `R′(x, (y, z)) = R(x, y, z)`.

use std::sync::Arc;

use crate::bits::BitString;
use crate::vm::{decode_tuple, encode_tuple, PolyBound};

use super::problem::{NativeRelation, Relation, TfnpProblem, DEFAULT_SWEEP_LIMIT};
use super::TfnpError;

/// Witnesses are pair codes `(y, z)` with `|y| <= y_bound(|x|)` and
/// `|z| <= z_bound(|x|)`; anything else is rejected.
pub fn flatten_np_relation(
    name: &str,
    r: Arc<dyn Relation>,
    y_bound: PolyBound,
    z_bound: PolyBound,
) -> Result<TfnpProblem, TfnpError> {
    if r.arity() != 3 {
        return Err(TfnpError::Arity { expected: 3, found: r.arity() });
    }
    let rel = r.clone();
    let relation = NativeRelation::new(format!("{}′", r.name()), 2, move |v| {
        let n = v[0].len();
        match decode_tuple(v[1], 2).as_deref() {
            Some([y, z]) if y.len() <= y_bound.eval(n) && z.len() <= z_bound.eval(n) => rel.holds(&[v[0], y, z]),
            _ => Ok(false),
        }
    });
    let problem_name = name.to_string();
    let candidates = Arc::new(move |x: &BitString| {
        let (py, pz) = (y_bound.eval(x.len()), z_bound.eval(x.len()));
        if py + pz + 2 > 40 || (2u64 << py) * (2u64 << pz) > DEFAULT_SWEEP_LIMIT {
            return Err(TfnpError::SearchSpaceTooLarge { problem: problem_name.clone(), bound: py + pz });
        }
        let zs: Vec<BitString> = BitString::all_up_to(pz).collect();
        Ok(Some(BitString::all_up_to(py).flat_map(|y| zs.iter().map(move |z| encode_tuple(&[&y, z]))).collect()))
    });
    // a pair code costs at most three bits per part bit plus four per part
    let bound = PolyBound::new(3, 0, 0).times(&y_bound.plus(&z_bound)).plus(&PolyBound::constant(8));
    Ok(TfnpProblem::new(name, bound, Arc::new(relation)).with_candidates(candidates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfnp::{all_witnesses, verify_solution};

    #[test]
    fn relation_ignoring_z() {
        // y equals x
        let r = NativeRelation::new("eq_x", 3, |v| Ok(v[0] == v[1]));
        let p = flatten_np_relation("EQ", Arc::new(r), PolyBound::linear(), PolyBound::constant(1)).unwrap();
        let x: BitString = "101".into();
        assert!(verify_solution(&p, &x, &encode_tuple(&[&x, &BitString::new()])).unwrap());
        assert!(!verify_solution(&p, &x, &"1".into()).unwrap());
        assert_eq!(all_witnesses(&p, &x).unwrap().len(), 3);
        for w in all_witnesses(&p, &x).unwrap() {
            assert!(w.len() <= p.witness_bound(&x));
        }
    }
}
