//! Fixed-length witnesses: `y` is stored as `y·1·0^k` in exactly `w` bits.

use std::sync::Arc;

use crate::bits::BitString;
use crate::vm::PolyBound;

use super::problem::{all_witnesses, NativeRelation, TfnpProblem};

/// `y·1·0^k` of length exactly `width`; `None` when `|y| >= width`.
pub fn pad(y: &BitString, width: usize) -> Option<BitString> {
    if y.len() >= width {
        return None;
    }
    let mut out = y.clone();
    out.push(true);
    out.extend_from(&BitString::zeros(width - y.len() - 1));
    Some(out)
}

/// Inverse of [`pad`]: drops trailing zeros and the marker bit.
pub fn unpad(padded: &BitString) -> Option<BitString> {
    let marker = padded.bits().iter().rposition(|&b| b)?;
    Some(padded.slice(0, marker))
}

/// Witness bound of the padded problem: `p(n) + 1`.
pub fn padded_bound(p: PolyBound) -> PolyBound {
    PolyBound::new(p.c, p.k, p.d + 1)
}

/// `P̂`: witnesses are `pad(y, p(|x|) + 1)` for the witnesses `y` of `P`.
pub fn normalize_padding(p: &TfnpProblem) -> TfnpProblem {
    let inner = p.clone();
    let relation = NativeRelation::new(format!("{}^", p.relation.name()), 2, move |v| {
        let (x, w) = (v[0], v[1]);
        let width = inner.witness_bound(x) + 1;
        if w.len() != width {
            return Ok(false);
        }
        match unpad(w) {
            Some(y) => super::verify_solution(&inner, x, &y),
            None => Ok(false),
        }
    });
    let inner = p.clone();
    let candidates = Arc::new(move |x: &BitString| {
        let width = inner.witness_bound(x) + 1;
        Ok(Some(all_witnesses(&inner, x)?.iter().filter_map(|y| pad(y, width)).collect()))
    });
    TfnpProblem::new(format!("{}^", p.name), padded_bound(p.bound), Arc::new(relation)).with_candidates(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pad_codec() {
        let three = BitString::from_num(3);
        let p = pad(&three, 5).unwrap();
        assert_eq!(p, BitString::from("11100"));
        assert_eq!(unpad(&p).unwrap(), three);
        // a full-length witness only gains the marker bit
        assert_eq!(pad(&"101".into(), 4).unwrap(), BitString::from("1011"));
        assert_eq!(pad(&BitString::new(), 1).unwrap(), BitString::from("1"));
        assert!(pad(&"101".into(), 3).is_none());
        assert!(unpad(&"000".into()).is_none());
        for y in BitString::all_up_to(6) {
            assert_eq!(unpad(&pad(&y, 9).unwrap()).unwrap(), y);
        }
    }
}
