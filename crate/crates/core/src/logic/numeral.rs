//! Binary numerals over the arithmetic signature `0, S, +, ·` and the
//! padding of ground sentences with always-false conjuncts.

use super::syntax::{Matrix, Term};
use super::LogicError;

pub const ZERO: &str = "0";
pub const SUCC: &str = "S";
pub const PLUS: &str = "+";
pub const TIMES: &str = "*";

/// Per-bit size constant: `size(binary_numeral(n)) <= NUMERAL_SIZE_FACTOR * bits(n)`.
pub const NUMERAL_SIZE_FACTOR: usize = 6;

fn zero() -> Term {
    Term::constant(ZERO)
}

fn succ(t: Term) -> Term {
    Term::app(SUCC, vec![t])
}

fn two() -> Term {
    succ(succ(zero()))
}

/// Horner-form closed term for `n`, leading bit first.
///
/// A zero digit contributes `(t·2̄)+0`; a one digit is written `S(t·2̄)`,
/// the successor form of `(t·2̄)+1`. Each bit after the leading one costs at
/// most 6 symbols, so the term size is at most `6·bits(n)`.
pub fn binary_numeral(n: u64) -> Term {
    if n == 0 {
        return zero();
    }
    let bits = 64 - n.leading_zeros();
    let mut t = succ(zero());
    for i in (0..bits - 1).rev() {
        let doubled = Term::app(TIMES, vec![t, two()]);
        t = if (n >> i) & 1 == 1 {
            succ(doubled)
        } else {
            Term::app(PLUS, vec![doubled, zero()])
        };
    }
    t
}

/// Standard-model value of a closed arithmetic term; `None` on overflow or unknown symbols.
pub fn eval_arith(t: &Term) -> Option<u64> {
    match t {
        Term::Var { .. } => None,
        Term::App { head, args } => match (head.as_str(), args.as_slice()) {
            (ZERO, []) => Some(0),
            (SUCC, [a]) => eval_arith(a)?.checked_add(1),
            (PLUS, [a, b]) => eval_arith(a)?.checked_add(eval_arith(b)?),
            (TIMES, [a, b]) => eval_arith(a)?.checked_mul(eval_arith(b)?),
            _ => None,
        },
    }
}

/// `φ ∨ (⊥ ∧ … ∧ ⊥)` with exactly `m` always-false conjuncts.
pub fn pad_sentence(phi: &Matrix, m: usize) -> Result<Matrix, LogicError> {
    if m == 0 {
        return Err(LogicError::ZeroPadding);
    }
    if !phi.is_ground() {
        return Err(LogicError::NonGround(phi.to_string()));
    }
    let filler = Matrix::conjunction(std::iter::repeat(Matrix::Bottom).take(m)).expect("m >= 1");
    Ok(Matrix::or(phi.clone(), filler))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::syntax::Atom;

    #[test]
    fn small_numerals() {
        assert_eq!(binary_numeral(0), zero());
        assert_eq!(binary_numeral(1).to_string(), "S(0)");
        // 5 = 101: ((1·2̄)+0)·2̄+1
        assert_eq!(binary_numeral(5).to_string(), "S(*(+(*(S(0),S(S(0))),0),S(S(0))))");
        assert_eq!(eval_arith(&binary_numeral(5)), Some(5));
    }

    #[test]
    fn numerals_evaluate_correctly() {
        for n in 0..4096 {
            assert_eq!(eval_arith(&binary_numeral(n)), Some(n));
        }
    }

    #[test]
    fn numeral_size_is_logarithmic() {
        for n in 1..=(1u64 << 16) {
            let bits = (64 - n.leading_zeros()) as usize;
            assert!(binary_numeral(n).size() <= NUMERAL_SIZE_FACTOR * bits, "n = {n}");
        }
    }

    fn p(i: usize) -> Matrix {
        Matrix::Atom(Atom { head: format!("P{i}"), args: vec![] })
    }

    #[test]
    fn padding_shape() {
        let phi = p(0);
        assert_eq!(pad_sentence(&phi, 1).unwrap().to_string(), "P0 | FALSE");
        let three = pad_sentence(&phi, 3).unwrap();
        assert_eq!(three.to_string(), "P0 | FALSE & FALSE & FALSE");
        assert_eq!(three.size(), phi.size() + 1 + 5);
        assert!(matches!(pad_sentence(&phi, 0), Err(LogicError::ZeroPadding)));
    }

    #[test]
    fn padding_preserves_truth_tables() {
        let formulas = [
            Matrix::and(p(0), p(1)),
            Matrix::implies(p(0), Matrix::or(p(1), Matrix::not(p(2)))),
            Matrix::or(Matrix::and(p(0), p(3)), Matrix::not(Matrix::and(p(1), p(2)))),
            Matrix::Bottom,
        ];
        for phi in &formulas {
            for m in 1..=8 {
                let padded = pad_sentence(phi, m).unwrap();
                for bits in 0u32..16 {
                    let mut val = |a: &Atom| bits >> a.head[1..].parse::<u32>().unwrap() & 1 == 1;
                    let lhs = phi.eval(&mut val);
                    assert_eq!(padded.eval(&mut val), lhs);
                }
            }
        }
    }
}
