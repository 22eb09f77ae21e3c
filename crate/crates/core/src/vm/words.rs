//! Word-level gadgets over [`CircuitBuilder`] wires. Words are 32 wires,
//! least significant bit first.

use crate::prop::{CircuitBuilder, Wire};

use super::program::{BinOp, WORD_BITS};

pub type Word = Vec<Wire>;

pub fn const_word(b: &mut CircuitBuilder, v: u32) -> Word {
    (0..WORD_BITS).map(|i| b.constant(v >> i & 1 == 1)).collect()
}

/// The word's value if every bit is constant.
pub fn word_value(b: &CircuitBuilder, w: &[Wire]) -> Option<u32> {
    w.iter().enumerate().try_fold(0u32, |acc, (i, &x)| Some(acc | u32::from(b.const_value(x)?) << i))
}

/// Ripple-carry sum of two equal-width vectors; returns the sum and the carry out.
fn add_carry(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire], carry_in: Wire) -> (Vec<Wire>, Wire) {
    let mut carry = carry_in;
    let mut out = Vec::with_capacity(x.len());
    for (&p, &q) in x.iter().zip(y) {
        let t = b.xor(p, q);
        out.push(b.xor(t, carry));
        let g = b.and(p, q);
        let h = b.and(t, carry);
        carry = b.or(g, h);
    }
    (out, carry)
}

pub fn add(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> Word {
    let f = b.constant(false);
    add_carry(b, x, y, f).0
}

/// `x - y` over `x.len()` bits and whether no borrow occurred (`x >= y`).
fn sub_ge(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> (Vec<Wire>, Wire) {
    let ny: Vec<Wire> = y.iter().map(|&w| b.not(w)).collect();
    let t = b.constant(true);
    add_carry(b, x, &ny, t)
}

pub fn eq(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> Wire {
    let bits: Vec<Wire> = x.iter().zip(y).map(|(&p, &q)| b.xnor(p, q)).collect();
    b.and_all(&bits)
}

pub fn eq_const(b: &mut CircuitBuilder, x: &[Wire], v: usize) -> Wire {
    if x.len() < usize::BITS as usize && v >> x.len() != 0 {
        return b.constant(false);
    }
    let bits: Vec<Wire> = x
        .iter()
        .enumerate()
        .map(|(i, &w)| if v >> i & 1 == 1 { w } else { b.not(w) })
        .collect();
    b.and_all(&bits)
}

pub fn is_zero(b: &mut CircuitBuilder, x: &[Wire]) -> Wire {
    let any = b.or_all(x);
    b.not(any)
}

fn bool_word(b: &mut CircuitBuilder, bit: Wire) -> Word {
    let mut w = const_word(b, 0);
    w[0] = bit;
    w
}

fn mul(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> Word {
    let mut acc = const_word(b, 0);
    for j in 0..WORD_BITS {
        if b.const_value(y[j]) == Some(false) {
            continue;
        }
        let mut partial = const_word(b, 0);
        for i in 0..WORD_BITS - j {
            partial[i + j] = b.and(x[i], y[j]);
        }
        acc = add(b, &acc, &partial);
    }
    acc
}

/// Restoring division over the low `w` bits of the dividend, where every
/// dividend bit at or above `w` is constant zero.
fn divmod(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire]) -> (Word, Word) {
    let w = (0..WORD_BITS).rev().find(|&i| b.const_value(x[i]) != Some(false)).map_or(0, |i| i + 1);
    let zero = b.constant(false);
    // a divisor bit at or above w makes y > x, so q = 0 and r = x
    let high = b.or_all(&y[w..]);
    let y_zero = is_zero(b, y);
    let divisor: Vec<Wire> = y[..w].iter().copied().chain(std::iter::once(zero)).collect();
    let mut rem: Vec<Wire> = vec![zero; w + 1];
    let mut q = const_word(b, 0);
    for i in (0..w).rev() {
        rem.pop();
        rem.insert(0, x[i]);
        let (diff, ge) = sub_ge(b, &rem, &divisor);
        rem = rem.iter().zip(&diff).map(|(&r, &d)| b.mux(ge, d, r)).collect();
        q[i] = ge;
    }
    let keep_q = {
        let t = b.or(high, y_zero);
        b.not(t)
    };
    for qi in q.iter_mut().take(w) {
        *qi = b.and(*qi, keep_q);
    }
    let mut r = const_word(b, 0);
    for i in 0..w {
        r[i] = b.mux(high, x[i], rem[i]);
    }
    (q, r)
}

fn shift(b: &mut CircuitBuilder, x: &[Wire], y: &[Wire], left: bool) -> Word {
    let zero = b.constant(false);
    let mut cur: Word = x.to_vec();
    for s in 0..5 {
        let amount = 1usize << s;
        let shifted: Word = (0..WORD_BITS)
            .map(|i| {
                let src = if left { i.checked_sub(amount) } else { Some(i + amount).filter(|&j| j < WORD_BITS) };
                src.map_or(zero, |j| cur[j])
            })
            .collect();
        cur = cur.iter().zip(&shifted).map(|(&c, &t)| b.mux(y[s], t, c)).collect();
    }
    let overflow = b.or_all(&y[5..]);
    let keep = b.not(overflow);
    cur.iter().map(|&c| b.and(c, keep)).collect()
}

pub fn binop(b: &mut CircuitBuilder, op: BinOp, x: &[Wire], y: &[Wire]) -> Word {
    if let (Some(p), Some(q)) = (word_value(b, x), word_value(b, y)) {
        return const_word(b, op.apply(p, q));
    }
    match op {
        BinOp::Add => add(b, x, y),
        BinOp::Sub => sub_ge(b, x, y).0,
        BinOp::Mul => mul(b, x, y),
        BinOp::Div => divmod(b, x, y).0,
        BinOp::Mod => divmod(b, x, y).1,
        BinOp::And => x.iter().zip(y).map(|(&p, &q)| b.and(p, q)).collect(),
        BinOp::Or => x.iter().zip(y).map(|(&p, &q)| b.or(p, q)).collect(),
        BinOp::Xor => x.iter().zip(y).map(|(&p, &q)| b.xor(p, q)).collect(),
        BinOp::Eq => {
            let e = eq(b, x, y);
            bool_word(b, e)
        }
        BinOp::Lt => {
            let (_, ge) = sub_ge(b, x, y);
            let lt = b.not(ge);
            bool_word(b, lt)
        }
        BinOp::Shl => shift(b, x, y, true),
        BinOp::Shr => shift(b, x, y, false),
    }
}

/// `bits[idx]`, or 0 when `idx` is out of range.
pub fn select(b: &mut CircuitBuilder, bits: &[Wire], idx: &[Wire]) -> Wire {
    if let Some(i) = word_value(b, idx) {
        return bits.get(i as usize).copied().unwrap_or_else(|| b.constant(false));
    }
    let terms: Vec<Wire> = bits
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            let hit = eq_const(b, idx, j);
            b.and(hit, w)
        })
        .collect();
    b.or_all(&terms)
}

pub fn mux_word(b: &mut CircuitBuilder, s: Wire, x: &[Wire], y: &[Wire]) -> Word {
    x.iter().zip(y).map(|(&p, &q)| b.mux(s, p, q)).collect()
}

pub fn increment(b: &mut CircuitBuilder, x: &[Wire]) -> Word {
    let one = const_word(b, 1);
    add(b, x, &one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn input_word(b: &mut CircuitBuilder, base: usize, width: usize) -> Word {
        (0..WORD_BITS).map(|i| if i < width { b.input(base + i) } else { b.constant(false) }).collect()
    }

    fn eval_op(op: BinOp, width: usize, x: u32, y: u32) -> u32 {
        let mut b = CircuitBuilder::new(2 * width, 1 << 22);
        let xw = input_word(&mut b, 0, width);
        let yw = input_word(&mut b, width, width);
        let out = binop(&mut b, op, &xw, &yw);
        let c = b.finish(out).unwrap();
        let input: Vec<bool> = (0..width).map(|i| x >> i & 1 == 1).chain((0..width).map(|i| y >> i & 1 == 1)).collect();
        c.eval(&input).unwrap().iter().enumerate().fold(0, |acc, (i, &v)| acc | u32::from(v) << i)
    }

    #[test]
    fn exhaustive_four_bit_operations() {
        for op in BinOp::ALL {
            for x in 0..16 {
                for y in 0..16 {
                    assert_eq!(eval_op(op, 4, x, y), op.apply(x, y), "{op:?} {x} {y}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn full_width_operations(x in any::<u32>(), y in any::<u32>(), k in 0usize..12) {
            let op = BinOp::ALL[k];
            prop_assert_eq!(eval_op(op, 32, x, y), op.apply(x, y));
        }

        #[test]
        fn small_shift_amounts(x in any::<u32>(), y in 0u32..40) {
            prop_assert_eq!(eval_op(BinOp::Shl, 32, x, y), BinOp::Shl.apply(x, y));
            prop_assert_eq!(eval_op(BinOp::Shr, 32, x, y), BinOp::Shr.apply(x, y));
        }
    }
}
