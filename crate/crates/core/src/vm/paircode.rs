//! Self-delimiting tuple encoding. Each part is written as its length in
//! binary with every bit doubled (`0 → 00`, `1 → 11`), the separator `01`,
//! then the part's bits. The empty tuple encodes as the empty string.
//!
//! Decoding is strict: the length field must be canonical binary (`0` for
//! zero, otherwise no leading zero) and the parts must use up the whole input.

use crate::bits::BitString;

fn push_length(out: &mut BitString, len: usize) {
    let digits = if len == 0 { BitString::zeros(1) } else { BitString::from_num(len as u64) };
    for &b in digits.bits() {
        out.push(b);
        out.push(b);
    }
    out.push(false);
    out.push(true);
}

pub fn encode_tuple(parts: &[&BitString]) -> BitString {
    let mut out = BitString::new();
    for p in parts {
        push_length(&mut out, p.len());
        out.extend_from(p);
    }
    out
}

/// Convenience for owned parts.
pub fn encode_owned(parts: &[BitString]) -> BitString {
    encode_tuple(&parts.iter().collect::<Vec<_>>())
}

/// Reads one part starting at `pos`; returns the part and the next position.
fn read_part(u: &BitString, mut pos: usize) -> Option<(BitString, usize)> {
    let bits = u.bits();
    let mut digits = Vec::new();
    loop {
        let (a, b) = (*bits.get(pos)?, *bits.get(pos + 1)?);
        pos += 2;
        match (a, b) {
            (false, true) => break,
            (x, y) if x == y => digits.push(x),
            _ => return None,
        }
    }
    let canonical = digits == [false] || digits.first() == Some(&true);
    if !canonical || digits.len() > 40 {
        return None;
    }
    let len = digits.iter().fold(0usize, |acc, &d| acc * 2 + usize::from(d));
    let end = pos.checked_add(len)?;
    if end > bits.len() {
        return None;
    }
    Some((u.slice(pos, end), end))
}

/// The parts of `u`, or `None` (MALFORMED) when `u` is not the encoding of
/// an `arity`-tuple.
pub fn decode_tuple(u: &BitString, arity: usize) -> Option<Vec<BitString>> {
    let mut pos = 0;
    let mut parts = Vec::with_capacity(arity);
    for _ in 0..arity {
        let (p, next) = read_part(u, pos)?;
        parts.push(p);
        pos = next;
    }
    (pos == u.len()).then_some(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn bs(s: &str) -> BitString {
        BitString::from(s)
    }

    #[test]
    fn layout() {
        assert_eq!(encode_tuple(&[]), BitString::new());
        assert_eq!(decode_tuple(&BitString::new(), 0), Some(vec![]));
        // |01| = 2 = 10b -> 1100 01 01
        assert_eq!(encode_tuple(&[&bs("01")]), bs("11000101"));
        assert_eq!(encode_tuple(&[&BitString::new()]), bs("0001"));
    }

    #[test]
    fn round_trip_examples() {
        let parts = [bs("01"), bs("1"), BitString::new()];
        let u = encode_owned(&parts);
        assert_eq!(decode_tuple(&u, 3).unwrap(), parts.to_vec());
        assert_eq!(decode_tuple(&u, 2), None);
        assert_eq!(decode_tuple(&u, 4), None);
    }

    #[test]
    fn exhaustive_sixteen_bit_consistency() {
        for arity in [1usize, 2] {
            for v in 0u32..1 << 16 {
                let u = BitString::from_num_width(u64::from(v), 16);
                if let Some(parts) = decode_tuple(&u, arity) {
                    assert_eq!(encode_owned(&parts), u);
                }
            }
        }
    }

    #[test]
    fn injective_on_corpus() {
        let mut seen = HashSet::new();
        let strings: Vec<BitString> = BitString::all_up_to(5).collect();
        let mut count = 0;
        'outer: for a in &strings {
            for b in &strings {
                for c in strings.iter().take(10) {
                    if count == 10_000 {
                        break 'outer;
                    }
                    count += 1;
                    let u = encode_tuple(&[a, b, c]);
                    assert!(seen.insert(u.clone()), "collision at {u}");
                    let total = a.len() + b.len() + c.len();
                    assert!(u.len() <= 2 * total + 3 * (2 * 3 + 2));
                }
            }
        }
        assert_eq!(count, 10_000);
    }
}
