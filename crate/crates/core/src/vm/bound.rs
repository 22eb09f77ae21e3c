use std::fmt;

use serde::{Deserialize, Serialize};

/// `p(n) = c·n^k + d`, evaluated with saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyBound {
    pub c: u64,
    pub k: u32,
    pub d: u64,
}

impl PolyBound {
    pub const fn new(c: u64, k: u32, d: u64) -> Self {
        PolyBound { c, k, d }
    }

    /// `p(n) = n`.
    pub const fn linear() -> Self {
        PolyBound::new(1, 1, 0)
    }

    pub const fn constant(d: u64) -> Self {
        PolyBound::new(0, 0, d)
    }

    pub fn eval(&self, n: usize) -> usize {
        let pow = (n as u64).checked_pow(self.k).unwrap_or(u64::MAX);
        let v = self.c.saturating_mul(pow).saturating_add(self.d);
        usize::try_from(v).unwrap_or(usize::MAX)
    }

    /// A bound dominating `self(n) + other(n)` for every `n`.
    pub fn plus(&self, other: &PolyBound) -> PolyBound {
        let c = self.c + other.c;
        PolyBound::new(c, self.k.max(other.k), self.d + other.d + c)
    }

    /// A bound dominating `self(n) · other(n)` for every `n`.
    pub fn times(&self, other: &PolyBound) -> PolyBound {
        let c = (self.c + self.d).saturating_mul(other.c + other.d);
        PolyBound::new(c, self.k + other.k, c)
    }
}

impl fmt::Display for PolyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*n^{}+{}", self.c, self.k, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_and_saturation() {
        assert_eq!(PolyBound::new(3, 2, 1).eval(4), 49);
        assert_eq!(PolyBound::new(0, 5, 7).eval(100), 7);
        assert_eq!(PolyBound::new(1, 0, 0).eval(0), 1);
        assert_eq!(PolyBound::new(2, 60, 0).eval(1 << 20), usize::MAX);
        let s = PolyBound::new(1, 1, 2).plus(&PolyBound::new(2, 2, 3));
        for n in 0..50usize {
            assert!(s.eval(n) >= PolyBound::new(1, 1, 2).eval(n) + PolyBound::new(2, 2, 3).eval(n));
            let t = PolyBound::new(1, 1, 2).times(&PolyBound::new(2, 0, 3));
            assert!(t.eval(n) >= PolyBound::new(1, 1, 2).eval(n) * PolyBound::new(2, 0, 3).eval(n));
        }
    }
}
