//! Circuit construction with constant folding and structural hashing.

use std::collections::HashMap;

use super::circuit::{BoolCircuit, Gate};
use super::PropError;

/// Wire handle inside a [`CircuitBuilder`].
pub type Wire = usize;

pub struct CircuitBuilder {
    input_width: usize,
    gates: Vec<Gate>,
    hash: HashMap<Gate, Wire>,
    cap: usize,
}

impl CircuitBuilder {
    /// `cap` bounds the number of gates; exceeding it makes [`finish`](Self::finish) fail.
    pub fn new(input_width: usize, cap: usize) -> Self {
        CircuitBuilder { input_width, gates: Vec::new(), hash: HashMap::new(), cap }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn over_cap(&self) -> bool {
        self.gates.len() > self.cap
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    fn intern(&mut self, g: Gate) -> Wire {
        if let Some(&w) = self.hash.get(&g) {
            return w;
        }
        let w = self.gates.len();
        self.gates.push(g.clone());
        self.hash.insert(g, w);
        w
    }

    pub fn constant(&mut self, b: bool) -> Wire {
        self.intern(Gate::Const(b))
    }

    pub fn input(&mut self, i: usize) -> Wire {
        assert!(i < self.input_width, "input index out of range");
        self.intern(Gate::Input(i))
    }

    /// The constant value of a wire, when known.
    pub fn const_value(&self, w: Wire) -> Option<bool> {
        match self.gates[w] {
            Gate::Const(b) => Some(b),
            _ => None,
        }
    }

    fn is_negation(&self, a: Wire, b: Wire) -> bool {
        matches!(self.gates[a], Gate::Not(x) if x == b) || matches!(self.gates[b], Gate::Not(x) if x == a)
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        match self.gates[a] {
            Gate::Const(b) => self.constant(!b),
            Gate::Not(x) => x,
            _ => self.intern(Gate::Not(a)),
        }
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.const_value(a), self.const_value(b)) {
            (Some(false), _) | (_, Some(false)) => return self.constant(false),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.is_negation(a, b) {
            return self.constant(false);
        }
        self.intern(Gate::And(a.min(b), a.max(b)))
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.const_value(a), self.const_value(b)) {
            (Some(true), _) | (_, Some(true)) => return self.constant(true),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.is_negation(a, b) {
            return self.constant(true);
        }
        self.intern(Gate::Or(a.min(b), a.max(b)))
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        match (self.const_value(a), self.const_value(b)) {
            (Some(x), Some(y)) => return self.constant(x ^ y),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            (Some(true), _) => return self.not(b),
            (_, Some(true)) => return self.not(a),
            _ => {}
        }
        if a == b {
            return self.constant(false);
        }
        let o = self.or(a, b);
        let n = self.and(a, b);
        let nn = self.not(n);
        self.and(o, nn)
    }

    pub fn xnor(&mut self, a: Wire, b: Wire) -> Wire {
        let x = self.xor(a, b);
        self.not(x)
    }

    /// `if s then a else b`.
    pub fn mux(&mut self, s: Wire, a: Wire, b: Wire) -> Wire {
        match self.const_value(s) {
            Some(true) => return a,
            Some(false) => return b,
            None => {}
        }
        if a == b {
            return a;
        }
        let ns = self.not(s);
        let l = self.and(s, a);
        let r = self.and(ns, b);
        self.or(l, r)
    }

    pub fn and_all(&mut self, ws: &[Wire]) -> Wire {
        let t = self.constant(true);
        ws.iter().fold(t, |acc, &w| self.and(acc, w))
    }

    pub fn or_all(&mut self, ws: &[Wire]) -> Wire {
        let f = self.constant(false);
        ws.iter().fold(f, |acc, &w| self.or(acc, w))
    }

    /// Oracle gate on `query`; returns its `answer_width` answer wires.
    pub fn oracle(&mut self, query: &[Wire], answer_width: usize) -> Vec<Wire> {
        let g = self.gates.len();
        self.gates.push(Gate::Oracle { query: query.to_vec(), answer_width });
        (0..answer_width).map(|bit| self.intern(Gate::Answer { oracle: g, bit })).collect()
    }

    pub fn finish(self, outputs: Vec<Wire>) -> Result<BoolCircuit, PropError> {
        if self.gates.len() > self.cap {
            return Err(PropError::CircuitTooLarge { cap: self.cap });
        }
        let c = BoolCircuit { input_width: self.input_width, gates: self.gates, outputs };
        debug_assert!(c.validate().is_ok());
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_and_hashing() {
        let mut b = CircuitBuilder::new(2, 100);
        let x = b.input(0);
        let y = b.input(1);
        let t = b.constant(true);
        assert_eq!(b.and(x, t), x);
        let nx = b.not(x);
        assert_eq!(b.not(nx), x);
        let f = b.and(x, nx);
        assert_eq!(b.const_value(f), Some(false));
        let a1 = b.and(x, y);
        let a2 = b.and(y, x);
        assert_eq!(a1, a2);
        let m = b.mux(x, y, y);
        assert_eq!(m, y);
    }

    #[test]
    fn xor_and_mux_semantics() {
        let mut b = CircuitBuilder::new(3, 100);
        let (x, y, s) = (b.input(0), b.input(1), b.input(2));
        let xo = b.xor(x, y);
        let mx = b.mux(s, x, y);
        let c = b.finish(vec![xo, mx]).unwrap();
        for bits in 0..8u32 {
            let inp = [bits & 1 == 1, bits & 2 == 2, bits & 4 == 4];
            let out = c.eval(&inp).unwrap();
            assert_eq!(out[0], inp[0] ^ inp[1]);
            assert_eq!(out[1], if inp[2] { inp[0] } else { inp[1] });
        }
    }

    #[test]
    fn cap_is_enforced() {
        let mut b = CircuitBuilder::new(2, 2);
        let x = b.input(0);
        let y = b.input(1);
        let z = b.and(x, y);
        assert!(matches!(b.finish(vec![z]), Err(PropError::CircuitTooLarge { .. })));
    }
}
