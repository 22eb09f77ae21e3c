//! Boolean circuits, optionally with oracle gates, stored as a topologically
//! ordered gate list: every operand index is smaller than the gate's own index.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::PropError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    /// Queries the oracle on the listed wires; its answer bits are read by `Answer` gates.
    Oracle { query: Vec<usize>, answer_width: usize },
    Answer { oracle: usize, bit: usize },
}

impl Gate {
    pub fn operands(&self) -> Vec<usize> {
        match self {
            Gate::Input(_) | Gate::Const(_) => vec![],
            Gate::Not(a) => vec![*a],
            Gate::And(a, b) | Gate::Or(a, b) => vec![*a, *b],
            Gate::Oracle { query, .. } => query.clone(),
            Gate::Answer { oracle, .. } => vec![*oracle],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BoolCircuit {
    pub input_width: usize,
    pub gates: Vec<Gate>,
    pub outputs: Vec<usize>,
}

/// A circuit that may contain oracle gates.
pub type OracleCircuit = BoolCircuit;

/// Per-gate record of one oracle-circuit evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    /// Answer of each oracle gate, in gate order.
    pub answers: Vec<Vec<bool>>,
    /// Boolean value of every non-oracle gate; oracle gates record `false`.
    pub gate_values: Vec<bool>,
}

impl BoolCircuit {
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn output_width(&self) -> usize {
        self.outputs.len()
    }

    pub fn oracle_gates(&self) -> Vec<usize> {
        (0..self.gates.len()).filter(|&g| matches!(self.gates[g], Gate::Oracle { .. })).collect()
    }

    pub fn has_oracle(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Oracle { .. }))
    }

    /// The same function with every gate outside the outputs' cone removed.
    pub fn prune(&self) -> BoolCircuit {
        let mut live = vec![false; self.gates.len()];
        for &o in &self.outputs {
            live[o] = true;
        }
        for g in (0..self.gates.len()).rev() {
            if live[g] {
                for op in self.gates[g].operands() {
                    live[op] = true;
                }
            }
        }
        let mut map = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (g, gate) in self.gates.iter().enumerate() {
            if !live[g] {
                continue;
            }
            let m = |i: usize| map[i];
            gates.push(match gate {
                Gate::Not(a) => Gate::Not(m(*a)),
                Gate::And(a, b) => Gate::And(m(*a), m(*b)),
                Gate::Or(a, b) => Gate::Or(m(*a), m(*b)),
                Gate::Oracle { query, answer_width } => {
                    Gate::Oracle { query: query.iter().map(|&q| m(q)).collect(), answer_width: *answer_width }
                }
                Gate::Answer { oracle, bit } => Gate::Answer { oracle: m(*oracle), bit: *bit },
                leaf => leaf.clone(),
            });
            map[g] = gates.len() - 1;
        }
        BoolCircuit { input_width: self.input_width, gates, outputs: self.outputs.iter().map(|&o| map[o]).collect() }
    }

    /// Checks topological order, operand kinds and index ranges.
    pub fn validate(&self) -> Result<(), PropError> {
        let bad = |g: usize, msg: &str| Err(PropError::Circuit(format!("gate {g}: {msg}")));
        for (g, gate) in self.gates.iter().enumerate() {
            for op in gate.operands() {
                if op >= g {
                    return bad(g, "operand does not precede gate");
                }
                let is_oracle = matches!(self.gates[op], Gate::Oracle { .. });
                if is_oracle != matches!(gate, Gate::Answer { .. }) {
                    return bad(g, "oracle gates are read only through answer gates");
                }
            }
            match gate {
                Gate::Input(i) if *i >= self.input_width => return bad(g, "input index out of range"),
                Gate::Answer { oracle, bit } => {
                    if let Gate::Oracle { answer_width, .. } = &self.gates[*oracle] {
                        if bit >= answer_width {
                            return bad(g, "answer bit out of range");
                        }
                    }
                }
                _ => {}
            }
        }
        for &o in &self.outputs {
            if o >= self.gates.len() || matches!(self.gates[o], Gate::Oracle { .. }) {
                return Err(PropError::Circuit(format!("bad output gate {o}")));
            }
        }
        Ok(())
    }

    /// Evaluates 64 inputs at once; lane `j` of `inputs[i]` is bit `i` of input `j`.
    pub fn eval_lanes(&self, inputs: &[u64]) -> Result<Vec<u64>, PropError> {
        if inputs.len() != self.input_width {
            return Err(PropError::Width { expected: self.input_width, found: inputs.len() });
        }
        if self.has_oracle() {
            return Err(PropError::Circuit("oracle gate in plain evaluation".into()));
        }
        let mut v = vec![0u64; self.gates.len()];
        for (g, gate) in self.gates.iter().enumerate() {
            v[g] = match *gate {
                Gate::Input(i) => inputs[i],
                Gate::Const(b) => if b { u64::MAX } else { 0 },
                Gate::Not(a) => !v[a],
                Gate::And(a, b) => v[a] & v[b],
                Gate::Or(a, b) => v[a] | v[b],
                Gate::Oracle { .. } | Gate::Answer { .. } => unreachable!("checked above"),
            };
        }
        Ok(self.outputs.iter().map(|&o| v[o]).collect())
    }

    pub fn eval(&self, input: &[bool]) -> Result<Vec<bool>, PropError> {
        let lanes: Vec<u64> = input.iter().map(|&b| u64::from(b)).collect();
        Ok(self.eval_lanes(&lanes)?.into_iter().map(|w| w & 1 == 1).collect())
    }

    /// Evaluates many inputs, 64 per pass.
    pub fn eval_batch(&self, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, PropError> {
        let mut out = Vec::with_capacity(inputs.len());
        for chunk in inputs.chunks(64) {
            let mut lanes = vec![0u64; self.input_width];
            for (j, x) in chunk.iter().enumerate() {
                if x.len() != self.input_width {
                    return Err(PropError::Width { expected: self.input_width, found: x.len() });
                }
                for (i, &b) in x.iter().enumerate() {
                    lanes[i] |= u64::from(b) << j;
                }
            }
            let res = self.eval_lanes(&lanes)?;
            for j in 0..chunk.len() {
                out.push(res.iter().map(|w| w >> j & 1 == 1).collect());
            }
        }
        Ok(out)
    }

    /// Evaluates with `oracle` answering each oracle gate in order.
    pub fn eval_with_oracle(
        &self,
        input: &[bool],
        oracle: &mut dyn FnMut(&[bool]) -> Result<Vec<bool>, PropError>,
    ) -> Result<(Vec<bool>, Transcript), PropError> {
        if input.len() != self.input_width {
            return Err(PropError::Width { expected: self.input_width, found: input.len() });
        }
        let mut v = vec![false; self.gates.len()];
        let mut answers: Vec<Option<Vec<bool>>> = vec![None; self.gates.len()];
        let mut record = Vec::new();
        for (g, gate) in self.gates.iter().enumerate() {
            v[g] = match gate {
                Gate::Input(i) => input[*i],
                Gate::Const(b) => *b,
                Gate::Not(a) => !v[*a],
                Gate::And(a, b) => v[*a] && v[*b],
                Gate::Or(a, b) => v[*a] || v[*b],
                Gate::Oracle { query, answer_width } => {
                    let q: Vec<bool> = query.iter().map(|&w| v[w]).collect();
                    let ans = oracle(&q)?;
                    if ans.len() != *answer_width {
                        return Err(PropError::Width { expected: *answer_width, found: ans.len() });
                    }
                    record.push(ans.clone());
                    answers[g] = Some(ans);
                    false
                }
                Gate::Answer { oracle, bit } => answers[*oracle]
                    .as_ref()
                    .and_then(|a| a.get(*bit).copied())
                    .ok_or_else(|| PropError::Circuit(format!("gate {g}: bad answer reference")))?,
            };
        }
        let out = self.outputs.iter().map(|&o| v[o]).collect();
        Ok((out, Transcript { answers: record, gate_values: v }))
    }

    /// Input indices that output `k` depends on.
    pub fn input_support(&self, k: usize) -> BTreeSet<usize> {
        let mut seen = vec![false; self.gates.len()];
        let mut stack = vec![self.outputs[k]];
        let mut out = BTreeSet::new();
        while let Some(g) = stack.pop() {
            if std::mem::replace(&mut seen[g], true) {
                continue;
            }
            if let Gate::Input(i) = self.gates[g] {
                out.insert(i);
            }
            stack.extend(self.gates[g].operands());
        }
        out
    }

    /// Text form: `INPUTS n`, one gate per line, then `OUTPUT g…`.
    pub fn to_text(&self) -> String {
        let mut s = format!("INPUTS {}\n", self.input_width);
        for gate in &self.gates {
            match gate {
                Gate::Input(i) => writeln!(s, "INPUT {i}"),
                Gate::Const(b) => writeln!(s, "CONST {}", u8::from(*b)),
                Gate::Not(a) => writeln!(s, "NOT {a}"),
                Gate::And(a, b) => writeln!(s, "AND {a} {b}"),
                Gate::Or(a, b) => writeln!(s, "OR {a} {b}"),
                Gate::Oracle { query, answer_width } => {
                    let _ = write!(s, "ORACLE {answer_width}");
                    for q in query {
                        let _ = write!(s, " {q}");
                    }
                    writeln!(s)
                }
                Gate::Answer { oracle, bit } => writeln!(s, "ANSWER {oracle} {bit}"),
            }
            .expect("writing to a String");
        }
        s.push_str("OUTPUT");
        for o in &self.outputs {
            let _ = write!(s, " {o}");
        }
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<BoolCircuit, PropError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .enumerate()
            .filter(|(_, l)| !l.is_empty());
        let err = |n: usize, m: &str| PropError::Circuit(format!("line {}: {m}", n + 1));
        let nums = |n: usize, toks: &[&str]| -> Result<Vec<usize>, PropError> {
            toks.iter().map(|t| t.parse::<usize>().map_err(|_| err(n, "bad number"))).collect()
        };
        let (n0, first) = lines.next().ok_or_else(|| err(0, "empty circuit"))?;
        let head: Vec<&str> = first.split_whitespace().collect();
        if head.len() != 2 || head[0] != "INPUTS" {
            return Err(err(n0, "expected INPUTS n"));
        }
        let input_width = nums(n0, &head[1..])?[0];
        let mut c = BoolCircuit { input_width, gates: Vec::new(), outputs: Vec::new() };
        let mut done = false;
        for (n, line) in lines {
            if done {
                return Err(err(n, "text after OUTPUT"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let args = nums(n, &toks[1..])?;
            let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(err(n, "wrong operand count")) };
            let gate = match toks[0] {
                "INPUT" => arity(1).map(|_| Gate::Input(args[0]))?,
                "CONST" if args == [0] || args == [1] => Gate::Const(args[0] == 1),
                "NOT" => arity(1).map(|_| Gate::Not(args[0]))?,
                "AND" => arity(2).map(|_| Gate::And(args[0], args[1]))?,
                "OR" => arity(2).map(|_| Gate::Or(args[0], args[1]))?,
                "ORACLE" if !args.is_empty() => Gate::Oracle { answer_width: args[0], query: args[1..].to_vec() },
                "ANSWER" => arity(2).map(|_| Gate::Answer { oracle: args[0], bit: args[1] })?,
                "OUTPUT" => {
                    c.outputs = args;
                    done = true;
                    continue;
                }
                _ => return Err(err(n, "unknown gate")),
            };
            c.gates.push(gate);
        }
        if !done {
            return Err(PropError::Circuit("missing OUTPUT line".into()));
        }
        c.validate()?;
        Ok(c)
    }
}

/// The circuit `outer ∘ inner`: inner's outputs feed outer's inputs.
pub fn compose_circuits(outer: &BoolCircuit, inner: &BoolCircuit) -> Result<BoolCircuit, PropError> {
    if outer.input_width != inner.output_width() {
        return Err(PropError::Width { expected: outer.input_width, found: inner.output_width() });
    }
    let mut c = inner.clone();
    // map[g] is the id in `c` of outer gate g
    let mut map: Vec<usize> = Vec::with_capacity(outer.gates.len());
    for gate in &outer.gates {
        let m = |g: usize| map[g];
        let new = match gate {
            Gate::Input(i) => {
                map.push(inner.outputs[*i]);
                continue;
            }
            Gate::Const(b) => Gate::Const(*b),
            Gate::Not(a) => Gate::Not(m(*a)),
            Gate::And(a, b) => Gate::And(m(*a), m(*b)),
            Gate::Or(a, b) => Gate::Or(m(*a), m(*b)),
            Gate::Oracle { query, answer_width } => {
                Gate::Oracle { query: query.iter().map(|&q| m(q)).collect(), answer_width: *answer_width }
            }
            Gate::Answer { oracle, bit } => Gate::Answer { oracle: m(*oracle), bit: *bit },
        };
        c.gates.push(new);
        map.push(c.gates.len() - 1);
    }
    c.outputs = outer.outputs.iter().map(|&o| map[o]).collect();
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_circuit() -> BoolCircuit {
        // (a | b) & ~(a & b)
        BoolCircuit {
            input_width: 2,
            gates: vec![
                Gate::Input(0),
                Gate::Input(1),
                Gate::Or(0, 1),
                Gate::And(0, 1),
                Gate::Not(3),
                Gate::And(2, 4),
            ],
            outputs: vec![5],
        }
    }

    #[test]
    fn xor_truth_table_and_batch() {
        let c = xor_circuit();
        c.validate().unwrap();
        let inputs: Vec<Vec<bool>> = (0..4).map(|b| vec![b & 1 == 1, b & 2 == 2]).collect();
        let batch = c.eval_batch(&inputs).unwrap();
        for (x, y) in inputs.iter().zip(&batch) {
            assert_eq!(y[0], x[0] ^ x[1]);
            assert_eq!(c.eval(x).unwrap(), *y);
        }
    }

    #[test]
    fn prune_keeps_function() {
        let mut c = xor_circuit();
        c.gates.push(Gate::Input(1));
        c.gates.push(Gate::Not(c.gates.len() - 1));
        let p = c.prune();
        assert_eq!(p.size(), 6);
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(p.eval(&[a, b]).unwrap(), c.eval(&[a, b]).unwrap());
            }
        }
        let only_b = BoolCircuit { input_width: 2, gates: vec![Gate::Input(0), Gate::Input(1)], outputs: vec![1] };
        assert_eq!(only_b.prune().gates, vec![Gate::Input(1)]);
    }

    #[test]
    fn text_round_trip() {
        let c = xor_circuit();
        assert_eq!(BoolCircuit::from_text(&c.to_text()).unwrap(), c);
        assert!(BoolCircuit::from_text("INPUTS 1\nNOT 0\nOUTPUT 0\n").is_err());
        assert!(BoolCircuit::from_text("INPUTS 1\nINPUT 0\n").is_err());
    }

    #[test]
    fn oracle_transcript() {
        let c = BoolCircuit {
            input_width: 1,
            gates: vec![
                Gate::Input(0),
                Gate::Oracle { query: vec![0], answer_width: 2 },
                Gate::Answer { oracle: 1, bit: 1 },
                Gate::Not(2),
            ],
            outputs: vec![3],
        };
        c.validate().unwrap();
        let (out, t) = c.eval_with_oracle(&[true], &mut |q| Ok(vec![q[0], !q[0]])).unwrap();
        assert_eq!(out, vec![true]);
        assert_eq!(t.answers, vec![vec![true, false]]);
        assert!(BoolCircuit::from_text(&c.to_text()).unwrap() == c);
    }

    #[test]
    fn composition_with_negation() {
        let neg = BoolCircuit { input_width: 1, gates: vec![Gate::Input(0), Gate::Not(0)], outputs: vec![1] };
        let c = compose_circuits(&neg, &xor_circuit()).unwrap();
        for b in 0..4 {
            let x = [b & 1 == 1, b & 2 == 2];
            assert_eq!(c.eval(&x).unwrap(), vec![!(x[0] ^ x[1])]);
        }
        assert_eq!(c.input_support(0), BTreeSet::from([0, 1]));
    }
}
