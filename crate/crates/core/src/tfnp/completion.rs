//! The completion `P′` of a problem `P` and the conversion of Turing
//! reductions to `P` into many-one reductions to `P′`.
//!
//! An instance of `P′` is `(x, C)` with `C` an oracle circuit on `|x|`
//! inputs, carried as the bytes of its text form. A witness is a transcript
//! `(A, G)`: `A` concatenates the oracle answers in gate order, `G` holds the
//! value of every gate. Each answer must be `pad(s, w)` for a `P`-witness `s`
//! of its query, where `w = p(|query|) + 1` is the oracle gate's answer
//! width. Instances of any other form accept every witness.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bits::BitString;
use crate::prop::{BoolCircuit, Gate, PropError, Transcript};
use crate::vm::{
    compile_program, decode_tuple, encode_tuple, run_with_oracle, InputSpec, OutputMode, PolyBound, VerifierProgram,
};

use super::padding::{pad, unpad};
use super::problem::{all_witnesses, verify_solution, NativeRelation, TfnpProblem};
use super::reduction::{ManyOneReduction, NativeTransformer};
use super::TfnpError;

/// Largest number of transcripts listed per completion instance.
pub const COMPLETION_LIST_LIMIT: usize = 1 << 14;

pub fn completion_instance(x: &BitString, c: &BoolCircuit) -> BitString {
    encode_tuple(&[x, &BitString::from_bytes(c.to_text().as_bytes())])
}

/// `(x, C)` when `u` has the described form with `C` on `|x|` inputs.
pub fn decode_completion_instance(u: &BitString) -> Option<(BitString, BoolCircuit)> {
    let mut parts = decode_tuple(u, 2)?;
    let bytes = parts.pop()?.to_bytes()?;
    let x = parts.pop()?;
    let c = BoolCircuit::from_text(std::str::from_utf8(&bytes).ok()?).ok()?;
    (c.input_width == x.len()).then_some((x, c))
}

/// Every oracle gate's answer width is `p(|query|) + 1`, so every query has
/// a padded answer.
fn answer_widths_fit(p: &TfnpProblem, c: &BoolCircuit) -> bool {
    c.gates.iter().all(|g| match g {
        Gate::Oracle { query, answer_width } => *answer_width == p.bound.eval(query.len()) + 1,
        _ => true,
    })
}

pub fn encode_transcript(t: &Transcript) -> BitString {
    let answers = BitString::from_bits(t.answers.concat());
    encode_tuple(&[&answers, &BitString::from_bits(t.gate_values.clone())])
}

/// Replays `C` on `x` with the answers recorded in `v` and checks every
/// answer against `P` and every recorded gate value.
pub fn verify_transcript(p: &TfnpProblem, x: &BitString, c: &BoolCircuit, v: &BitString) -> Result<bool, TfnpError> {
    let Some(parts) = decode_tuple(v, 2) else { return Ok(false) };
    let (answers, gates) = (&parts[0], &parts[1]);
    if gates.len() != c.size() {
        return Ok(false);
    }
    let mut pos = 0;
    let mut failure: Option<TfnpError> = None;
    let replay = c.eval_with_oracle(x.bits(), &mut |q| {
        let reject = || PropError::Circuit("invalid oracle answer".into());
        let width = p.bound.eval(q.len()) + 1;
        if pos + width > answers.len() {
            return Err(reject());
        }
        let a = answers.slice(pos, pos + width);
        pos += width;
        let s = unpad(&a).ok_or_else(reject)?;
        match verify_solution(p, &BitString::from_bits(q.to_vec()), &s) {
            Ok(true) => Ok(a.into_bits()),
            Ok(false) => Err(reject()),
            Err(e) => {
                failure = Some(e);
                Err(reject())
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(match replay {
        Ok((_, t)) => pos == answers.len() && t.gate_values == gates.bits(),
        Err(_) => false,
    })
}

/// Every valid transcript of `C` on `x`, branching over all answers.
pub fn all_transcripts(p: &TfnpProblem, x: &BitString, c: &BoolCircuit, limit: usize) -> Result<Vec<BitString>, TfnpError> {
    let oracle_gates = c.oracle_gates();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Vec<bool>>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut pending: Option<Vec<bool>> = None;
        let result = {
            let mut i = 0;
            c.eval_with_oracle(x.bits(), &mut |q| {
                if i < prefix.len() {
                    i += 1;
                    Ok(prefix[i - 1].clone())
                } else {
                    pending = Some(q.to_vec());
                    Err(PropError::Circuit("pending query".into()))
                }
            })
        };
        match pending {
            Some(q) => {
                let Gate::Oracle { answer_width, .. } = c.gates[oracle_gates[prefix.len()]] else { unreachable!() };
                for s in all_witnesses(p, &BitString::from_bits(q))? {
                    if let Some(a) = pad(&s, answer_width) {
                        let mut next = prefix.clone();
                        next.push(a.into_bits());
                        stack.push(next);
                    }
                }
            }
            None => {
                out.push(encode_transcript(&result?.1));
                if out.len() > limit {
                    return Err(TfnpError::SearchSpaceTooLarge { problem: format!("{}′", p.name), bound: limit });
                }
            }
        }
    }
    Ok(out)
}

/// Witness bound of `P′`: both transcript parts are at most `n · (p(n) + 1)`
/// bits, as every gate takes more than one instance bit.
pub fn completion_bound(p: PolyBound) -> PolyBound {
    let answers = PolyBound::new(3, 1, 0).times(&PolyBound::new(p.c, p.k, p.d + 1));
    answers.plus(&PolyBound::new(3, 1, 8))
}

pub fn wrap_completion(p: &TfnpProblem) -> TfnpProblem {
    let name = format!("{}′", p.name);
    let inner = p.clone();
    let relation = NativeRelation::new(name.clone(), 2, move |v| match decode_completion_instance(v[0]) {
        Some((x, c)) if answer_widths_fit(&inner, &c) => verify_transcript(&inner, &x, &c, v[1]),
        _ => Ok(true),
    });
    let inner = p.clone();
    let candidates = Arc::new(move |u: &BitString| match decode_completion_instance(u) {
        Some((x, c)) if answer_widths_fit(&inner, &c) => all_transcripts(&inner, &x, &c, COMPLETION_LIST_LIMIT).map(Some),
        _ => Ok(None),
    });
    TfnpProblem::new(name, completion_bound(p.bound), Arc::new(relation)).with_candidates(candidates)
}

/// Solves `source` with an oracle for `oracle`. The program reads `x` and
/// outputs a solution already padded to `p_source(|x|) + 1` bits.
#[derive(Clone, Debug)]
pub struct TuringReduction {
    pub name: String,
    pub program: VerifierProgram,
    pub source: TfnpProblem,
    pub oracle: TfnpProblem,
}

impl TuringReduction {
    pub fn new(program: VerifierProgram, source: TfnpProblem, oracle: TfnpProblem) -> Result<Self, TfnpError> {
        if program.arity != 1 {
            return Err(TfnpError::Arity { expected: 1, found: program.arity });
        }
        if let Some(o) = &program.oracle {
            // the program's answer width must be the padded witness width at every query width
            if (0..64).any(|q| o.answer_width.eval(q) != oracle.bound.eval(q) + 1) {
                return Err(TfnpError::Malformed(format!(
                    "{}: answer width {} is not {} + 1",
                    program.name, o.answer_width, oracle.bound
                )));
            }
        }
        Ok(TuringReduction { name: program.name.clone(), program, source, oracle })
    }

    /// Runs the program with `answer` supplying oracle witnesses.
    pub fn solve(
        &self,
        x: &BitString,
        answer: &mut dyn FnMut(&BitString) -> Result<BitString, TfnpError>,
    ) -> Result<BitString, TfnpError> {
        let mut failure = None;
        let oracle = &self.oracle;
        let res = run_with_oracle(&self.program, &[x], &mut |q| {
            let width = oracle.bound.eval(q.len()) + 1;
            match answer(q) {
                Ok(s) => pad(&s, width).ok_or_else(|| crate::vm::VmError::Oracle("answer too long".into())),
                Err(e) => {
                    let msg = e.to_string();
                    failure = Some(e);
                    Err(crate::vm::VmError::Oracle(msg))
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(unpad(&res?.output).unwrap_or_default())
    }

    pub fn compile(&self, n: usize, gate_cap: usize) -> Result<BoolCircuit, TfnpError> {
        let width = self.source.bound.eval(n) + 1;
        Ok(compile_program(&self.program, &[InputSpec::Free(n)], OutputMode::Exact(width), gate_cap)?.circuit)
    }
}

/// `x ↦ (x, C_|x|)` and `(x, v) ↦` the output recorded in the transcript `v`.
pub fn turing_to_many_one(t: &TuringReduction, gate_cap: usize) -> ManyOneReduction {
    let cache: Arc<Mutex<HashMap<usize, Arc<BoolCircuit>>>> = Arc::default();
    let circuit = {
        let t = t.clone();
        let cache = cache.clone();
        move |n: usize| -> Result<Arc<BoolCircuit>, TfnpError> {
            if let Some(c) = cache.lock().expect("cache lock").get(&n) {
                return Ok(c.clone());
            }
            let c = Arc::new(t.compile(n, gate_cap)?);
            cache.lock().expect("cache lock").insert(n, c.clone());
            Ok(c)
        }
    };
    let circuit_f = circuit.clone();
    let f = NativeTransformer::new(format!("{}_instance", t.name), 1, move |v| {
        Ok(completion_instance(v[0], &*circuit_f(v[0].len())?))
    });
    let g = NativeTransformer::new(format!("{}_output", t.name), 2, move |v| {
        let c = circuit(v[0].len())?;
        let Some(parts) = decode_tuple(v[1], 2) else { return Ok(BitString::new()) };
        let gates = parts[1].bits();
        if gates.len() != c.size() {
            return Ok(BitString::new());
        }
        let out = BitString::from_bits(c.outputs.iter().map(|&o| gates[o]).collect());
        Ok(unpad(&out).unwrap_or_default())
    });
    ManyOneReduction::new(format!("completion[{}]", t.name), Arc::new(f), Arc::new(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::CircuitBuilder;
    use crate::tfnp::{check_many_one, factoring_problem, solve_brute};
    use crate::vm::library;

    #[test]
    fn oracle_free_constant_circuit() {
        let p = factoring_problem();
        let mut b = CircuitBuilder::new(2, 1 << 10);
        let one = b.constant(true);
        let c = b.finish(vec![one]).unwrap();
        let x: BitString = "10".into();
        let u = completion_instance(&x, &c);
        let (_, t) = c.eval_with_oracle(x.bits(), &mut |_| unreachable!()).unwrap();
        let v = encode_transcript(&t);
        let pc = wrap_completion(&p);
        assert!(crate::tfnp::verify_solution(&pc, &u, &v).unwrap());
        assert_eq!(crate::tfnp::all_witnesses(&pc, &u).unwrap(), vec![v]);
    }

    #[test]
    fn malformed_instances_accept_everything() {
        let pc = wrap_completion(&factoring_problem());
        assert!(crate::tfnp::verify_solution(&pc, &"0110".into(), &BitString::new()).unwrap());
        assert!(crate::tfnp::verify_solution(&pc, &"0110".into(), &"1".into()).unwrap());
        assert_eq!(solve_brute(&pc, &"11".into()).unwrap(), BitString::new());
    }

    #[test]
    fn query_once_forged_answer_rejected() {
        let p = factoring_problem();
        let t = TuringReduction::new(library::query_once(), p.clone(), p.clone()).unwrap();
        let x = BitString::from_num(12);
        assert_eq!(t.solve(&x, &mut |q| solve_brute(&p, q)).unwrap(), BitString::from_num(2));
        let c = t.compile(x.len(), 1 << 20).unwrap();
        let u = completion_instance(&x, &c);
        let good = all_transcripts(&p, &x, &c, 100).unwrap();
        assert_eq!(good.len(), 4); // proper factors 2, 3, 4, 6
        let pc = wrap_completion(&p);
        for v in &good {
            assert!(crate::tfnp::verify_solution(&pc, &u, v).unwrap());
        }
        // answer 5 is not a factor of 12
        let (_, forged) = c
            .eval_with_oracle(x.bits(), &mut |_| Ok(pad(&BitString::from_num(5), 5).unwrap().into_bits()))
            .unwrap();
        assert!(!crate::tfnp::verify_solution(&pc, &u, &encode_transcript(&forged)).unwrap());
        let red = turing_to_many_one(&t, 1 << 20);
        let domain: Vec<BitString> = (0..=20).map(BitString::from_num).collect();
        let report = check_many_one(&red, &p, &pc, &domain);
        assert!(report.pass, "{:?}", report.first_failure());
    }
}
