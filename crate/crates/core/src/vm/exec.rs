use crate::bits::BitString;

use super::program::{Instr, VerifierProgram};
use super::VmError;

/// Oracle callback: answers one query of the declared width.
pub type OracleFn<'a> = dyn FnMut(&BitString) -> Result<BitString, VmError> + 'a;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub accepted: bool,
    pub steps: usize,
    pub output: BitString,
    /// Query/answer pairs in the order asked.
    pub queries: Vec<(BitString, BitString)>,
    /// Program counters visited, when tracing was requested.
    pub trace: Option<Vec<usize>>,
}

/// Runs an oracle-free program.
pub fn run(prog: &VerifierProgram, inputs: &[&BitString]) -> Result<RunResult, VmError> {
    execute(prog, inputs, None, false)
}

/// Runs an oracle-free program recording the visited program counters.
pub fn run_traced(prog: &VerifierProgram, inputs: &[&BitString]) -> Result<RunResult, VmError> {
    execute(prog, inputs, None, true)
}

pub fn run_with_oracle(
    prog: &VerifierProgram,
    inputs: &[&BitString],
    oracle: &mut OracleFn<'_>,
) -> Result<RunResult, VmError> {
    execute(prog, inputs, Some(oracle), false)
}

fn execute(
    prog: &VerifierProgram,
    inputs: &[&BitString],
    mut oracle: Option<&mut OracleFn<'_>>,
    traced: bool,
) -> Result<RunResult, VmError> {
    if inputs.len() != prog.arity {
        return Err(VmError::Arity { expected: prog.arity, found: inputs.len() });
    }
    let n: usize = inputs.iter().map(|x| x.len()).sum();
    let budget = prog.budget.eval(n);
    let (query_width, answer_width) = match &prog.oracle {
        Some(spec) => {
            let q = spec.query_width.eval(n);
            (q, spec.answer_width.eval(q))
        }
        None => (0, 0),
    };
    let mut r = vec![0u32; prog.regs];
    let mut pc = 0usize;
    let mut steps = 0usize;
    let mut output = BitString::new();
    let mut query = BitString::new();
    let mut answer = BitString::new();
    let mut queries = Vec::new();
    let mut trace = traced.then(Vec::new);
    let word_index = |w: u32| w as usize;
    loop {
        if steps >= budget {
            return Err(VmError::BudgetExceeded { budget, program: prog.name.clone() });
        }
        let ins = *prog
            .code
            .get(pc)
            .ok_or_else(|| VmError::BadProgram(format!("{}: fell off the end of the code", prog.name)))?;
        steps += 1;
        if let Some(t) = trace.as_mut() {
            t.push(pc);
        }
        pc += 1;
        match ins {
            Instr::Const(d, v) => r[d] = v,
            Instr::Mov(d, s) => r[d] = r[s],
            Instr::Len(d, k) => r[d] = inputs[k].len() as u32,
            Instr::Bit(d, k, i) => r[d] = u32::from(inputs[k].get(word_index(r[i])).unwrap_or(false)),
            Instr::Bin(op, d, a, b) => r[d] = op.apply(r[a], r[b]),
            Instr::Jmp(t) => pc = t,
            Instr::Jz(c, t) => {
                if r[c] == 0 {
                    pc = t;
                }
            }
            Instr::Jnz(c, t) => {
                if r[c] != 0 {
                    pc = t;
                }
            }
            Instr::Out(s) => output.push(r[s] != 0),
            Instr::Push(s) => query.push(r[s] != 0),
            Instr::Ask => {
                if query.len() != query_width {
                    return Err(VmError::QueryWidth { expected: query_width, found: query.len() });
                }
                let o = oracle.as_mut().ok_or(VmError::NoOracle)?;
                let a = o(&query)?;
                if a.len() != answer_width {
                    return Err(VmError::AnswerWidth { expected: answer_width, found: a.len() });
                }
                queries.push((std::mem::take(&mut query), a.clone()));
                answer = a;
            }
            Instr::Ans(d, i) => r[d] = u32::from(answer.get(word_index(r[i])).unwrap_or(false)),
            Instr::Accept | Instr::Reject => {
                return Ok(RunResult {
                    accepted: matches!(ins, Instr::Accept),
                    steps,
                    output,
                    queries,
                    trace,
                })
            }
        }
    }
}
