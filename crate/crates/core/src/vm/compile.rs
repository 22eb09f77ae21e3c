//! Oblivious unrolling of budgeted runs into circuits.
//!
//! Each step keeps one guard wire per instruction (a one-hot program
//! counter) and the symbolic register file. Instruction effects are merged
//! with multiplexers under their guards. Constant folding in the builder
//! keeps programs whose control flow depends only on input lengths small:
//! their guards stay constant and unrolling stops once every guard sits on
//! a halting instruction.

use crate::bits::BitString;
use crate::prop::{BoolCircuit, CircuitBuilder, PropError, Wire};

use super::program::{BinOp, Instr, VerifierProgram, WORD_BITS};
use super::words::{self, Word};
use super::VmError;

pub const DEFAULT_GATE_CAP: usize = 1 << 20;

/// Size constant: a compiled circuit has at most
/// `SIZE_CONSTANT · steps · (registers + instructions) · 32` gates plus one
/// gate per circuit input.
pub const SIZE_CONSTANT: usize = 64;

/// What the circuit outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    /// One bit: 1 iff the run accepts.
    Accept,
    /// The first `w` output bits, zero-filled.
    Exact(usize),
    /// The output `y` as `y·1·0^k` in exactly `w` bits; requires `|y| < w`.
    Pad(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSpec {
    /// Free input of the given width, read from the circuit inputs in order.
    Free(usize),
    /// Input fixed to a constant.
    Fixed(BitString),
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: BoolCircuit,
    /// Steps unrolled before every guard was halted, or the full budget.
    pub steps: usize,
}

fn gate_cap_error(e: PropError) -> VmError {
    match e {
        PropError::CircuitTooLarge { cap } => VmError::GateCap { cap },
        other => VmError::BadProgram(other.to_string()),
    }
}

/// Accept-bit circuit of a verifier on free inputs of the given widths.
pub fn compile_to_circuit(prog: &VerifierProgram, widths: &[usize], gate_cap: usize) -> Result<BoolCircuit, VmError> {
    let specs: Vec<InputSpec> = widths.iter().map(|&w| InputSpec::Free(w)).collect();
    Ok(compile_program(prog, &specs, OutputMode::Accept, gate_cap)?.circuit)
}

/// Output circuit of a function program on free inputs of the given widths.
pub fn compile_function(
    prog: &VerifierProgram,
    inputs: &[InputSpec],
    mode: OutputMode,
    gate_cap: usize,
) -> Result<BoolCircuit, VmError> {
    Ok(compile_program(prog, inputs, mode, gate_cap)?.circuit)
}

pub fn compile_program(
    prog: &VerifierProgram,
    inputs: &[InputSpec],
    mode: OutputMode,
    gate_cap: usize,
) -> Result<Compiled, VmError> {
    prog.validate()?;
    if inputs.len() != prog.arity {
        return Err(VmError::Arity { expected: prog.arity, found: inputs.len() });
    }
    let free_width: usize = inputs.iter().map(|s| if let InputSpec::Free(w) = s { *w } else { 0 }).sum();
    let mut b = CircuitBuilder::new(free_width, gate_cap);
    let mut next_input = 0;
    let mut input_bits: Vec<Vec<Wire>> = Vec::with_capacity(inputs.len());
    for spec in inputs {
        let bits = match spec {
            InputSpec::Free(w) => (0..*w)
                .map(|i| b.input(next_input + i))
                .collect::<Vec<_>>(),
            InputSpec::Fixed(x) => x.bits().iter().map(|&v| b.constant(v)).collect(),
        };
        if let InputSpec::Free(w) = spec {
            next_input += w;
        }
        input_bits.push(bits);
    }
    let n: usize = input_bits.iter().map(Vec::len).sum();
    let budget = prog.budget.eval(n);
    let (query_width, answer_width) = match &prog.oracle {
        Some(o) => {
            let q = o.query_width.eval(n);
            (q, o.answer_width.eval(q))
        }
        None => (0, 0),
    };
    let out_width = match mode {
        OutputMode::Accept => 0,
        OutputMode::Exact(w) | OutputMode::Pad(w) => w,
    };
    let code = &prog.code;
    let f = b.constant(false);
    let t = b.constant(true);
    let zero_word = words::const_word(&mut b, 0);
    let mut regs: Vec<Word> = vec![zero_word.clone(); prog.regs];
    let mut guards: Vec<Wire> = vec![f; code.len()];
    guards[0] = t;
    let mut out: Vec<Wire> = vec![f; out_width];
    let mut out_pos = zero_word.clone();
    let mut query: Vec<Wire> = vec![f; query_width];
    let mut query_pos = zero_word.clone();
    let mut answer: Vec<Wire> = vec![f; answer_width];
    let halting = |i: usize| matches!(code[i], Instr::Accept | Instr::Reject);

    let mut steps = 0;
    while steps < budget {
        let running = (0..code.len()).any(|i| !halting(i) && b.const_value(guards[i]) != Some(false));
        if !running {
            break;
        }
        steps += 1;
        let mut next: Vec<Wire> = vec![f; code.len()];
        let mut reg_writes: Vec<(usize, Wire, Word)> = Vec::new();
        let mut new_out = out.clone();
        let mut new_out_pos = out_pos.clone();
        let mut new_query = query.clone();
        let mut new_query_pos = query_pos.clone();
        let mut new_answer = answer.clone();
        for (i, &ins) in code.iter().enumerate() {
            let g = guards[i];
            if b.const_value(g) == Some(false) {
                continue;
            }
            let mut fall_through = true;
            match ins {
                Instr::Const(d, v) => {
                    let w = words::const_word(&mut b, v);
                    reg_writes.push((d, g, w));
                }
                Instr::Mov(d, s) => reg_writes.push((d, g, regs[s].clone())),
                Instr::Len(d, k) => {
                    let w = words::const_word(&mut b, input_bits[k].len() as u32);
                    reg_writes.push((d, g, w));
                }
                Instr::Bit(d, k, idx) => {
                    let bit = words::select(&mut b, &input_bits[k], &regs[idx]);
                    let mut w = zero_word.clone();
                    w[0] = bit;
                    reg_writes.push((d, g, w));
                }
                Instr::Bin(op, d, x, y) => {
                    let w = words::binop(&mut b, op, &regs[x], &regs[y]);
                    reg_writes.push((d, g, w));
                }
                Instr::Jmp(target) => {
                    next[target] = b.or(next[target], g);
                    fall_through = false;
                }
                Instr::Jz(c, target) | Instr::Jnz(c, target) => {
                    let z = words::is_zero(&mut b, &regs[c]);
                    let jump = if matches!(ins, Instr::Jz(..)) { z } else { b.not(z) };
                    let taken = b.and(g, jump);
                    next[target] = b.or(next[target], taken);
                    let nj = b.not(jump);
                    let stay = b.and(g, nj);
                    if i + 1 < code.len() {
                        next[i + 1] = b.or(next[i + 1], stay);
                    }
                    fall_through = false;
                }
                Instr::Out(s) | Instr::Push(s) => {
                    let is_out = matches!(ins, Instr::Out(_));
                    let v = b.or_all(&regs[s]);
                    let (buf, pos, new_buf, new_pos) = if is_out {
                        (&out, &out_pos, &mut new_out, &mut new_out_pos)
                    } else {
                        (&query, &query_pos, &mut new_query, &mut new_query_pos)
                    };
                    for j in 0..buf.len() {
                        let here = words::eq_const(&mut b, pos, j);
                        let sel = b.and(g, here);
                        new_buf[j] = b.mux(sel, v, new_buf[j]);
                    }
                    let inc = words::increment(&mut b, pos);
                    *new_pos = words::mux_word(&mut b, g, &inc, new_pos);
                }
                Instr::Ask => {
                    let ans = b.oracle(&query, answer_width);
                    new_answer = words::mux_word(&mut b, g, &ans, &new_answer);
                    new_query_pos = words::mux_word(&mut b, g, &zero_word, &new_query_pos);
                }
                Instr::Ans(d, idx) => {
                    let bit = words::select(&mut b, &answer, &regs[idx]);
                    let mut w = zero_word.clone();
                    w[0] = bit;
                    reg_writes.push((d, g, w));
                }
                Instr::Accept | Instr::Reject => {
                    next[i] = b.or(next[i], g);
                    fall_through = false;
                }
            }
            if fall_through && i + 1 < code.len() {
                next[i + 1] = b.or(next[i + 1], g);
            }
        }
        for (d, g, w) in reg_writes {
            regs[d] = words::mux_word(&mut b, g, &w, &regs[d]);
        }
        guards = next;
        out = new_out;
        out_pos = new_out_pos;
        query = new_query;
        query_pos = new_query_pos;
        answer = new_answer;
        if b.over_cap() {
            return Err(VmError::GateCap { cap: gate_cap });
        }
    }

    let outputs = match mode {
        OutputMode::Accept => {
            let acc: Vec<Wire> = (0..code.len()).filter(|&i| matches!(code[i], Instr::Accept)).map(|i| guards[i]).collect();
            vec![b.or_all(&acc)]
        }
        OutputMode::Exact(_) => out,
        OutputMode::Pad(w) => (0..w)
            .map(|j| {
                let at = words::eq_const(&mut b, &out_pos, j);
                let jw = words::const_word(&mut b, j as u32);
                let written = words::binop(&mut b, BinOp::Lt, &jw, &out_pos)[0];
                let data = b.and(written, out[j]);
                b.or(data, at)
            })
            .collect(),
    };
    let circuit = b.finish(outputs).map_err(gate_cap_error)?;
    let limit = SIZE_CONSTANT * steps.max(1) * (prog.regs + code.len()) * WORD_BITS + free_width;
    if circuit.size() > limit {
        return Err(VmError::SizeBound { size: circuit.size(), limit });
    }
    Ok(Compiled { circuit, steps })
}
