use std::fmt;

use super::bound::PolyBound;
use super::VmError;

pub type Reg = usize;

/// Number of bits in a register word.
pub const WORD_BITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    /// `x / 0 = 0`.
    Div,
    /// `x % 0 = x`.
    Mod,
    And,
    Or,
    Xor,
    /// 1 if equal, else 0.
    Eq,
    /// Unsigned; 1 if less, else 0.
    Lt,
    /// Shift amounts of 32 or more give 0.
    Shl,
    Shr,
}

impl BinOp {
    pub const ALL: [BinOp; 12] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Mod,
        BinOp::And,
        BinOp::Or,
        BinOp::Xor,
        BinOp::Eq,
        BinOp::Lt,
        BinOp::Shl,
        BinOp::Shr,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Mul => "mul",
            BinOp::Div => "div",
            BinOp::Mod => "mod",
            BinOp::And => "and",
            BinOp::Or => "or",
            BinOp::Xor => "xor",
            BinOp::Eq => "eq",
            BinOp::Lt => "lt",
            BinOp::Shl => "shl",
            BinOp::Shr => "shr",
        }
    }

    pub fn apply(self, a: u32, b: u32) -> u32 {
        match self {
            BinOp::Add => a.wrapping_add(b),
            BinOp::Sub => a.wrapping_sub(b),
            BinOp::Mul => a.wrapping_mul(b),
            BinOp::Div => a.checked_div(b).unwrap_or(0),
            BinOp::Mod => a.checked_rem(b).unwrap_or(a),
            BinOp::And => a & b,
            BinOp::Or => a | b,
            BinOp::Xor => a ^ b,
            BinOp::Eq => u32::from(a == b),
            BinOp::Lt => u32::from(a < b),
            BinOp::Shl => a.checked_shl(b).unwrap_or(0),
            BinOp::Shr => a.checked_shr(b).unwrap_or(0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Const(Reg, u32),
    Mov(Reg, Reg),
    /// `dst = |input[k]|`.
    Len(Reg, usize),
    /// `dst = input[k][idx]`, 0 when `idx` is out of range. Index 0 is the first bit.
    Bit(Reg, usize, Reg),
    Bin(BinOp, Reg, Reg, Reg),
    Jmp(usize),
    Jz(Reg, usize),
    Jnz(Reg, usize),
    /// Appends `src != 0` to the output.
    Out(Reg),
    /// Appends `src != 0` to the pending oracle query.
    Push(Reg),
    /// Sends the pending query to the oracle and clears it.
    Ask,
    /// `dst = answer[idx]` for the latest answer, 0 when out of range.
    Ans(Reg, Reg),
    Accept,
    Reject,
}

/// Oracle access of a program: queries have `query_width(n)` bits, where `n`
/// is the total input length, and answers `answer_width(query width)` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub query_width: PolyBound,
    pub answer_width: PolyBound,
}

/// Deterministic program over `regs` 32-bit registers, all initially zero.
/// Every run must halt within `budget(n)` steps, `n` the total input length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifierProgram {
    pub name: String,
    pub arity: usize,
    pub regs: usize,
    pub code: Vec<Instr>,
    pub budget: PolyBound,
    pub oracle: Option<OracleSpec>,
}

impl VerifierProgram {
    /// Checks register, input and jump-target ranges.
    pub fn validate(&self) -> Result<(), VmError> {
        let bad = |pc: usize, m: &str| Err(VmError::BadProgram(format!("{}: instruction {pc}: {m}", self.name)));
        let n = self.code.len();
        for (pc, ins) in self.code.iter().enumerate() {
            let (regs, input, target): (Vec<Reg>, Option<usize>, Option<usize>) = match *ins {
                Instr::Const(r, _) | Instr::Out(r) | Instr::Push(r) => (vec![r], None, None),
                Instr::Mov(a, b) | Instr::Ans(a, b) => (vec![a, b], None, None),
                Instr::Len(r, k) => (vec![r], Some(k), None),
                Instr::Bit(r, k, i) => (vec![r, i], Some(k), None),
                Instr::Bin(_, a, b, c) => (vec![a, b, c], None, None),
                Instr::Jmp(t) => (vec![], None, Some(t)),
                Instr::Jz(r, t) | Instr::Jnz(r, t) => (vec![r], None, Some(t)),
                Instr::Ask | Instr::Accept | Instr::Reject => (vec![], None, None),
            };
            if regs.iter().any(|&r| r >= self.regs) {
                return bad(pc, "register out of range");
            }
            if input.is_some_and(|k| k >= self.arity) {
                return bad(pc, "input index out of range");
            }
            if target.is_some_and(|t| t >= n) {
                return bad(pc, "jump target out of range");
            }
            let uses_oracle = matches!(ins, Instr::Push(_) | Instr::Ask | Instr::Ans(..));
            if uses_oracle && self.oracle.is_none() {
                return bad(pc, "oracle instruction without oracle declaration");
            }
        }
        if !self.code.iter().any(|i| matches!(i, Instr::Accept | Instr::Reject)) {
            return Err(VmError::BadProgram(format!("{}: no halting instruction", self.name)));
        }
        Ok(())
    }
}

impl fmt::Display for VerifierProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::asm::print_program(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_semantics() {
        assert_eq!(BinOp::Div.apply(7, 0), 0);
        assert_eq!(BinOp::Mod.apply(7, 0), 7);
        assert_eq!(BinOp::Sub.apply(0, 1), u32::MAX);
        assert_eq!(BinOp::Shl.apply(1, 32), 0);
        assert_eq!(BinOp::Shr.apply(8, 3), 1);
        assert_eq!(BinOp::Lt.apply(3, 4), 1);
    }
}
