//! Budgeted bytecode programs over 32-bit registers, their compilation into
//! circuits, and the tuple pair code.

pub mod asm;
mod bound;
mod compile;
mod exec;
pub mod library;
mod paircode;
mod program;
mod words;

use thiserror::Error;

pub use asm::{parse_program, print_program};
pub use bound::PolyBound;
pub use compile::{
    compile_function, compile_program, compile_to_circuit, Compiled, InputSpec, OutputMode, DEFAULT_GATE_CAP,
    SIZE_CONSTANT,
};
pub use exec::{run, run_traced, run_with_oracle, OracleFn, RunResult};
pub use paircode::{decode_tuple, encode_owned, encode_tuple};
pub use program::{BinOp, Instr, OracleSpec, Reg, VerifierProgram, WORD_BITS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VmError {
    #[error("{program}: step budget of {budget} exceeded")]
    BudgetExceeded { budget: usize, program: String },
    #[error("expected {expected} inputs, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid program: {0}")]
    BadProgram(String),
    #[error("assembly line {line}: {msg}")]
    Asm { line: usize, msg: String },
    #[error("oracle query has {found} bits, expected {expected}")]
    QueryWidth { expected: usize, found: usize },
    #[error("oracle answer has {found} bits, expected {expected}")]
    AnswerWidth { expected: usize, found: usize },
    #[error("program asked an oracle but none was supplied")]
    NoOracle,
    #[error("oracle failed: {0}")]
    Oracle(String),
    #[error("circuit exceeds the gate cap of {cap}")]
    GateCap { cap: usize },
    #[error("circuit of {size} gates exceeds the size bound {limit}")]
    SizeBound { size: usize, limit: usize },
}
