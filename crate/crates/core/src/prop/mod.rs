//! Propositional formulas, CNF, a DPLL solver, Tseitin encoding, DIMACS and
//! Boolean circuits with optional oracle gates.

mod builder;
mod circuit;
mod cnf;
mod dimacs;
mod formula;
mod sat;
mod tseitin;

use thiserror::Error;

pub use builder::{CircuitBuilder, Wire};
pub use circuit::{compose_circuits, BoolCircuit, Gate, OracleCircuit, Transcript};
pub use cnf::{Clause, Cnf, Lit};
pub use dimacs::{read_dimacs, write_dimacs};
pub use formula::{Assignment, PropFormula};
pub use sat::{all_sat, sat_solve};
pub use tseitin::{tseitin, tseitin_definitions, TseitinEncoding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropError {
    #[error("formula syntax: {0}")]
    Syntax(String),
    #[error("dimacs: {0}")]
    Dimacs(String),
    #[error("circuit: {0}")]
    Circuit(String),
    #[error("width mismatch: expected {expected}, found {found}")]
    Width { expected: usize, found: usize },
    #[error("circuit exceeds the gate cap of {cap}")]
    CircuitTooLarge { cap: usize },
}
