//! Total search problems, their reductions, and the proof systems and
//! disjoint pairs built from them.

pub mod bits;
pub mod cli;
pub mod logic;
pub mod pairs;
pub mod prop;
pub mod selftest;
pub mod tfnp;
pub mod vm;
