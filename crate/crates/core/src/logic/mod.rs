//! First-order syntax: terms, quantifier-free matrices, universal sentences,
//! parsing, substitution, Herbrand expansion and binary numerals.

mod gen;
mod herbrand;
mod numeral;
mod parse;
mod syntax;

use thiserror::Error;

pub use gen::{random_model_sentence, FiniteStructure};
pub use herbrand::{
    all_tuples, enumerate_herbrand_terms, herbrand_expand, substitute, term_order, GroundConjunction,
};
pub use numeral::{binary_numeral, eval_arith, pad_sentence, NUMERAL_SIZE_FACTOR};
pub use parse::{parse_sentence, parse_sentence_file, parse_term, print_sentence_file};
pub use syntax::{Atom, Matrix, Signature, Symbol, Term, UniversalSentence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("symbol {symbol} expects {expected} arguments, got {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("undeclared symbol {0}")]
    UndeclaredSymbol(String),
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("tuple has {found} terms, sentence has {expected} variables")]
    TupleLength { expected: usize, found: usize },
    #[error("term or formula is not ground: {0}")]
    NonGround(String),
    #[error("padding needs at least one conjunct")]
    ZeroPadding,
    #[error("json: {0}")]
    Json(String),
}
