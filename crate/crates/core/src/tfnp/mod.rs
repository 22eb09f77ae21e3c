//! Total search problems, many-one and Turing reductions, padding
//! normalization, the completion construction, the registry-based universal
//! problem, and the concrete problems PIGEON, FACTORING and HCS.

mod completion;
mod flatten;
mod hcs;
mod problem;
mod padding;
mod problems;
mod reduction;
mod universal;

use thiserror::Error;

use crate::logic::LogicError;
use crate::prop::PropError;
use crate::vm::VmError;

pub use completion::{
    all_transcripts, completion_bound, completion_instance, decode_completion_instance, encode_transcript,
    turing_to_many_one, verify_transcript, wrap_completion, TuringReduction, COMPLETION_LIST_LIMIT,
};
pub use flatten::flatten_np_relation;
pub use hcs::{
    decode_hcs_instance, encode_hcs_instance, expansion_cnf, expansion_models, hcs_expansion, hcs_problem, php_instance,
    php_sentence, pigeon_to_hcs, solve_expansion, HCS_LIST_LIMIT, MAX_TERM_DEPTH,
};
pub use padding::{normalize_padding, pad, padded_bound, unpad};
pub use problem::{
    all_witnesses, all_witnesses_limited, solve_brute, solve_brute_limited, verify_solution, CandidateFn,
    NativeRelation, Relation, TfnpProblem, DEFAULT_SWEEP_LIMIT,
};
pub use problems::{
    add2_problem, factoring_problem, pigeon_bound, pigeon_holds, pigeon_problem, pigeon_witnesses, rev_problem,
    succ_problem, PigeonMap, PigeonWitness, PIGEON_LIST_LIMIT,
};
pub use reduction::{
    apply_many_one, check_many_one, compose, identity_reduction, CaseReport, ManyOneReduction, NativeTransformer,
    ReductionReport, Transformer, WitnessCheck,
};
pub use universal::{
    embed_reduction, universal_bound, universal_problem, universal_witness, Registry, RegistryEntry,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TfnpError {
    #[error(transparent)]
    Vm(#[from] VmError),
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("expected {expected} inputs, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("search space of {problem} too large (witness bound {bound})")]
    SearchSpaceTooLarge { problem: String, bound: usize },
    #[error("{problem} has no witness on instance {instance}")]
    TotalityViolation { problem: String, instance: String },
    #[error("reduction {reduction} maps witness {witness} of instance {instance} to a non-witness")]
    ReductionUnsound { reduction: String, instance: String, witness: String },
    #[error("registry: {0}")]
    Registry(String),
    #[error("malformed: {0}")]
    Malformed(String),
}

impl TfnpError {
    /// Errors that say a configured limit was hit, not that something is wrong.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            TfnpError::SearchSpaceTooLarge { .. }
                | TfnpError::Vm(VmError::GateCap { .. } | VmError::BudgetExceeded { .. })
        )
    }
}
