//! Propositional proof systems, Resolution, disjoint NP and coNP pairs,
//! multivalued functions, and proof systems for satisfiability.

mod canonical;
mod conp;
mod membership;
mod npmv;
mod proofsys;
mod resolution;
mod sat_systems;
mod universal_pair;

pub use canonical::{
    assignment_bits, canonical_instance, canonical_np_pair, decode_canonical_instance, lift_simulation,
    translation_counterexamples, Simulation, SimulationRecord,
};
pub use conp::{
    canonical_conp_pair, circuit_battery, conp_instance, conp_pair_to_canonical, counterexample_reduction,
    decode_conp_instance, lift_tfnp_reduction_to_conp_pairs, pigeon_universal_setup, selector_circuit,
};
pub use membership::{
    check_pair_reduction, compose_pair_reductions, DisjointPair, Membership, PairCase, PairClass, PairReduction,
    PairReport, Quantifier,
};
pub use npmv::{
    check_npmv_reduction, divisor_function, isqrt, npmv_to_tfnp, project_value, trial_division_certificate, NpmvCase,
    NpmvFunction, NpmvReport, PairCandidates, NPMV_SWEEP_LIMIT,
};
pub use proofsys::{
    resolution_proof, resolution_proof_system, shortest_exhibited_proof, truth_table_proof, truth_table_system,
    Checker, ProofSystem, SoundnessDomain, TRUTH_TABLE_MAX_VARS,
};
pub use resolution::{
    check_resolution, derive_clauses, diagnose_resolution, find_refutation, php_cnf, ResolutionRefutation,
    ResolutionStep,
};
pub use sat_systems::{
    circuit_cnf, composite_sat_system, gamma_circuit, gamma_cnf, gamma_factors, gamma_proof, is_composite, sat_proof,
    standard_sat_system,
};
pub use universal_pair::{
    composite_prime_pair, embed_pair_reduction, even_odd_pair, universal_disjoint_np_pair, PairEntry, PairRegistry,
};
