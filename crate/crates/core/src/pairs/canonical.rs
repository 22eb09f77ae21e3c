//! The canonical disjoint NP pair of a proof system and the pair
//! reductions induced by simulations.
//!
//! An instance is the pair code of `(φ, 1^m)` with `φ` as formula text. The
//! first member holds it when some proof of at most `m` bytes emits `φ`; the
//! second when `¬φ` has a satisfying assignment. Anything else lies in
//! neither member.

use std::fmt;
use std::sync::Arc;

use crate::bits::BitString;
use crate::prop::{sat_solve, tseitin, PropFormula};
use crate::tfnp::{NativeRelation, NativeTransformer, TfnpError};
use crate::vm::{decode_tuple, encode_tuple, PolyBound};

use super::membership::{DisjointPair, Membership, PairReduction, Quantifier};
use super::proofsys::{resolution_proof, truth_table_proof, ProofSystem};

pub fn canonical_instance(phi: &PropFormula, m: usize) -> BitString {
    encode_tuple(&[&BitString::from_bytes(phi.to_string().as_bytes()), &BitString::ones(m)])
}

pub fn decode_canonical_instance(x: &BitString) -> Option<(PropFormula, usize)> {
    let parts = decode_tuple(x, 2)?;
    let text = String::from_utf8(parts[0].to_bytes()?).ok()?;
    let phi = text.parse().ok()?;
    parts[1].bits().iter().all(|&b| b).then_some((phi, parts[1].len()))
}

/// An assignment to `x1..=xn` as `n` bits, `n = max_var(φ)`.
pub fn assignment_bits(values: &[bool]) -> BitString {
    BitString::from_bits(values.to_vec())
}

fn satisfies(phi: &PropFormula, y: &BitString) -> bool {
    y.len() == phi.max_var() as usize && phi.eval_with(&|i| y.bits()[i as usize - 1])
}

/// The pair `(PR(P), NSAT*)`. Membership in the first member is decided
/// over the empty proof and the exhibited truth-table and resolution proofs.
pub fn canonical_np_pair(system: &ProofSystem) -> DisjointPair {
    let sys = system.clone();
    let proves = NativeRelation::new(format!("proves[{}]", system.name), 2, move |v| {
        let Some((phi, m)) = decode_canonical_instance(v[0]) else { return Ok(false) };
        Ok(match v[1].to_bytes() {
            Some(d) if d.len() <= m => sys.check(&d) == phi,
            _ => false,
        })
    });
    let first = Membership::new(format!("PR[{}]", system.name), Quantifier::Exists, PolyBound::new(8, 1, 0), Arc::new(proves))
        .with_candidates(Arc::new(|x: &BitString| {
            let Some((phi, _)) = decode_canonical_instance(x) else { return Ok(Some(Vec::new())) };
            let mut proofs = vec![Vec::new()];
            proofs.extend(truth_table_proof(&phi));
            proofs.extend(resolution_proof(&phi));
            Ok(Some(proofs.iter().map(|d| BitString::from_bytes(d)).collect()))
        }));
    let refutes = NativeRelation::new("falsifies", 2, |v| {
        Ok(decode_canonical_instance(v[0]).is_some_and(|(phi, _)| satisfies(&PropFormula::not(phi), v[1])))
    });
    let second = Membership::new("NSAT*", Quantifier::Exists, PolyBound::linear(), Arc::new(refutes)).with_candidates(
        Arc::new(|x: &BitString| {
            let Some((phi, _)) = decode_canonical_instance(x) else { return Ok(Some(Vec::new())) };
            let n = phi.max_var() as usize;
            let model = sat_solve(&tseitin(&PropFormula::not(phi)));
            Ok(Some(model.map(|a| assignment_bits(a.restrict(n).values())).into_iter().collect()))
        }),
    );
    DisjointPair::new(format!("canonical[{}]", system.name), first, second)
}

#[derive(Clone)]
pub enum Simulation {
    /// Every formula with a source proof of length `n` has a target proof of
    /// length at most `p(n)`.
    Length(PolyBound),
    /// A proof translation with `target(t(d)) = source(d)`.
    Translation(Arc<dyn Fn(&[u8]) -> Vec<u8> + Send + Sync>),
}

#[derive(Clone)]
pub struct SimulationRecord {
    pub source: ProofSystem,
    pub target: ProofSystem,
    pub simulation: Simulation,
}

impl fmt::Debug for SimulationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.simulation {
            Simulation::Length(p) => format!("length {p}"),
            Simulation::Translation(_) => "translation".to_string(),
        };
        write!(f, "SimulationRecord({} -> {}, {kind})", self.source.name, self.target.name)
    }
}

/// `(φ, 1^n) ↦ (φ, 1^{p(n)})`; malformed instances map to themselves.
pub fn lift_simulation(rec: &SimulationRecord) -> Result<PairReduction, TfnpError> {
    let Simulation::Length(p) = rec.simulation.clone() else {
        return Err(TfnpError::Malformed("only length simulations lift to pair reductions".into()));
    };
    let name = format!("lift[{}->{}]", rec.source.name, rec.target.name);
    let f = NativeTransformer::new(name.clone(), 1, move |v| {
        Ok(match decode_canonical_instance(v[0]) {
            Some((phi, m)) => canonical_instance(&phi, p.eval(m)),
            None => v[0].clone(),
        })
    });
    Ok(PairReduction::new(name, Arc::new(f)))
}

/// Proofs among `proofs` on which a translation disagrees with the source.
pub fn translation_counterexamples(rec: &SimulationRecord, proofs: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let Simulation::Translation(t) = &rec.simulation else { return Vec::new() };
    proofs.iter().filter(|d| rec.target.check(&t(d)) != rec.source.check(d)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{check_pair_reduction, resolution_proof_system, truth_table_system, PairClass};

    fn f(s: &str) -> PropFormula {
        s.parse().unwrap()
    }

    #[test]
    fn members() {
        let pair = canonical_np_pair(&truth_table_system());
        let lem = f("x1 | ~x1");
        let d = truth_table_proof(&lem).unwrap();
        // the default output makes the empty proof prove excluded middle
        assert_eq!(pair.classify(&canonical_instance(&lem, 0)).unwrap(), PairClass::First);
        let other = f("~x1 | x1");
        assert_eq!(pair.classify(&canonical_instance(&other, d.len() - 1)).unwrap(), PairClass::Neither);
        assert_eq!(pair.classify(&canonical_instance(&other, d.len())).unwrap(), PairClass::First);
        let x = canonical_instance(&f("x1"), 3);
        assert_eq!(pair.classify(&x).unwrap(), PairClass::Second);
        assert_eq!(pair.second.evidence(&x).unwrap(), Some("0".into()));
        assert_eq!(pair.classify(&"0110".into()).unwrap(), PairClass::Neither);
    }

    #[test]
    fn lifted_length_simulation() {
        let rec = SimulationRecord {
            source: truth_table_system(),
            target: resolution_proof_system(),
            simulation: Simulation::Length(PolyBound::linear()),
        };
        let red = lift_simulation(&rec).unwrap();
        let formulas = ["x1 | ~x1", "~x1 | x1", "x1", "~x1", "x1 & ~x1", "~(x1 & ~x1)", "T", "F"];
        let domain: Vec<BitString> =
            formulas.iter().flat_map(|s| (0..24).map(move |m| canonical_instance(&f(s), m))).collect();
        let report = check_pair_reduction(&red, &canonical_np_pair(&rec.source), &canonical_np_pair(&rec.target), &domain);
        assert!(report.pass, "{:?}", report.first_failure());
        assert!(report.count(PairClass::First) > 0 && report.count(PairClass::Second) > 0);
    }

    #[test]
    fn identity_translation() {
        let rec = SimulationRecord {
            source: truth_table_system(),
            target: resolution_proof_system(),
            simulation: Simulation::Translation(Arc::new(|d| d.to_vec())),
        };
        let proofs: Vec<Vec<u8>> = ["x1 | ~x1", "~(x1 & ~x1)", "x2 | ~x2 | x1"]
            .iter()
            .filter_map(|s| truth_table_proof(&f(s)))
            .chain([b"junk".to_vec()])
            .collect();
        assert!(translation_counterexamples(&rec, &proofs).is_empty());
        assert!(lift_simulation(&rec).is_err());
    }
}
