//! A registry of disjoint NP pairs admitted with certificate tokens, and the
//! universal pair every registered pair reduces to.
//!
//! An instance is the pair code of `(x, name, certificate, 1^{b(|x|)})`,
//! where `b` bounds the witnesses of both registered members. A valid
//! instance lies in the member `i` that `x` lies in; every other string lies
//! in neither member.

use std::collections::BTreeMap;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::tfnp::{NativeRelation, NativeTransformer, TfnpError, DEFAULT_SWEEP_LIMIT};
use crate::vm::{decode_tuple, encode_tuple, PolyBound};

use super::membership::{DisjointPair, Membership, PairReduction, Quantifier};

#[derive(Clone, Debug)]
pub struct PairEntry {
    pub name: String,
    pub pair: DisjointPair,
    /// Hex SHA-256 token standing in for a disjointness proof.
    pub certificate: String,
}

impl PairEntry {
    fn budget(&self, n: usize) -> usize {
        self.pair.first.bound.eval(n).max(self.pair.second.bound.eval(n))
    }

    fn member(&self, i: usize) -> &Membership {
        if i == 0 {
            &self.pair.first
        } else {
            &self.pair.second
        }
    }
}

#[derive(Clone, Debug)]
pub struct PairRegistry {
    key: Vec<u8>,
    entries: BTreeMap<String, PairEntry>,
}

impl PairRegistry {
    pub fn new(key: &[u8]) -> Self {
        PairRegistry { key: key.to_vec(), entries: BTreeMap::new() }
    }

    pub fn certify(&self, name: &str, pair: &DisjointPair) -> String {
        let mut h = Sha256::new();
        let parts = [
            name.to_string(),
            pair.first.bound.to_string(),
            pair.first.relation.name(),
            pair.second.bound.to_string(),
            pair.second.relation.name(),
        ];
        h.update((self.key.len() as u64).to_be_bytes());
        h.update(&self.key);
        for p in &parts {
            h.update((p.len() as u64).to_be_bytes());
            h.update(p.as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Admits a pair of `∃`-definitions whose certificate validates.
    pub fn admit(&mut self, name: &str, pair: DisjointPair, certificate: &str) -> Result<(), TfnpError> {
        if self.entries.contains_key(name) {
            return Err(TfnpError::Registry(format!("{name} is already registered")));
        }
        if pair.first.quantifier != Quantifier::Exists || pair.second.quantifier != Quantifier::Exists {
            return Err(TfnpError::Registry(format!("{name} is not a pair of NP definitions")));
        }
        if certificate != self.certify(name, &pair) {
            return Err(TfnpError::Registry(format!("certificate for {name} does not validate")));
        }
        let entry = PairEntry { name: name.to_string(), pair, certificate: certificate.to_string() };
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }

    pub fn register(&mut self, name: &str, pair: DisjointPair) -> Result<(), TfnpError> {
        let token = self.certify(name, &pair);
        self.admit(name, pair, &token)
    }

    pub fn get(&self, name: &str) -> Option<&PairEntry> {
        self.entries.get(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = &PairEntry> {
        self.entries.values()
    }

    pub fn embed(&self, name: &str, x: &BitString) -> Result<BitString, TfnpError> {
        let e = self.get(name).ok_or_else(|| TfnpError::Registry(format!("{name} is not registered")))?;
        Ok(embed_with(e, x))
    }

    pub fn decode_instance(&self, u: &BitString) -> Option<(&PairEntry, BitString)> {
        let parts = decode_tuple(u, 4)?;
        let name = String::from_utf8(parts[1].to_bytes()?).ok()?;
        let e = self.get(&name)?;
        let x = parts[0].clone();
        let valid = parts[2] == BitString::from_bytes(e.certificate.as_bytes())
            && parts[3] == BitString::ones(e.budget(x.len()));
        valid.then_some((e, x))
    }
}

fn embed_with(e: &PairEntry, x: &BitString) -> BitString {
    let name = BitString::from_bytes(e.name.as_bytes());
    let cert = BitString::from_bytes(e.certificate.as_bytes());
    encode_tuple(&[x, &name, &cert, &BitString::ones(e.budget(x.len()))])
}

fn universal_member(registry: &Arc<PairRegistry>, i: usize) -> Membership {
    let reg = registry.clone();
    let relation = NativeRelation::new(format!("universal{i}"), 2, move |v| match reg.decode_instance(v[0]) {
        Some((e, x)) => {
            let m = e.member(i);
            Ok(v[1].len() <= m.bound.eval(x.len()) && m.relation.holds(&[&x, v[1]])?)
        }
        None => Ok(false),
    });
    let reg = registry.clone();
    let candidates = Arc::new(move |u: &BitString| {
        let Some((e, x)) = reg.decode_instance(u) else { return Ok(Some(Vec::new())) };
        let m = e.member(i);
        let listed = match &m.candidates {
            Some(c) => c(&x)?,
            None => None,
        };
        match listed {
            Some(v) => Ok(Some(v)),
            None => {
                let bound = m.bound.eval(x.len());
                if bound >= 40 || (2u64 << bound) > DEFAULT_SWEEP_LIMIT {
                    return Err(TfnpError::SearchSpaceTooLarge { problem: m.name.clone(), bound });
                }
                Ok(Some(BitString::all_up_to(bound).collect()))
            }
        }
    });
    // a witness is no longer than the unary budget inside the instance
    Membership::new(format!("U{i}"), Quantifier::Exists, PolyBound::linear(), Arc::new(relation))
        .with_candidates(candidates)
}

pub fn universal_disjoint_np_pair(registry: Arc<PairRegistry>) -> DisjointPair {
    DisjointPair::new("universal", universal_member(&registry, 0), universal_member(&registry, 1))
}

pub fn embed_pair_reduction(registry: Arc<PairRegistry>, name: &str) -> Result<PairReduction, TfnpError> {
    let e = registry.get(name).ok_or_else(|| TfnpError::Registry(format!("{name} is not registered")))?.clone();
    let f = NativeTransformer::new(format!("embed[{name}]"), 1, move |v| Ok(embed_with(&e, v[0])));
    Ok(PairReduction::new(format!("embed[{name}]"), Arc::new(f)))
}

/// Even and odd numbers; the witness is the empty string.
pub fn even_odd_pair() -> DisjointPair {
    let member = |odd: bool| {
        let rel = NativeRelation::new(if odd { "odd" } else { "even" }, 2, move |v| {
            Ok(v[1].is_empty() && v[0].bits().last().copied().unwrap_or(false) == odd)
        });
        Membership::new(if odd { "ODD" } else { "EVEN" }, Quantifier::Exists, PolyBound::constant(0), Arc::new(rel))
    };
    DisjointPair::new("even-odd", member(false), member(true))
}

/// Composite numbers, witnessed by a nontrivial divisor, and primes,
/// witnessed by their trial-division certificate.
pub fn composite_prime_pair() -> DisjointPair {
    use super::npmv::{isqrt, trial_division_certificate};
    let composite = NativeRelation::new("has-divisor", 2, |v| {
        let (Some(n), Some(d)) = (v[0].value(), v[1].canonical_value()) else { return Ok(false) };
        Ok(1 < d && d < n && n % d == 0)
    });
    let prime = NativeRelation::new("trial-division", 2, |v| {
        let Some(n) = v[0].value() else { return Ok(false) };
        let z = v[1];
        Ok(n >= 2
            && z.len() as u64 == isqrt(n).saturating_sub(1)
            && (2..=isqrt(n)).all(|d| z.bits()[(d - 2) as usize] && n % d != 0))
    });
    let first = Membership::new("COMPOSITE", Quantifier::Exists, PolyBound::linear(), Arc::new(composite))
        .with_candidates(Arc::new(|x: &BitString| {
            let n = x.value().unwrap_or(0);
            Ok(Some((2..n.min(1 << 20)).filter(|d| n % d == 0).map(BitString::from_num).collect()))
        }));
    let second = Membership::new("PRIME", Quantifier::Exists, PolyBound::new(1, 2, 0), Arc::new(prime))
        .with_candidates(Arc::new(|x: &BitString| Ok(Some(vec![trial_division_certificate(x.value().unwrap_or(0))]))));
    DisjointPair::new("composite-prime", first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{check_pair_reduction, compose_pair_reductions, PairClass};

    fn registry() -> Arc<PairRegistry> {
        let mut r = PairRegistry::new(b"pairs");
        r.register("EVEN-ODD", even_odd_pair()).unwrap();
        r.register("COMPOSITE-PRIME", composite_prime_pair()).unwrap();
        Arc::new(r)
    }

    fn nums(n: u64) -> Vec<BitString> {
        (0..n).map(BitString::from_num).collect()
    }

    #[test]
    fn registered_pairs_reduce() {
        let reg = registry();
        let u = universal_disjoint_np_pair(reg.clone());
        for e in reg.entries() {
            let red = embed_pair_reduction(reg.clone(), &e.name).unwrap();
            let report = check_pair_reduction(&red, &e.pair, &u, &nums(256));
            assert!(report.pass, "{}: {:?}", e.name, report.first_failure());
        }
        let cp = composite_prime_pair();
        assert_eq!(cp.classify(&BitString::from_num(91)).unwrap(), PairClass::First);
        assert_eq!(cp.classify(&BitString::from_num(97)).unwrap(), PairClass::Second);
        assert_eq!(cp.classify(&BitString::from_num(1)).unwrap(), PairClass::Neither);
    }

    #[test]
    fn invalid_tuples_are_in_neither() {
        let reg = registry();
        let u = universal_disjoint_np_pair(reg.clone());
        let e = reg.get("EVEN-ODD").unwrap();
        let x = BitString::from_num(6);
        let forged = encode_tuple(&[
            &x,
            &BitString::from_bytes(b"EVEN-ODD"),
            &BitString::from_bytes(&[b'0'; 64]),
            &BitString::ones(e.budget(x.len())),
        ]);
        assert_eq!(u.classify(&forged).unwrap(), PairClass::Neither);
        assert_eq!(u.classify(&reg.embed("EVEN-ODD", &x).unwrap()).unwrap(), PairClass::First);
        let mut r = PairRegistry::new(b"pairs");
        assert!(r.admit("EVEN-ODD", even_odd_pair(), &"0".repeat(64)).is_err());
    }

    #[test]
    fn composes_with_pair_reductions() {
        let reg = registry();
        let spread = PairReduction::new(
            "spread",
            Arc::new(NativeTransformer::new("spread", 1, |v| {
                let n = v[0].value().unwrap_or(0);
                Ok(BitString::from_num(if n % 2 == 0 { n } else { 2 * n + 1 }))
            })),
        );
        let red = compose_pair_reductions(&spread, &embed_pair_reduction(reg.clone(), "EVEN-ODD").unwrap());
        let report = check_pair_reduction(&red, &even_odd_pair(), &universal_disjoint_np_pair(reg), &nums(128));
        assert!(report.pass);
    }
}
