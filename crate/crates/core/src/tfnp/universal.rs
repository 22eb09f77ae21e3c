//! A registry of search problems admitted with certificate tokens, and the
//! universal problem `U` that dispatches on registered instances.
//!
//! A `U`-instance is the pair code of `(x, name, certificate, 1^{p(|x|)})`,
//! where `p` is the registered problem's witness bound. The unary budget
//! makes `|x|`, and every witness of `x`, polynomially smaller than the
//! instance. A witness of a valid instance is `(y, ε)` with `y` a witness of
//! `x` for the named problem. Every other instance accepts every witness.

use std::collections::BTreeMap;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::bits::BitString;
use crate::vm::{decode_tuple, encode_tuple, PolyBound};

use super::problem::{all_witnesses, verify_solution, NativeRelation, TfnpProblem};
use super::reduction::{ManyOneReduction, NativeTransformer};
use super::TfnpError;

#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub problem: TfnpProblem,
    /// Hex SHA-256 token standing in for a totality proof.
    pub certificate: String,
    /// The witness bound the token was issued for.
    pub budget: PolyBound,
}

#[derive(Clone, Debug)]
pub struct Registry {
    key: Vec<u8>,
    entries: BTreeMap<String, RegistryEntry>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Registry {
    pub fn new(key: &[u8]) -> Self {
        Registry { key: key.to_vec(), entries: BTreeMap::new() }
    }

    /// The token the validator expects for `name` with `problem`'s bound
    /// and relation.
    pub fn certify(&self, name: &str, problem: &TfnpProblem) -> String {
        let mut h = Sha256::new();
        for part in [&self.key[..], name.as_bytes(), problem.bound.to_string().as_bytes(), problem.relation.name().as_bytes()] {
            h.update((part.len() as u64).to_be_bytes());
            h.update(part);
        }
        hex(&h.finalize())
    }

    /// Admits an entry whose certificate validates.
    pub fn admit(&mut self, name: &str, problem: TfnpProblem, certificate: &str) -> Result<(), TfnpError> {
        if self.entries.contains_key(name) {
            return Err(TfnpError::Registry(format!("{name} is already registered")));
        }
        if certificate != self.certify(name, &problem) {
            return Err(TfnpError::Registry(format!("certificate for {name} does not validate")));
        }
        let budget = problem.bound;
        let entry = RegistryEntry { name: name.to_string(), problem, certificate: certificate.to_string(), budget };
        self.entries.insert(name.to_string(), entry);
        Ok(())
    }

    /// Certifies and admits.
    pub fn register(&mut self, name: &str, problem: TfnpProblem) -> Result<(), TfnpError> {
        let token = self.certify(name, &problem);
        self.admit(name, problem, &token)
    }

    pub fn get(&self, name: &str) -> Option<&RegistryEntry> {
        self.entries.get(name)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RegistryEntry> {
        self.entries.values()
    }

    pub fn embed(&self, name: &str, x: &BitString) -> Result<BitString, TfnpError> {
        let e = self.get(name).ok_or_else(|| TfnpError::Registry(format!("{name} is not registered")))?;
        Ok(embed_with(e, x))
    }

    /// The entry and `x` of a valid instance.
    pub fn decode_instance(&self, u: &BitString) -> Option<(&RegistryEntry, BitString)> {
        let parts = decode_tuple(u, 4)?;
        let name = String::from_utf8(parts[1].to_bytes()?).ok()?;
        let e = self.get(&name)?;
        let x = parts[0].clone();
        let valid = parts[2] == BitString::from_bytes(e.certificate.as_bytes())
            && parts[3] == BitString::ones(e.budget.eval(x.len()));
        valid.then_some((e, x))
    }
}

fn embed_with(e: &RegistryEntry, x: &BitString) -> BitString {
    let name = BitString::from_bytes(e.name.as_bytes());
    let cert = BitString::from_bytes(e.certificate.as_bytes());
    encode_tuple(&[x, &name, &cert, &BitString::ones(e.budget.eval(x.len()))])
}

/// `(y, ε)`.
pub fn universal_witness(y: &BitString) -> BitString {
    encode_tuple(&[y, &BitString::new()])
}

/// Witness bound of `U`: `|(y, ε)| <= 3|y| + 8` and `|y|` is below the
/// instance length.
pub fn universal_bound() -> PolyBound {
    PolyBound::new(3, 1, 8)
}

pub fn universal_problem(registry: Arc<Registry>) -> TfnpProblem {
    let reg = registry.clone();
    let relation = NativeRelation::new("universal", 2, move |v| match reg.decode_instance(v[0]) {
        Some((e, x)) => match decode_tuple(v[1], 2).as_deref() {
            Some([y, rest]) if rest.is_empty() => verify_solution(&e.problem, &x, y),
            _ => Ok(false),
        },
        None => Ok(true),
    });
    let reg = registry;
    let candidates = Arc::new(move |u: &BitString| match reg.decode_instance(u) {
        Some((e, x)) => Ok(Some(all_witnesses(&e.problem, &x)?.iter().map(universal_witness).collect())),
        None => Ok(None),
    });
    TfnpProblem::new("U", universal_bound(), Arc::new(relation)).with_candidates(candidates)
}

/// The registered problem `name` to `U`: `f` embeds, `g` takes the first
/// component of the pair.
pub fn embed_reduction(registry: Arc<Registry>, name: &str) -> Result<ManyOneReduction, TfnpError> {
    let e = registry.get(name).ok_or_else(|| TfnpError::Registry(format!("{name} is not registered")))?.clone();
    let f = NativeTransformer::new(format!("embed[{name}]"), 1, move |v| Ok(embed_with(&e, v[0])));
    let g = NativeTransformer::new("first", 2, |v| {
        Ok(decode_tuple(v[1], 2).map(|mut p| p.swap_remove(0)).unwrap_or_default())
    });
    Ok(ManyOneReduction::new(format!("embed[{name}]"), Arc::new(f), Arc::new(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tfnp::{check_many_one, factoring_problem, pigeon_problem, solve_brute, PigeonMap};

    fn registry() -> Arc<Registry> {
        let mut r = Registry::new(b"test key");
        r.register("FACTORING", factoring_problem()).unwrap();
        r.register("PIGEON", pigeon_problem(PigeonMap::Mod(2))).unwrap();
        Arc::new(r)
    }

    #[test]
    fn tokens_validate() {
        let mut r = Registry::new(b"k");
        let p = factoring_problem();
        let mut token = r.certify("FACTORING", &p);
        token.replace_range(0..1, if token.starts_with('0') { "1" } else { "0" });
        assert!(r.admit("FACTORING", p.clone(), &token).is_err());
        let good = r.certify("FACTORING", &p);
        assert!(r.admit("FACTORING", p.clone(), &good).is_ok());
        assert!(r.admit("FACTORING", p, &good).is_err());
    }

    #[test]
    fn dispatch_and_fallback() {
        let reg = registry();
        let u = universal_problem(reg.clone());
        let inst = reg.embed("FACTORING", &BitString::from_num(15)).unwrap();
        let w = solve_brute(&u, &inst).unwrap();
        let y = decode_tuple(&w, 2).unwrap().swap_remove(0);
        assert!(verify_solution(&factoring_problem(), &BitString::from_num(15), &y).unwrap());
        assert!(w.len() <= u.witness_bound(&inst));
        let e = reg.get("FACTORING").unwrap();
        let unknown = encode_tuple(&[
            &BitString::from_num(15),
            &BitString::from_bytes(b"NOPE"),
            &BitString::from_bytes(e.certificate.as_bytes()),
            &BitString::ones(4),
        ]);
        assert_eq!(solve_brute(&u, &unknown).unwrap(), BitString::new());
        assert!(verify_solution(&u, &unknown, &"101".into()).unwrap());
    }

    #[test]
    fn embeds_pass() {
        let reg = registry();
        let u = universal_problem(reg.clone());
        let domain: Vec<BitString> = (0..=24).map(BitString::from_num).collect();
        for e in reg.entries() {
            let red = embed_reduction(reg.clone(), &e.name).unwrap();
            assert!(check_many_one(&red, &e.problem, &u, &domain).pass, "{}", e.name);
        }
    }
}
