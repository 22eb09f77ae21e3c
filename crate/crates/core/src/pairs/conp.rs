//! The canonical disjoint coNP pair of a padded search problem, the search
//! problem of a coNP pair, and the lifting of many-one reductions to pair
//! reductions.
//!
//! An instance of the canonical pair of `P̂` is the pair code of
//! `(x, C)` with `C` as circuit text. `(x, C) ∈ A_i` iff every witness `y`
//! of `x` has `C(y) = i`. A circuit whose input width is not `p̂(|x|)`, or
//! that has oracle gates or more than one output, makes the instance
//! malformed, and malformed instances lie in neither member.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitString;
use crate::prop::{compose_circuits, BoolCircuit, CircuitBuilder};
use crate::tfnp::{
    all_witnesses, embed_reduction, normalize_padding, pigeon_bound, pigeon_problem, universal_problem,
    verify_solution, ManyOneReduction, NativeRelation, NativeTransformer, PigeonMap, Registry, TfnpError,
    TfnpProblem, DEFAULT_SWEEP_LIMIT,
};
use crate::vm::{compile_function, decode_tuple, encode_tuple, library, InputSpec, OutputMode, PolyBound};

use super::membership::{DisjointPair, Membership, PairClass, PairReduction, Quantifier};

pub fn conp_instance(x: &BitString, c: &BoolCircuit) -> BitString {
    encode_tuple(&[x, &BitString::from_bytes(c.to_text().as_bytes())])
}

/// `x` and the pruned circuit; `None` when the encoding does not parse.
pub fn decode_conp_instance(u: &BitString) -> Option<(BitString, BoolCircuit)> {
    let parts = decode_tuple(u, 2)?;
    let text = String::from_utf8(parts[1].to_bytes()?).ok()?;
    let c = BoolCircuit::from_text(&text).ok()?;
    Some((parts[0].clone(), c.prune()))
}

type Decoded = Option<Arc<(BitString, BoolCircuit)>>;

thread_local! {
    // membership checks decode the same instance once per candidate
    static LAST_DECODED: RefCell<Option<(BitString, Decoded)>> = const { RefCell::new(None) };
}

fn decode_cached(u: &BitString) -> Decoded {
    LAST_DECODED.with(|cell| {
        if let Some((key, value)) = cell.borrow().as_ref() {
            if key == u {
                return value.clone();
            }
        }
        let value = decode_conp_instance(u).map(Arc::new);
        *cell.borrow_mut() = Some((u.clone(), value.clone()));
        value
    })
}

fn well_formed(p_hat: &TfnpProblem, x: &BitString, c: &BoolCircuit) -> bool {
    c.input_width == p_hat.witness_bound(x) && c.output_width() == 1 && !c.has_oracle()
}

fn decode_well_formed(p_hat: &TfnpProblem, u: &BitString) -> Decoded {
    decode_cached(u).filter(|d| well_formed(p_hat, &d.0, &d.1))
}

/// `(A_0, A_1)` for a problem whose witnesses all have length `p̂(|x|)`.
pub fn canonical_conp_pair(p_hat: &TfnpProblem) -> DisjointPair {
    let member = |i: bool| {
        let p = p_hat.clone();
        let beta = NativeRelation::new(format!("beta{}[{}]", u8::from(i), p_hat.name), 2, move |v| {
            let Some(d) = decode_well_formed(&p, v[0]) else { return Ok(false) };
            let (x, c) = (&d.0, &d.1);
            let y = v[1];
            if y.len() != c.input_width || !verify_solution(&p, x, y)? {
                return Ok(true);
            }
            Ok(c.eval(y.bits())?[0] == i)
        });
        let p = p_hat.clone();
        let candidates = Arc::new(move |u: &BitString| match decode_well_formed(&p, u) {
            Some(d) => Ok(Some(all_witnesses(&p, &d.0)?)),
            // ε refutes membership of a malformed instance
            None => Ok(Some(vec![BitString::new()])),
        });
        Membership::new(format!("A{}[{}]", u8::from(i), p_hat.name), Quantifier::Forall, p_hat.bound, Arc::new(beta))
            .with_candidates(candidates)
    };
    DisjointPair::new(format!("conp[{}]", p_hat.name), member(false), member(true))
}

/// One-input circuit of width `width` reading bit 4, where the pair code
/// of a one-bit first component stores that bit; negated when `negate`.
pub fn selector_circuit(width: usize, negate: bool) -> BoolCircuit {
    let mut b = CircuitBuilder::new(width, usize::MAX);
    let out = if width > 4 {
        let w = b.input(4);
        if negate {
            b.not(w)
        } else {
            w
        }
    } else {
        b.constant(false)
    };
    b.finish(vec![out]).expect("uncapped builder")
}

/// `x ↦ (x, C)` with `C(i, y) = 1 - i` on the padded witnesses of `p_hat`,
/// or `C(i, y) = i` when `negate` is false.
pub fn counterexample_reduction(p_hat: &TfnpProblem, negate: bool) -> PairReduction {
    let p = p_hat.clone();
    let name = format!("counterexample[{}]{}", p_hat.name, if negate { "" } else { "-tampered" });
    let f = NativeTransformer::new(name.clone(), 1, move |v| {
        Ok(conp_instance(v[0], &selector_circuit(p.witness_bound(v[0]), negate)))
    });
    PairReduction::new(name, Arc::new(f))
}

fn strings_up_to(name: &str, bound: usize) -> Result<Vec<BitString>, TfnpError> {
    if bound >= 40 || (2u64 << bound) > DEFAULT_SWEEP_LIMIT {
        return Err(TfnpError::SearchSpaceTooLarge { problem: name.to_string(), bound });
    }
    Ok(BitString::all_up_to(bound).collect())
}

/// The counterexample search problem of a pair of `∀`-definitions,
/// `R(x, (i, y)) = |y| ≤ r_i(|x|) ∧ ¬β_i(x, y)`, padded, together with the
/// reduction into its canonical pair. Fails with a totality violation when
/// an instance of `domain` lies in both members.
pub fn conp_pair_to_canonical(
    pair: &DisjointPair,
    domain: &[BitString],
) -> Result<(TfnpProblem, PairReduction), TfnpError> {
    let members = [pair.first.clone(), pair.second.clone()];
    if members.iter().any(|m| m.quantifier != Quantifier::Forall) {
        return Err(TfnpError::Malformed(format!("{} is not a pair of universal definitions", pair.name)));
    }
    let name = format!("CE[{}]", pair.name);
    for x in domain {
        if pair.classify(x)? == PairClass::Both {
            return Err(TfnpError::TotalityViolation { problem: name, instance: x.to_hex() });
        }
    }
    let ms = members.clone();
    let relation = NativeRelation::new(name.clone(), 2, move |v| {
        let Some(parts) = decode_tuple(v[1], 2) else { return Ok(false) };
        let i = match parts[0].bits() {
            [b] => usize::from(*b),
            _ => return Ok(false),
        };
        let y = &parts[1];
        Ok(y.len() <= ms[i].bound.eval(v[0].len()) && !ms[i].relation.holds(&[v[0], y])?)
    });
    let ms = members.clone();
    let problem_name = name.clone();
    let candidates = Arc::new(move |x: &BitString| {
        let mut out = Vec::new();
        for (i, m) in ms.iter().enumerate() {
            let listed = match &m.candidates {
                Some(c) => c(x)?,
                None => None,
            };
            let ys = match listed {
                Some(v) => v,
                None => strings_up_to(&problem_name, m.bound.eval(x.len()))?,
            };
            let tag = BitString::from_bits(vec![i == 1]);
            out.extend(ys.iter().map(|y| encode_tuple(&[&tag, y])));
        }
        Ok(Some(out))
    });
    let [r0, r1] = [members[0].bound, members[1].bound];
    let bound = PolyBound::new(3, 0, 0).times(&r0.plus(&r1)).plus(&PolyBound::constant(12));
    let raw = TfnpProblem::new(name, bound, Arc::new(relation)).with_candidates(candidates);
    let p_hat = normalize_padding(&raw);
    let red = counterexample_reduction(&p_hat, true);
    Ok((p_hat, red))
}

/// `h(x, C) = (f(x), D_x)` with `D_x(z) = C(g(x, z))`; malformed inputs map
/// to `0`. The back-map `g` must be bytecode so it can be compiled.
pub fn lift_tfnp_reduction_to_conp_pairs(
    red: &ManyOneReduction,
    p_hat: &TfnpProblem,
    q_hat: &TfnpProblem,
    gate_cap: usize,
) -> Result<PairReduction, TfnpError> {
    let g = red
        .g
        .program()
        .cloned()
        .ok_or_else(|| TfnpError::Malformed(format!("back-map of {} is not bytecode", red.name)))?;
    let (red, p, q) = (red.clone(), p_hat.clone(), q_hat.clone());
    let cache: Arc<Mutex<HashMap<BitString, Arc<BoolCircuit>>>> = Arc::default();
    let name = format!("lift[{}]", red.name);
    let h = NativeTransformer::new(name.clone(), 1, move |v| {
        let Some(d) = decode_well_formed(&p, v[0]) else { return Ok(BitString::from("0")) };
        let (x, c) = (&d.0, &d.1);
        let fx = red.map_instance(x)?;
        let cached = cache.lock().expect("cache lock").get(x).cloned();
        let inner = match cached {
            Some(inner) => inner,
            None => {
                let specs = [InputSpec::Fixed(x.clone()), InputSpec::Free(q.witness_bound(&fx))];
                let circuit = compile_function(&g, &specs, OutputMode::Exact(p.witness_bound(x)), gate_cap)?;
                let inner = Arc::new(circuit.prune());
                cache.lock().expect("cache lock").insert(x.clone(), inner.clone());
                inner
            }
        };
        Ok(conp_instance(&fx, &compose_circuits(c, &inner)?))
    });
    Ok(PairReduction::new(name, Arc::new(h)))
}

/// `P̂` for PIGEON with map `map`, `Û` over a registry holding `P̂`, and
/// the reduction `P̂ → Û` whose back-map projects the first component.
pub fn pigeon_universal_setup(map: PigeonMap) -> Result<(TfnpProblem, TfnpProblem, ManyOneReduction), TfnpError> {
    let p_hat = normalize_padding(&pigeon_problem(map));
    let mut reg = Registry::new(b"conp lifting");
    reg.register("PIGEON^", p_hat.clone())?;
    let reg = Arc::new(reg);
    let u_hat = normalize_padding(&universal_problem(reg.clone()));
    let embed = embed_reduction(reg, "PIGEON^")?;
    let red = ManyOneReduction::new("PIGEON^->U^", embed.f, Arc::new(library::project_first(pigeon_bound())));
    Ok((p_hat, u_hat, red))
}

/// Constant circuits followed by `count` seeded random circuits on `width`
/// inputs, each reading at most `max_support` of them.
pub fn circuit_battery(width: usize, max_support: usize, count: usize, seed: u64) -> Vec<BoolCircuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ width as u64);
    let mut out = Vec::with_capacity(count + 2);
    for v in [false, true] {
        let mut b = CircuitBuilder::new(width, usize::MAX);
        let w = b.constant(v);
        out.push(b.finish(vec![w]).expect("uncapped builder"));
    }
    for _ in 0..count {
        let k = rng.gen_range(1..=max_support.min(width).max(1)).min(width);
        let mut wires: Vec<usize> = (0..width).collect();
        for i in 0..k {
            let j = rng.gen_range(i..width);
            wires.swap(i, j);
        }
        let mut b = CircuitBuilder::new(width, usize::MAX);
        let ins: Vec<_> = wires[..k].iter().map(|&i| b.input(i)).collect();
        // disjunctive normal form of a random truth table
        let mut terms = Vec::new();
        for row in 0..1usize << k {
            if rng.gen_bool(0.5) {
                let lits: Vec<_> =
                    ins.iter().enumerate().map(|(j, &w)| if row >> j & 1 == 1 { w } else { b.not(w) }).collect();
                terms.push(b.and_all(&lits));
            }
        }
        let out_wire = b.or_all(&terms);
        out.push(b.finish(vec![out_wire]).expect("uncapped builder"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{check_pair_reduction, PairClass};
    use crate::tfnp::{factoring_problem, identity_reduction, succ_problem};

    fn nums(range: std::ops::Range<u64>) -> Vec<BitString> {
        range.map(BitString::from_num).collect()
    }

    #[test]
    fn trichotomy_on_factoring() {
        let p_hat = normalize_padding(&factoring_problem());
        let pair = canonical_conp_pair(&p_hat);
        let x = BitString::from_num(12);
        let width = p_hat.witness_bound(&x);
        let zero = &circuit_battery(width, 3, 0, 0)[0];
        assert_eq!(pair.classify(&conp_instance(&x, zero)).unwrap(), PairClass::First);
        // witnesses of 12 are 2, 3, 4 and 6; bit 1 of the padded witness
        // separates 2 = 10 and 3 = 11
        let mut b = CircuitBuilder::new(width, 100);
        let w = b.input(1);
        let split = b.finish(vec![w]).unwrap();
        assert_eq!(pair.classify(&conp_instance(&x, &split)).unwrap(), PairClass::Neither);
        // SUCC has the unique witness 6 on 5
        let succ_hat = normalize_padding(&succ_problem());
        let succ_pair = canonical_conp_pair(&succ_hat);
        let five = BitString::from_num(5);
        let mut b = CircuitBuilder::new(succ_hat.witness_bound(&five), 100);
        let w = b.input(2);
        let low_bit = b.finish(vec![w]).unwrap();
        assert_eq!(succ_pair.classify(&conp_instance(&five, &low_bit)).unwrap(), PairClass::First);
        let w = circuit_battery(succ_hat.witness_bound(&five), 1, 0, 0);
        assert_eq!(succ_pair.classify(&conp_instance(&five, &w[1])).unwrap(), PairClass::Second);
        let narrow = &circuit_battery(width - 1, 3, 0, 0)[0];
        assert_eq!(pair.classify(&conp_instance(&x, narrow)).unwrap(), PairClass::Neither);
    }

    #[test]
    fn parity_pair_through_counterexamples() {
        let pair = crate::pairs::membership::tests::parity_pair();
        let domain = nums(0..256);
        let (p_hat, red) = conp_pair_to_canonical(&pair, &domain).unwrap();
        let canon = canonical_conp_pair(&p_hat);
        let report = check_pair_reduction(&red, &pair, &canon, &domain);
        assert!(report.pass, "{:?}", report.first_failure());
        let tampered = counterexample_reduction(&p_hat, false);
        let bad = check_pair_reduction(&tampered, &pair, &canon, &domain[..4]);
        assert!(!bad.pass);
    }

    #[test]
    fn overlapping_pair_is_reported() {
        let pair = crate::pairs::membership::tests::parity_pair();
        let both = DisjointPair::new("overlap", pair.first.clone(), pair.first.clone());
        let err = conp_pair_to_canonical(&both, &nums(0..2)).unwrap_err();
        assert!(matches!(err, TfnpError::TotalityViolation { .. }));
    }

    #[test]
    fn identity_lifts() {
        let p_hat = normalize_padding(&factoring_problem());
        let red = identity_reduction();
        let lifted = lift_tfnp_reduction_to_conp_pairs(&red, &p_hat, &p_hat, 1 << 20).unwrap();
        let pair = canonical_conp_pair(&p_hat);
        let mut domain = Vec::new();
        for n in 0..16u64 {
            let x = BitString::from_num(n);
            for c in circuit_battery(p_hat.witness_bound(&x), 3, 4, 0) {
                domain.push(conp_instance(&x, &c));
            }
        }
        domain.push("0110".into());
        let report = check_pair_reduction(&lifted, &pair, &pair, &domain);
        assert!(report.pass, "{:?}", report.first_failure());
        assert_eq!(lifted.apply(&"0110".into()).unwrap(), BitString::from("0"));
    }
}

