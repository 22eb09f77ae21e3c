//! Herbrand consistency search `HCS(Φ)` for a fixed universal sentence `Φ`,
//! and a many-one reduction from PIGEON to `HCS(Φ_PHP)`.
//!
//! Instance encoding, for a signature with `m` function symbols: a term is
//! written in preorder, each symbol as its index in `w = max(1, bits(m-1))`
//! bits MSB-first. A tuple list is `1 t₁ … t_k` per tuple, then a final `0`.
//! Anything that does not decode exactly is the empty tuple list.
//!
//! A witness is an assignment to the atom table of the Herbrand expansion,
//! one bit per atom in first-occurrence order.

use std::sync::Arc;

use crate::bits::BitString;
use crate::logic::{herbrand_expand, GroundConjunction, Matrix, Signature, Term, UniversalSentence};
use crate::prop::{all_sat, sat_solve, tseitin, tseitin_definitions, Cnf};
use crate::vm::PolyBound;

use super::problem::{NativeRelation, TfnpProblem};
use super::problems::{PigeonMap, PigeonWitness};
use super::reduction::{ManyOneReduction, NativeTransformer};
use super::TfnpError;

/// Terms nested deeper than this make an instance malformed.
pub const MAX_TERM_DEPTH: usize = 4096;

/// Largest number of models listed per instance.
pub const HCS_LIST_LIMIT: usize = 1 << 16;

fn symbol_width(sig: &Signature) -> usize {
    let m = sig.functions().len();
    (usize::BITS - (m.saturating_sub(1)).leading_zeros()).max(1) as usize
}

fn encode_term(sig: &Signature, w: usize, t: &Term, out: &mut BitString) -> Result<(), TfnpError> {
    match t {
        Term::Var { var } => Err(TfnpError::Malformed(format!("variable {var} in an instance term"))),
        Term::App { head, args } => {
            let i = sig.function_index(head).ok_or_else(|| TfnpError::Malformed(format!("unknown symbol {head}")))?;
            out.extend_from(&BitString::from_num_width(i as u64, w));
            args.iter().try_for_each(|a| encode_term(sig, w, a, out))
        }
    }
}

pub fn encode_hcs_instance(sig: &Signature, tuples: &[Vec<Term>]) -> Result<BitString, TfnpError> {
    let w = symbol_width(sig);
    let mut out = BitString::new();
    for tuple in tuples {
        out.push(true);
        for t in tuple {
            encode_term(sig, w, t, &mut out)?;
        }
    }
    out.push(false);
    Ok(out)
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn bit(&mut self) -> Option<bool> {
        let b = *self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    fn term(&mut self, sig: &Signature, w: usize, depth: usize) -> Option<Term> {
        if depth > MAX_TERM_DEPTH {
            return None;
        }
        let mut idx = 0usize;
        for _ in 0..w {
            idx = idx << 1 | usize::from(self.bit()?);
        }
        let sym = sig.functions().get(idx)?;
        let args = (0..sym.arity).map(|_| self.term(sig, w, depth + 1)).collect::<Option<Vec<_>>>()?;
        Some(Term::app(&sym.name, args))
    }
}

/// The tuple list of an instance, or `None` when it is malformed.
pub fn decode_hcs_instance(sig: &Signature, k: usize, x: &BitString) -> Option<Vec<Vec<Term>>> {
    let w = symbol_width(sig);
    let mut r = Reader { bits: x.bits(), pos: 0 };
    let mut tuples = Vec::new();
    while r.bit()? {
        tuples.push((0..k).map(|_| r.term(sig, w, 0)).collect::<Option<Vec<_>>>()?);
    }
    (r.pos == x.len()).then_some(tuples)
}

/// The Herbrand expansion an instance stands for; malformed instances give
/// the empty conjunction.
pub fn hcs_expansion(phi: &UniversalSentence, x: &BitString) -> GroundConjunction {
    let tuples = decode_hcs_instance(&phi.signature, phi.arity(), x).unwrap_or_default();
    herbrand_expand(phi, &tuples).expect("decoded tuples are ground and well-sorted")
}

fn atom_occurrences(m: &Matrix) -> u64 {
    m.atoms().len() as u64
}

/// Models of an expansion, projected on its atoms, in atom-table order.
pub fn expansion_models(g: &GroundConjunction, limit: usize) -> Vec<Vec<bool>> {
    let n = g.num_atoms() as u32;
    let cnf = tseitin(&g.to_prop());
    all_sat(&cnf, n, limit).into_iter().map(|a| a.values().to_vec()).collect()
}

/// The expansion as CNF: atom `i` is variable `i + 1` and the definitional
/// variables follow the atoms.
pub fn expansion_cnf(g: &GroundConjunction) -> Cnf {
    let mut e = tseitin_definitions(&g.to_prop(), g.num_atoms() as u32);
    e.cnf.add_clause(vec![e.root]);
    e.cnf
}

/// A solver model of the expansion restricted to its atoms. Callers check it
/// with [`GroundConjunction::eval`]; the solver is not trusted.
pub fn solve_expansion(g: &GroundConjunction) -> Option<Vec<bool>> {
    sat_solve(&expansion_cnf(g)).map(|a| a.values()[..g.num_atoms()].to_vec())
}

pub fn hcs_problem(phi: &UniversalSentence) -> TfnpProblem {
    let name = format!("HCS[{}]", phi.matrix);
    let sentence = phi.clone();
    let relation = NativeRelation::new(name.clone(), 2, move |v| {
        let g = hcs_expansion(&sentence, v[0]);
        Ok(v[1].len() == g.num_atoms() && g.eval(v[1].bits()))
    });
    let sentence = phi.clone();
    let problem_name = name.clone();
    let candidates = Arc::new(move |x: &BitString| {
        let g = hcs_expansion(&sentence, x);
        let models = expansion_models(&g, HCS_LIST_LIMIT);
        if models.len() >= HCS_LIST_LIMIT {
            return Err(TfnpError::SearchSpaceTooLarge { problem: problem_name.clone(), bound: g.num_atoms() });
        }
        Ok(Some(models.into_iter().map(BitString::from_bits).collect()))
    });
    // each tuple costs at least one instance bit and adds at most one atom per matrix occurrence
    let bound = PolyBound::new(atom_occurrences(&phi.matrix), 1, 0);
    TfnpProblem::new(name, bound, Arc::new(relation)).with_candidates(candidates)
}

fn numeral(i: u64) -> Term {
    (0..i).fold(Term::constant("z"), |t, _| Term::app("s", vec![t]))
}

fn iff(a: Matrix, b: Matrix) -> Matrix {
    Matrix::and(Matrix::implies(a.clone(), b.clone()), Matrix::implies(b, a))
}

/// Equality `E` and strict order `L` on numerals over `z` and `s`, axiomatized
/// so that on the tuples of all numeral pairs up to `r` every atom is forced.
pub fn php_sentence() -> UniversalSentence {
    let sig = Signature::from_slices(&[("z", 0), ("s", 1)], &[("E", 2), ("L", 2)]).expect("fixed signature");
    let (x, y, z) = (Term::var("x"), Term::var("y"), Term::constant("z"));
    let s = |t: &Term| Term::app("s", vec![t.clone()]);
    let e = |a: Term, b: Term| Matrix::atom("E", vec![a, b]);
    let l = |a: Term, b: Term| Matrix::atom("L", vec![a, b]);
    let parts = vec![
        e(z.clone(), z.clone()),
        Matrix::not(e(z.clone(), s(&x))),
        Matrix::not(e(s(&x), z.clone())),
        iff(e(s(&x), s(&y)), e(x.clone(), y.clone())),
        Matrix::not(l(x.clone(), z.clone())),
        l(z.clone(), s(&x)),
        iff(l(s(&x), s(&y)), l(x.clone(), y.clone())),
    ];
    let matrix = Matrix::conjunction(parts).expect("nonempty");
    UniversalSentence::new(sig, vec!["x".into(), "y".into()], matrix).expect("well-formed")
}

/// The `HCS(Φ_PHP)` instance for PIGEON size `r`: every pair of numerals `≤ r`.
pub fn php_instance(r: u64) -> BitString {
    let phi = php_sentence();
    let tuples: Vec<Vec<Term>> = (0..=r).flat_map(|i| (0..=r).map(move |j| vec![numeral(i), numeral(j)])).collect();
    encode_hcs_instance(&phi.signature, &tuples).expect("numerals are in the signature")
}

/// PIGEON(f) to `HCS(Φ_PHP)`. `f` lists the numeral pairs up to `r`, so it is
/// unary in `r`. `g` clamps each hole to `h(u) = min(f(u), r)` and reads the
/// forced atoms: `¬L(h(u), r)` is a range violation at `u`, `E(h(a), h(b))`
/// with `a < b` a collision.
pub fn pigeon_to_hcs(f: PigeonMap) -> ManyOneReduction {
    let fmap = NativeTransformer::new("php_instance", 1, |v| Ok(v[0].value().map_or_else(BitString::new, php_instance)));
    let g = NativeTransformer::new("php_read", 2, move |v| {
        let Some(r) = v[0].value() else { return Ok(BitString::new()) };
        let phi = php_sentence();
        let table = hcs_expansion(&phi, &php_instance(r));
        let z = v[1].bits();
        if z.len() != table.num_atoms() {
            return Ok(BitString::new());
        }
        let atom = |rel: &str, a: u64, b: u64| {
            let m = Matrix::atom(rel, vec![numeral(a), numeral(b)]);
            let Matrix::Atom(a) = m else { unreachable!() };
            table.atom_index(&a).map(|i| z[i])
        };
        let holes: Vec<u64> = (0..=r).map(|u| f.eval(r, u).min(r)).collect();
        for u in 0..=r {
            if atom("L", holes[u as usize], r) == Some(false) {
                return Ok(PigeonWitness::Range(u).encode());
            }
        }
        for a in 0..=r {
            for b in a + 1..=r {
                if atom("E", holes[a as usize], holes[b as usize]) == Some(true) {
                    return Ok(PigeonWitness::Collision(a, b).encode());
                }
            }
        }
        Ok(BitString::new())
    });
    ManyOneReduction::new("pigeon_to_hcs", Arc::new(fmap), Arc::new(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;
    use crate::tfnp::{all_witnesses, check_many_one, pigeon_problem, verify_solution};

    #[test]
    fn instance_codec_round_trip_and_malformed() {
        let phi = php_sentence();
        let tuples = vec![vec![numeral(2), numeral(0)], vec![numeral(1), numeral(3)]];
        let x = encode_hcs_instance(&phi.signature, &tuples).unwrap();
        assert_eq!(decode_hcs_instance(&phi.signature, 2, &x).unwrap(), tuples);
        let mut longer = x.clone();
        longer.push(true);
        assert!(decode_hcs_instance(&phi.signature, 2, &longer).is_none());
        assert!(decode_hcs_instance(&phi.signature, 2, &BitString::new()).is_none());
        let p = hcs_problem(&phi);
        assert!(verify_solution(&p, &longer, &BitString::new()).unwrap());
    }

    #[test]
    fn tautology_and_vacuous_cases() {
        let sig = Signature::from_slices(&[("c", 0)], &[("R", 2)]).unwrap();
        let phi = parse_sentence("forall x. R(x,x) | ~R(x,x)", &sig).unwrap();
        let p = hcs_problem(&phi);
        let empty = encode_hcs_instance(&sig, &[]).unwrap();
        assert!(verify_solution(&p, &empty, &BitString::new()).unwrap());
        let one = encode_hcs_instance(&sig, &[vec![Term::constant("c")]]).unwrap();
        assert!(verify_solution(&p, &one, &"0".into()).unwrap());
        assert!(verify_solution(&p, &one, &"1".into()).unwrap());
        assert!(!verify_solution(&p, &one, &"10".into()).unwrap());
    }

    #[test]
    fn strict_order_by_depth() {
        let sig = Signature::from_slices(&[("c", 0), ("f", 1)], &[("R", 2)]).unwrap();
        let phi = parse_sentence("forall x,y,z. ~R(x,x) & (R(x,y) & R(y,z) -> R(x,z))", &sig).unwrap();
        let terms: Vec<Term> = (0..3).map(|d| (0..d).fold(Term::constant("c"), |t, _| Term::app("f", vec![t]))).collect();
        let mut tuples = Vec::new();
        for a in &terms {
            for b in &terms {
                for c in &terms {
                    tuples.push(vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
        let x = encode_hcs_instance(&sig, &tuples).unwrap();
        let g = hcs_expansion(&phi, &x);
        let assignment: Vec<bool> = g
            .atoms()
            .iter()
            .map(|a| a.args[0].depth() < a.args[1].depth())
            .collect();
        let p = hcs_problem(&phi);
        assert!(verify_solution(&p, &x, &BitString::from_bits(assignment)).unwrap());
        let models = expansion_models(&g, 1 << 12);
        assert!(!models.is_empty());
        assert!(models.iter().all(|m| g.eval(m)));
    }

    #[test]
    fn php_model_is_unique() {
        let phi = php_sentence();
        let p = hcs_problem(&phi);
        for r in 0..=4 {
            let w = all_witnesses(&p, &php_instance(r)).unwrap();
            assert_eq!(w.len(), 1, "r = {r}");
        }
    }

    #[test]
    fn pigeon_to_hcs_small() {
        let hcs = hcs_problem(&php_sentence());
        let domain: Vec<BitString> = (0..=4).map(BitString::from_num).collect();
        for f in [PigeonMap::Identity, PigeonMap::Mod(2), PigeonMap::Constant(7)] {
            let report = check_many_one(&pigeon_to_hcs(f.clone()), &pigeon_problem(f), &hcs, &domain);
            assert!(report.pass, "{:?}", report.first_failure());
        }
    }
}
