//! Ground instances, Herbrand expansions and Herbrand-universe enumeration.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::syntax::{Atom, Matrix, Signature, Term, UniversalSentence};
use super::LogicError;
use crate::prop::PropFormula;

fn subst_term(t: &Term, vars: &[String], tuple: &[Term]) -> Term {
    match t {
        Term::Var { var } => {
            let j = vars.iter().position(|v| v == var).expect("checked free variable");
            tuple[j].clone()
        }
        Term::App { head, args } => Term::App {
            head: head.clone(),
            args: args.iter().map(|a| subst_term(a, vars, tuple)).collect(),
        },
    }
}

fn subst_matrix(m: &Matrix, vars: &[String], tuple: &[Term]) -> Matrix {
    match m {
        Matrix::Atom(a) => Matrix::Atom(Atom {
            head: a.head.clone(),
            args: a.args.iter().map(|t| subst_term(t, vars, tuple)).collect(),
        }),
        Matrix::Bottom => Matrix::Bottom,
        Matrix::Not(x) => Matrix::not(subst_matrix(x, vars, tuple)),
        Matrix::And(a, b) => Matrix::and(subst_matrix(a, vars, tuple), subst_matrix(b, vars, tuple)),
        Matrix::Or(a, b) => Matrix::or(subst_matrix(a, vars, tuple), subst_matrix(b, vars, tuple)),
        Matrix::Implies(a, b) => {
            Matrix::implies(subst_matrix(a, vars, tuple), subst_matrix(b, vars, tuple))
        }
    }
}

/// Replaces every `x_j` of the sentence's matrix with `tuple[j]`.
pub fn substitute(sentence: &UniversalSentence, tuple: &[Term]) -> Result<Matrix, LogicError> {
    if tuple.len() != sentence.arity() {
        return Err(LogicError::TupleLength { expected: sentence.arity(), found: tuple.len() });
    }
    for t in tuple {
        if !t.is_ground() {
            return Err(LogicError::NonGround(t.to_string()));
        }
        t.check(&sentence.signature, &[])?;
    }
    Ok(subst_matrix(&sentence.matrix, &sentence.vars, tuple))
}

/// Conjunction of ground instances together with the table numbering their atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundConjunction {
    pub instances: Vec<Matrix>,
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
}

impl GroundConjunction {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Truth value under an assignment indexed by the atom table.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.atoms.len(), "assignment width");
        self.instances
            .iter()
            .all(|m| m.eval(&mut |a| assignment[self.index[a]]))
    }

    /// The conjunction as a propositional formula; atom `i` becomes variable `i + 1`.
    pub fn to_prop(&self) -> PropFormula {
        fn go(m: &Matrix, index: &HashMap<Atom, usize>) -> PropFormula {
            match m {
                Matrix::Atom(a) => PropFormula::Var(index[a] as u32 + 1),
                Matrix::Bottom => PropFormula::Const(false),
                Matrix::Not(x) => PropFormula::not(go(x, index)),
                Matrix::And(a, b) => PropFormula::and(go(a, index), go(b, index)),
                Matrix::Or(a, b) => PropFormula::or(go(a, index), go(b, index)),
                Matrix::Implies(a, b) => PropFormula::or(PropFormula::not(go(a, index)), go(b, index)),
            }
        }
        self.instances
            .iter()
            .map(|m| go(m, &self.index))
            .reduce(PropFormula::and)
            .unwrap_or(PropFormula::Const(true))
    }
}

/// Builds `⋀ᵢ φ(τ_i1,…,τ_ik)` and its atom table in first-occurrence order.
pub fn herbrand_expand(
    sentence: &UniversalSentence,
    tuples: &[Vec<Term>],
) -> Result<GroundConjunction, LogicError> {
    let mut out = GroundConjunction::default();
    for tuple in tuples {
        let inst = substitute(sentence, tuple)?;
        inst.visit_atoms(&mut |a| {
            if !out.index.contains_key(a) {
                out.index.insert(a.clone(), out.atoms.len());
                out.atoms.push(a.clone());
            }
        });
        out.instances.push(inst);
    }
    Ok(out)
}

/// Enumeration order on ground terms: depth, then head name, then arguments.
pub fn term_order(a: &Term, b: &Term) -> Ordering {
    a.depth().cmp(&b.depth()).then_with(|| structural_order(a, b))
}

fn structural_order(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::App { head: ha, args: aa }, Term::App { head: hb, args: ab }) => ha
            .cmp(hb)
            .then_with(|| {
                aa.iter()
                    .zip(ab)
                    .map(|(x, y)| term_order(x, y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
            .then(aa.len().cmp(&ab.len())),
        _ => a.cmp(b),
    }
}

/// All ground terms of depth at most `depth`, sorted by [`term_order`].
pub fn enumerate_herbrand_terms(sig: &Signature, depth: usize) -> Vec<Term> {
    // by_depth[d] holds exactly the terms of depth d
    let mut by_depth: Vec<Vec<Term>> = Vec::new();
    let mut constants: Vec<Term> = sig
        .functions()
        .iter()
        .filter(|f| f.arity == 0)
        .map(|f| Term::constant(&f.name))
        .collect();
    constants.sort_by(term_order);
    by_depth.push(constants);
    for d in 1..=depth {
        let below: Vec<Term> = by_depth.iter().flatten().cloned().collect();
        let mut layer = Vec::new();
        for f in sig.functions().iter().filter(|f| f.arity > 0) {
            // all argument tuples over terms of depth < d with at least one of depth d - 1
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..f.arity {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        below.iter().map(move |a| {
                            let mut t = t.clone();
                            t.push(a.clone());
                            t
                        })
                    })
                    .collect();
            }
            layer.extend(
                tuples
                    .into_iter()
                    .filter(|args| args.iter().any(|a| a.depth() == d - 1))
                    .map(|args| Term::app(&f.name, args)),
            );
        }
        layer.sort_by(term_order);
        if layer.is_empty() {
            break;
        }
        by_depth.push(layer);
    }
    by_depth.into_iter().flatten().collect()
}

/// All `k`-tuples over `terms`, in lexicographic order of positions.
pub fn all_tuples(terms: &[Term], k: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                terms.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;
    use std::collections::BTreeSet;

    fn sig() -> Signature {
        Signature::from_slices(&[("c", 0), ("f", 1)], &[("R", 2)]).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let s = parse_sentence("forall x. R(x,x)", &sig()).unwrap();
        let m = substitute(&s, &[Term::constant("c")]).unwrap();
        assert_eq!(m.to_string(), "R(c,c)");

        let s = parse_sentence("forall x,y. R(x,y) -> R(y,x)", &sig()).unwrap();
        let fc = Term::app("f", vec![Term::constant("c")]);
        let m = substitute(&s, &[Term::constant("c"), fc]).unwrap();
        assert_eq!(m.to_string(), "R(c,f(c)) -> R(f(c),c)");
        assert!(m.is_ground());
    }

    #[test]
    fn substitution_errors() {
        let s = parse_sentence("forall x,y. R(x,y)", &sig()).unwrap();
        assert!(matches!(substitute(&s, &[Term::constant("c")]), Err(LogicError::TupleLength { .. })));
        let open = Term::var("z");
        assert!(matches!(substitute(&s, &[open.clone(), open]), Err(LogicError::NonGround(_))));
        let bad = Term::constant("nope");
        assert!(substitute(&s, &[bad.clone(), bad]).is_err());
    }

    #[test]
    fn empty_expansion() {
        let s = parse_sentence("forall x. R(x,x)", &sig()).unwrap();
        let g = herbrand_expand(&s, &[]).unwrap();
        assert_eq!(g.num_atoms(), 0);
        assert!(g.eval(&[]));
    }

    #[test]
    fn strict_order_expansion_has_nine_atoms() {
        let s = parse_sentence("forall x,y,z. ~R(x,x) & (R(x,y) & R(y,z) -> R(x,z))", &sig()).unwrap();
        let terms = enumerate_herbrand_terms(&sig(), 2);
        let tuples = all_tuples(&terms, 3);
        let g = herbrand_expand(&s, &tuples).unwrap();
        // brute enumeration of distinct R(s,t)
        let distinct: BTreeSet<String> = tuples
            .iter()
            .flat_map(|t| {
                let pairs = [(0, 0), (0, 1), (1, 2), (0, 2)];
                pairs.map(|(i, j)| format!("R({},{})", t[i], t[j]))
            })
            .collect();
        assert_eq!(distinct.len(), 9);
        assert_eq!(g.num_atoms(), 9);
        // R(s,t) iff depth(s) < depth(t) satisfies it
        let a: Vec<bool> = g.atoms().iter().map(|a| a.args[0].depth() < a.args[1].depth()).collect();
        assert!(g.eval(&a));
    }

    #[test]
    fn unary_chain_enumeration() {
        let only_c = Signature::from_slices(&[("c", 0)], &[("P", 1)]).unwrap();
        assert_eq!(enumerate_herbrand_terms(&only_c, 3), vec![Term::constant("c")]);
        let names: Vec<String> = enumerate_herbrand_terms(&sig(), 2).iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["c", "f(c)", "f(f(c))"]);
    }

    // independent recursive counter: number of terms of depth <= d
    fn count_up_to(sig: &Signature, d: usize) -> usize {
        let consts = sig.functions().iter().filter(|f| f.arity == 0).count();
        if d == 0 {
            return consts;
        }
        let below = count_up_to(sig, d - 1);
        consts + sig.functions().iter().filter(|f| f.arity > 0).map(|f| below.pow(f.arity as u32)).sum::<usize>()
    }

    #[test]
    fn binary_function_count_matches_recursive_counter() {
        let g = Signature::from_slices(&[("c", 0), ("g", 2)], &[("P", 1)]).unwrap();
        for d in 0..=3 {
            assert_eq!(enumerate_herbrand_terms(&g, d).len(), count_up_to(&g, d), "depth {d}");
        }
        assert_eq!(enumerate_herbrand_terms(&g, 2).len(), 5);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let g = Signature::from_slices(&[("a", 0), ("b", 0), ("g", 2), ("h", 1)], &[("P", 1)]).unwrap();
        let ts = enumerate_herbrand_terms(&g, 2);
        assert!(ts.windows(2).all(|w| term_order(&w[0], &w[1]) == Ordering::Less));
        assert!(ts.iter().all(|t| t.depth() <= 2));
    }
}
