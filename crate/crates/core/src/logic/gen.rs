//! Seeded generation of sentences that hold in a random finite structure.
//! Such sentences are consistent, so every Herbrand expansion of them is satisfiable.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::syntax::{Atom, Matrix, Signature, Term, UniversalSentence};

/// Interpretation of a signature over the domain `0..size`.
#[derive(Clone, Debug)]
pub struct FiniteStructure {
    pub size: usize,
    functions: HashMap<String, Vec<usize>>,
    relations: HashMap<String, BTreeSet<Vec<usize>>>,
}

fn tuple_index(args: &[usize], size: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

impl FiniteStructure {
    pub fn random(sig: &Signature, size: usize, rng: &mut impl Rng) -> Self {
        let functions = sig
            .functions()
            .iter()
            .map(|f| {
                let table = (0..size.pow(f.arity as u32)).map(|_| rng.gen_range(0..size)).collect();
                (f.name.clone(), table)
            })
            .collect();
        let relations = sig
            .relations()
            .iter()
            .map(|r| {
                let mut set = BTreeSet::new();
                for i in 0..size.pow(r.arity as u32) {
                    if rng.gen_bool(0.5) {
                        let mut t = vec![0; r.arity];
                        let mut v = i;
                        for slot in t.iter_mut().rev() {
                            *slot = v % size;
                            v /= size;
                        }
                        set.insert(t);
                    }
                }
                (r.name.clone(), set)
            })
            .collect();
        FiniteStructure { size, functions, relations }
    }

    pub fn eval_term(&self, t: &Term, env: &HashMap<&str, usize>) -> usize {
        match t {
            Term::Var { var } => env[var.as_str()],
            Term::App { head, args } => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval_term(a, env)).collect();
                self.functions[head][tuple_index(&vals, self.size)]
            }
        }
    }

    pub fn atom_value(&self, a: &Atom, env: &HashMap<&str, usize>) -> bool {
        let vals: Vec<usize> = a.args.iter().map(|t| self.eval_term(t, env)).collect();
        self.relations[&a.head].contains(&vals)
    }

    /// Whether `∀vars. m` holds in this structure.
    pub fn satisfies(&self, vars: &[String], m: &Matrix) -> bool {
        let k = vars.len();
        (0..self.size.pow(k as u32)).all(|mut code| {
            let mut env = HashMap::new();
            for v in vars.iter().rev() {
                env.insert(v.as_str(), code % self.size);
                code /= self.size;
            }
            m.eval(&mut |a| self.atom_value(a, &env))
        })
    }
}

fn random_term(sig: &Signature, vars: &[String], depth: usize, rng: &mut impl Rng) -> Term {
    let compound: Vec<_> = sig.functions().iter().filter(|f| f.arity > 0).collect();
    if depth > 0 && !compound.is_empty() && rng.gen_bool(0.3) {
        let f = compound[rng.gen_range(0..compound.len())];
        let args = (0..f.arity).map(|_| random_term(sig, vars, depth - 1, rng)).collect();
        return Term::app(&f.name, args);
    }
    if rng.gen_bool(0.8) {
        Term::var(&vars[rng.gen_range(0..vars.len())])
    } else {
        let consts: Vec<_> = sig.functions().iter().filter(|f| f.arity == 0).collect();
        Term::constant(&consts[rng.gen_range(0..consts.len())].name)
    }
}

/// A random matrix with roughly `size` connectives over the given variables.
pub fn random_matrix(sig: &Signature, vars: &[String], size: usize, rng: &mut impl Rng) -> Matrix {
    if size == 0 {
        let r = &sig.relations()[rng.gen_range(0..sig.relations().len())];
        let args = (0..r.arity).map(|_| random_term(sig, vars, 1, rng)).collect();
        return Matrix::atom(&r.name, args);
    }
    let left = rng.gen_range(0..size);
    match rng.gen_range(0..4) {
        0 => Matrix::not(random_matrix(sig, vars, size - 1, rng)),
        1 => Matrix::and(random_matrix(sig, vars, left, rng), random_matrix(sig, vars, size - 1 - left, rng)),
        2 => Matrix::or(random_matrix(sig, vars, left, rng), random_matrix(sig, vars, size - 1 - left, rng)),
        _ => Matrix::implies(random_matrix(sig, vars, left, rng), random_matrix(sig, vars, size - 1 - left, rng)),
    }
}

/// A sentence true in `model`, found by rejection sampling. Falls back to a
/// tautological matrix after `tries` misses.
pub fn random_model_sentence(
    sig: &Signature,
    model: &FiniteStructure,
    k: usize,
    size: usize,
    rng: &mut impl Rng,
) -> UniversalSentence {
    let vars: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
    for _ in 0..1000 {
        let m = random_matrix(sig, &vars, size, rng);
        if model.satisfies(&vars, &m) {
            return UniversalSentence::new(sig.clone(), vars, m).expect("generated sentence is well formed");
        }
    }
    let a = random_matrix(sig, &vars, 0, rng);
    let m = Matrix::or(a.clone(), Matrix::not(a));
    UniversalSentence::new(sig.clone(), vars, m).expect("generated sentence is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_sentences_hold_in_their_model() {
        let sig = Signature::from_slices(&[("c", 0), ("f", 1)], &[("R", 2), ("P", 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let model = FiniteStructure::random(&sig, 2, &mut rng);
            let s = random_model_sentence(&sig, &model, 2, 3, &mut rng);
            assert!(model.satisfies(&s.vars, &s.matrix));
        }
    }

    #[test]
    fn print_parse_round_trip_on_generated_sentences() {
        let sig = Signature::from_slices(&[("c", 0), ("f", 1), ("g", 2)], &[("R", 2), ("P", 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..100 {
            let vars: Vec<String> = (0..1 + i % 3).map(|j| format!("v{j}")).collect();
            let m = random_matrix(&sig, &vars, 1 + i % 7, &mut rng);
            let s = UniversalSentence::new(sig.clone(), vars, m).unwrap();
            let printed = s.to_string();
            let reparsed = parse_sentence(&printed, &sig).unwrap();
            assert_eq!(reparsed, s, "{printed}");
            assert_eq!(reparsed.to_string(), printed);
        }
    }
}
