//! Equisatisfiable CNF encoding. Variables `1..=num_original` keep their
//! meaning; auxiliary variables are numbered above them.

use std::collections::HashMap;

use super::cnf::{Cnf, Lit};
use super::formula::PropFormula;

#[derive(Clone, Debug)]
pub struct TseitinEncoding {
    pub cnf: Cnf,
    /// Literal equivalent to the whole formula under the definitional clauses.
    pub root: Lit,
    pub num_original: u32,
}

struct Encoder {
    cnf: Cnf,
    next: u32,
    cache: HashMap<PropFormula, Lit>,
    true_var: Option<Lit>,
}

impl Encoder {
    fn fresh(&mut self) -> Lit {
        self.next += 1;
        self.cnf.num_vars = self.cnf.num_vars.max(self.next);
        self.next as Lit
    }

    fn constant(&mut self, b: bool) -> Lit {
        let t = match self.true_var {
            Some(t) => t,
            None => {
                let t = self.fresh();
                self.cnf.add_clause(vec![t]);
                self.true_var = Some(t);
                t
            }
        };
        if b {
            t
        } else {
            -t
        }
    }

    fn encode(&mut self, f: &PropFormula) -> Lit {
        match f {
            PropFormula::Var(i) => return *i as Lit,
            PropFormula::Const(b) => return self.constant(*b),
            PropFormula::Not(a) => return -self.encode(a),
            _ => {}
        }
        if let Some(&l) = self.cache.get(f) {
            return l;
        }
        let lit = match f {
            PropFormula::And(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let g = self.fresh();
                self.cnf.add_clause(vec![-g, la]);
                self.cnf.add_clause(vec![-g, lb]);
                self.cnf.add_clause(vec![g, -la, -lb]);
                g
            }
            PropFormula::Or(a, b) => {
                let (la, lb) = (self.encode(a), self.encode(b));
                let g = self.fresh();
                self.cnf.add_clause(vec![g, -la]);
                self.cnf.add_clause(vec![g, -lb]);
                self.cnf.add_clause(vec![-g, la, lb]);
                g
            }
            _ => unreachable!("leaves handled above"),
        };
        self.cache.insert(f.clone(), lit);
        lit
    }
}

/// Definitional clauses for `f`; original variables are `1..=max(num_original, max_var(f))`.
pub fn tseitin_definitions(f: &PropFormula, num_original: u32) -> TseitinEncoding {
    let n = num_original.max(f.max_var());
    let mut enc = Encoder { cnf: Cnf::new(n), next: n, cache: HashMap::new(), true_var: None };
    let root = enc.encode(f);
    TseitinEncoding { cnf: enc.cnf, root, num_original: n }
}

/// CNF satisfiable exactly when `f` is; its models restrict to models of `f`.
pub fn tseitin(f: &PropFormula) -> Cnf {
    let mut e = tseitin_definitions(f, 0);
    e.cnf.add_clause(vec![e.root]);
    e.cnf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::formula::Assignment;
    use crate::prop::sat::{all_sat, sat_solve};
    use proptest::prelude::*;

    pub(crate) fn arb_formula(vars: u32) -> impl Strategy<Value = PropFormula> {
        let leaf = prop_oneof![
            (1..=vars).prop_map(PropFormula::Var),
            any::<bool>().prop_map(PropFormula::Const),
        ];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(PropFormula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PropFormula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| PropFormula::or(a, b)),
            ]
        })
    }

    #[test]
    fn excluded_middle_negation_is_unsat() {
        let f: PropFormula = "~(x1 | ~x1)".parse().unwrap();
        assert!(sat_solve(&tseitin(&f)).is_none());
    }

    proptest! {
        #[test]
        fn equisatisfiable_and_model_preserving(f in arb_formula(5)) {
            let cnf = tseitin(&f);
            let n = f.max_var();
            match sat_solve(&cnf) {
                Some(m) => prop_assert!(f.eval(&m.restrict(n as usize))),
                None => prop_assert!(!f.is_satisfiable_brute()),
            }
        }

        #[test]
        fn projected_models_are_exactly_the_models(f in arb_formula(4)) {
            let n = f.max_var();
            let cnf = tseitin(&f);
            let mut got: Vec<Vec<bool>> =
                all_sat(&cnf, n, 64).into_iter().map(|a| a.values().to_vec()).collect();
            got.sort();
            let mut want: Vec<Vec<bool>> = (0u32..1 << n)
                .map(|b| (0..n).map(|i| b >> i & 1 == 1).collect::<Vec<_>>())
                .filter(|v| f.eval(&Assignment::new(v.clone())))
                .collect();
            want.sort();
            prop_assert_eq!(got, want);
        }
    }
}
