use std::collections::BTreeSet;

use super::formula::{Assignment, PropFormula};

/// Nonzero DIMACS literal: `v` or `-v`.
pub type Lit = i32;

pub type Clause = Vec<Lit>;

/// CNF over `x1..=num_vars`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf { num_vars, clauses: Vec::new() }
    }

    /// Adds a clause, widening `num_vars` as needed.
    pub fn add_clause(&mut self, clause: impl Into<Clause>) {
        let clause = clause.into();
        for &l in &clause {
            assert!(l != 0, "literal 0 is reserved");
            self.num_vars = self.num_vars.max(l.unsigned_abs());
        }
        self.clauses.push(clause);
    }

    pub fn eval(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| a.get(l.unsigned_abs()).unwrap_or(false) == (l > 0))
        })
    }

    /// Sorts literals, collapses duplicates and drops tautological clauses.
    pub fn normalized(&self) -> Cnf {
        let mut out = Cnf::new(self.num_vars);
        for c in &self.clauses {
            let set: BTreeSet<Lit> = c.iter().copied().collect();
            if set.iter().any(|l| set.contains(&-l)) {
                continue;
            }
            let mut lits: Vec<Lit> = set.into_iter().collect();
            lits.sort_by_key(|l| (l.unsigned_abs(), *l < 0));
            out.clauses.push(lits);
        }
        out
    }

    /// The CNF as a formula; the empty clause becomes `F`.
    pub fn to_formula(&self) -> PropFormula {
        let lit = |l: Lit| {
            let v = PropFormula::Var(l.unsigned_abs());
            if l > 0 {
                v
            } else {
                PropFormula::not(v)
            }
        };
        PropFormula::and_all(
            self.clauses.iter().map(|c| PropFormula::or_all(c.iter().map(|&l| lit(l)))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_drops_tautologies_and_duplicates() {
        let mut c = Cnf::new(0);
        c.add_clause(vec![2, 1, 2]);
        c.add_clause(vec![3, -3]);
        c.add_clause(vec![-1]);
        let n = c.normalized();
        assert_eq!(n.num_vars, 3);
        assert_eq!(n.clauses, vec![vec![1, 2], vec![-1]]);
    }

    #[test]
    fn eval_matches_formula() {
        let mut c = Cnf::new(2);
        c.add_clause(vec![1, -2]);
        c.add_clause(vec![2]);
        let f = c.to_formula();
        for bits in 0..4u32 {
            let a = Assignment::new(vec![bits & 1 == 1, bits & 2 == 2]);
            assert_eq!(c.eval(&a), f.eval(&a));
        }
    }
}
