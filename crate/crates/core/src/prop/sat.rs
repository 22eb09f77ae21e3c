//! DPLL with two watched literals and chronological backtracking.

use super::cnf::{Cnf, Lit};
use super::formula::Assignment;

const UNASSIGNED: i8 = 0;

fn code(l: Lit) -> usize {
    2 * l.unsigned_abs() as usize + usize::from(l < 0)
}

struct Solver {
    clauses: Vec<Vec<Lit>>,
    // watches[code(l)] lists clauses whose first two literals include l
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    trail: Vec<Lit>,
    qhead: usize,
    // (trail length before the decision, decided literal, already flipped)
    decisions: Vec<(usize, Lit, bool)>,
}

impl Solver {
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[l.unsigned_abs() as usize];
        if l < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().expect("nonempty trail");
            self.value[l.unsigned_abs() as usize] = UNASSIGNED;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = -self.trail[self.qhead];
            self.qhead += 1;
            let watching = std::mem::take(&mut self.watches[code(falsified)]);
            let mut keep = Vec::with_capacity(watching.len());
            let mut conflict = false;
            for &ci in &watching {
                if conflict {
                    keep.push(ci);
                    continue;
                }
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value[first.unsigned_abs() as usize] * first.signum() as i8 == 1 {
                    keep.push(ci);
                    continue;
                }
                let replacement = (2..clause.len()).find(|&k| {
                    let l = clause[k];
                    self.value[l.unsigned_abs() as usize] * l.signum() as i8 != -1
                });
                if let Some(k) = replacement {
                    clause.swap(1, k);
                    let nl = clause[1];
                    self.watches[code(nl)].push(ci);
                    continue;
                }
                keep.push(ci);
                match self.lit_value(first) {
                    -1 => conflict = true,
                    _ => self.assign(first),
                }
            }
            self.watches[code(falsified)] = keep;
            if conflict {
                return false;
            }
        }
        true
    }

    fn backtrack(&mut self) -> bool {
        while let Some((len, lit, flipped)) = self.decisions.pop() {
            self.undo_to(len);
            if !flipped {
                self.decisions.push((len, -lit, true));
                self.assign(-lit);
                if self.propagate() {
                    return true;
                }
            }
        }
        false
    }

    fn solve(mut self, num_vars: u32) -> Option<Assignment> {
        if !self.propagate() {
            return None;
        }
        let mut next_var = 1usize;
        loop {
            while next_var <= num_vars as usize && self.value[next_var] != UNASSIGNED {
                next_var += 1;
            }
            if next_var > num_vars as usize {
                let values = (1..=num_vars as usize).map(|v| self.value[v] == 1).collect();
                return Some(Assignment::new(values));
            }
            let lit = next_var as Lit;
            self.decisions.push((self.trail.len(), lit, false));
            self.assign(lit);
            if !self.propagate() {
                if !self.backtrack() {
                    return None;
                }
                next_var = 1;
            }
        }
    }
}

/// Some satisfying assignment to `x1..=num_vars`, or `None` when unsatisfiable.
pub fn sat_solve(cnf: &Cnf) -> Option<Assignment> {
    let n = cnf.num_vars as usize;
    let mut s = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n + 2],
        value: vec![UNASSIGNED; n + 1],
        trail: Vec::new(),
        qhead: 0,
        decisions: Vec::new(),
    };
    let mut units = Vec::new();
    for c in &cnf.normalized().clauses {
        match c.len() {
            0 => return None,
            1 => units.push(c[0]),
            _ => {
                let ci = s.clauses.len();
                s.watches[code(c[0])].push(ci);
                s.watches[code(c[1])].push(ci);
                s.clauses.push(c.clone());
            }
        }
    }
    for u in units {
        match s.lit_value(u) {
            -1 => return None,
            1 => {}
            _ => s.assign(u),
        }
    }
    s.solve(cnf.num_vars)
}

/// Distinct satisfying assignments projected onto `x1..=project`, up to `limit`,
/// found by adding a blocking clause after each model.
pub fn all_sat(cnf: &Cnf, project: u32, limit: usize) -> Vec<Assignment> {
    assert!(project <= cnf.num_vars || cnf.num_vars == 0 && project == 0);
    let mut work = cnf.clone();
    let mut out = Vec::new();
    while out.len() < limit {
        let Some(model) = sat_solve(&work) else { break };
        let proj = model.restrict(project as usize);
        let block: Vec<Lit> = (1..=project as Lit)
            .map(|v| if proj.get(v as u32) == Some(true) { -v } else { v })
            .collect();
        out.push(proj);
        if block.is_empty() {
            break;
        }
        work.clauses.push(block);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_sat(cnf: &Cnf) -> bool {
        let n = cnf.num_vars;
        (0u64..1 << n).any(|bits| {
            let a = Assignment::new((0..n).map(|i| bits >> i & 1 == 1).collect());
            cnf.eval(&a)
        })
    }

    fn php(pigeons: u32, holes: u32) -> Cnf {
        let var = |p: u32, h: u32| (p * holes + h + 1) as Lit;
        let mut c = Cnf::new(pigeons * holes);
        for p in 0..pigeons {
            c.add_clause((0..holes).map(|h| var(p, h)).collect::<Vec<_>>());
        }
        for h in 0..holes {
            for p in 0..pigeons {
                for q in p + 1..pigeons {
                    c.add_clause(vec![-var(p, h), -var(q, h)]);
                }
            }
        }
        c
    }

    #[test]
    fn pigeonhole_instances() {
        assert!(sat_solve(&php(3, 2)).is_none());
        assert!(sat_solve(&php(5, 4)).is_none());
        let m = sat_solve(&php(4, 4)).unwrap();
        assert!(php(4, 4).eval(&m));
    }

    #[test]
    fn empty_and_trivial() {
        assert!(sat_solve(&Cnf::new(0)).is_some());
        let mut c = Cnf::new(1);
        c.clauses.push(vec![]);
        assert!(sat_solve(&c).is_none());
        let mut c = Cnf::new(1);
        c.add_clause(vec![1]);
        c.add_clause(vec![-1]);
        assert!(sat_solve(&c).is_none());
    }

    #[test]
    fn all_sat_counts_models() {
        // x1 | x2 has three models
        let mut c = Cnf::new(2);
        c.add_clause(vec![1, 2]);
        assert_eq!(all_sat(&c, 2, 10).len(), 3);
        // projection onto x1 for x1 | x2
        assert_eq!(all_sat(&c, 1, 10).len(), 2);
    }

    fn arb_cnf() -> impl Strategy<Value = Cnf> {
        (1u32..8).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            prop::collection::vec(prop::collection::vec(lit, 0..4), 0..24)
                .prop_map(move |clauses| Cnf { num_vars: n, clauses })
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(cnf in arb_cnf()) {
            match sat_solve(&cnf) {
                Some(m) => prop_assert!(cnf.eval(&m)),
                None => prop_assert!(!brute_sat(&cnf)),
            }
        }

        #[test]
        fn all_sat_matches_model_count(cnf in arb_cnf()) {
            let n = cnf.num_vars;
            let count = (0u64..1 << n)
                .filter(|bits| cnf.eval(&Assignment::new((0..n).map(|i| bits >> i & 1 == 1).collect())))
                .count();
            let models = all_sat(&cnf, n, 1 << 8);
            prop_assert_eq!(models.len(), count);
        }
    }
}
