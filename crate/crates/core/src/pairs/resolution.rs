//! Resolution refutations: checking, a text form, and a search that turns a
//! branching procedure with unit propagation into a tree-like refutation.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::prop::{Cnf, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionStep {
    /// Clause `i` of the input CNF.
    Init(usize),
    /// Resolvent of earlier steps `i` (containing `pivot`) and `j`
    /// (containing `-pivot`); `pivot` is a variable.
    Res(usize, usize, u32),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResolutionRefutation {
    pub steps: Vec<ResolutionStep>,
}

fn norm(mut c: Vec<Lit>) -> Vec<Lit> {
    c.sort_by_key(|l| (l.unsigned_abs(), *l < 0));
    c.dedup();
    c
}

/// The derived clauses, or a diagnostic naming the first bad step.
pub fn derive_clauses(cnf: &Cnf, r: &ResolutionRefutation) -> Result<Vec<Vec<Lit>>, String> {
    let mut derived: Vec<Vec<Lit>> = Vec::with_capacity(r.steps.len());
    for (k, step) in r.steps.iter().enumerate() {
        let clause = match *step {
            ResolutionStep::Init(i) => {
                norm(cnf.clauses.get(i).ok_or_else(|| format!("step {k}: no input clause {i}"))?.clone())
            }
            ResolutionStep::Res(i, j, v) => {
                if i >= k || j >= k {
                    return Err(format!("step {k}: premise out of range"));
                }
                let p = Lit::try_from(v).map_err(|_| format!("step {k}: bad pivot"))?;
                let (ci, cj) = (&derived[i], &derived[j]);
                if p == 0 || !ci.contains(&p) || !cj.contains(&-p) {
                    return Err(format!("step {k}: pivot {v} does not clash"));
                }
                let lits = ci.iter().filter(|&&l| l != p).chain(cj.iter().filter(|&&l| l != -p)).copied().collect();
                norm(lits)
            }
        };
        derived.push(clause);
    }
    Ok(derived)
}

/// Every step is valid and the last clause is empty.
pub fn check_resolution(cnf: &Cnf, r: &ResolutionRefutation) -> bool {
    diagnose_resolution(cnf, r).is_ok()
}

pub fn diagnose_resolution(cnf: &Cnf, r: &ResolutionRefutation) -> Result<(), String> {
    let derived = derive_clauses(cnf, r)?;
    match derived.last() {
        Some(c) if c.is_empty() => Ok(()),
        Some(_) => Err("last clause is not empty".into()),
        None => Err("no steps".into()),
    }
}

impl ResolutionRefutation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One step per line: `INIT i` or `RES i j pivot`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            let _ = match step {
                ResolutionStep::Init(i) => writeln!(s, "INIT {i}"),
                ResolutionStep::Res(i, j, p) => writeln!(s, "RES {i} {j} {p}"),
            };
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut steps = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let nums: Vec<usize> = toks[1..]
                .iter()
                .map(|t| t.parse().map_err(|_| format!("line {}: bad number {t}", n + 1)))
                .collect::<Result<_, _>>()?;
            steps.push(match (toks[0], nums.as_slice()) {
                ("INIT", [i]) => ResolutionStep::Init(*i),
                ("RES", [i, j, p]) => {
                    ResolutionStep::Res(*i, *j, u32::try_from(*p).map_err(|_| format!("line {}: bad pivot", n + 1))?)
                }
                _ => return Err(format!("line {}: expected INIT i or RES i j pivot", n + 1)),
            });
        }
        Ok(ResolutionRefutation { steps })
    }
}

struct Search<'a> {
    cnf: &'a Cnf,
    steps: Vec<ResolutionStep>,
    clauses: Vec<Vec<Lit>>,
    index: HashMap<Vec<Lit>, usize>,
    assign: Vec<Option<bool>>,
}

impl Search<'_> {
    fn value(&self, l: Lit) -> Option<bool> {
        self.assign[l.unsigned_abs() as usize].map(|v| v == (l > 0))
    }

    fn add(&mut self, step: ResolutionStep, clause: Vec<Lit>) -> usize {
        if let Some(&i) = self.index.get(&clause) {
            return i;
        }
        self.steps.push(step);
        self.clauses.push(clause.clone());
        self.index.insert(clause, self.steps.len() - 1);
        self.steps.len() - 1
    }

    /// A step whose clause is falsified by the current assignment, or `None`
    /// if the assignment extends to a model.
    fn refute(&mut self) -> Option<usize> {
        let mut unit = None;
        for (ci, c) in self.cnf.clauses.iter().enumerate() {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &l in c {
                match self.value(l) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open = Some(l);
                        open_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            if open_count == 0 {
                return Some(self.add(ResolutionStep::Init(ci), norm(c.clone())));
            }
            if open_count == 1 && unit.is_none() {
                unit = open;
            }
        }
        let l = match unit {
            Some(l) => l,
            None => (1..=self.cnf.num_vars as Lit).find(|&v| self.assign[v as usize].is_none())?,
        };
        let v = l.unsigned_abs() as usize;
        self.assign[v] = Some(l > 0);
        let first = self.refute();
        self.assign[v] = None;
        let first = first?;
        if !self.clauses[first].contains(&-l) {
            return Some(first);
        }
        self.assign[v] = Some(l < 0);
        let second = self.refute();
        self.assign[v] = None;
        let second = second?;
        if !self.clauses[second].contains(&l) {
            return Some(second);
        }
        // `first` holds -l and `second` holds l
        let (pos, neg) = if l > 0 { (second, first) } else { (first, second) };
        let resolvent = norm(
            self.clauses[pos]
                .iter()
                .filter(|&&x| x != v as Lit)
                .chain(self.clauses[neg].iter().filter(|&&x| x != -(v as Lit)))
                .copied()
                .collect(),
        );
        Some(self.add(ResolutionStep::Res(pos, neg, v as u32), resolvent))
    }
}

/// A tree-like refutation of `cnf`, or `None` when it is satisfiable.
pub fn find_refutation(cnf: &Cnf) -> Option<ResolutionRefutation> {
    let mut s = Search {
        cnf,
        steps: Vec::new(),
        clauses: Vec::new(),
        index: HashMap::new(),
        assign: vec![None; cnf.num_vars as usize + 1],
    };
    s.refute()?;
    Some(ResolutionRefutation { steps: s.steps })
}

/// Pigeonhole clauses: pigeon `i` sits in some hole; no hole holds two.
/// Variable `i·holes + j + 1` says pigeon `i` is in hole `j`.
pub fn php_cnf(pigeons: u32, holes: u32) -> Cnf {
    let var = |i: u32, j: u32| (i * holes + j + 1) as Lit;
    let mut cnf = Cnf::new(pigeons * holes);
    for i in 0..pigeons {
        cnf.add_clause((0..holes).map(|j| var(i, j)).collect::<Vec<_>>());
    }
    for j in 0..holes {
        for a in 0..pigeons {
            for b in a + 1..pigeons {
                cnf.add_clause(vec![-var(a, j), -var(b, j)]);
            }
        }
    }
    cnf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::sat_solve;

    #[test]
    fn one_step() {
        let mut cnf = Cnf::new(1);
        cnf.add_clause(vec![1]);
        cnf.add_clause(vec![-1]);
        let r = ResolutionRefutation {
            steps: vec![ResolutionStep::Init(0), ResolutionStep::Init(1), ResolutionStep::Res(0, 1, 1)],
        };
        assert!(check_resolution(&cnf, &r));
        let wrong = ResolutionRefutation {
            steps: vec![ResolutionStep::Init(0), ResolutionStep::Init(1), ResolutionStep::Res(1, 0, 1)],
        };
        assert!(!check_resolution(&cnf, &wrong));
        let out_of_range = ResolutionRefutation { steps: vec![ResolutionStep::Init(5)] };
        assert!(diagnose_resolution(&cnf, &out_of_range).unwrap_err().contains("no input clause"));
    }

    #[test]
    fn php_two_one_has_five_steps() {
        let cnf = php_cnf(2, 1);
        let r = find_refutation(&cnf).unwrap();
        assert_eq!(r.len(), 5);
        assert!(check_resolution(&cnf, &r));
        assert_eq!(ResolutionRefutation::from_text(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn search_agrees_with_solver() {
        for (p, h) in [(3, 2), (4, 3), (2, 2), (3, 3)] {
            let cnf = php_cnf(p, h);
            match find_refutation(&cnf) {
                Some(r) => {
                    assert!(check_resolution(&cnf, &r));
                    assert!(sat_solve(&cnf).is_none());
                }
                None => assert!(sat_solve(&cnf).is_some()),
            }
        }
    }
}
