use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Function and relation symbols of a first-order language without equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    functions: Vec<Symbol>,
    relations: Vec<Symbol>,
}

impl Signature {
    pub fn new<F, R>(functions: F, relations: R) -> Result<Self, LogicError>
    where
        F: IntoIterator<Item = (String, usize)>,
        R: IntoIterator<Item = (String, usize)>,
    {
        let functions: Vec<Symbol> = functions
            .into_iter()
            .map(|(name, arity)| Symbol { name, arity })
            .collect();
        let relations: Vec<Symbol> = relations
            .into_iter()
            .map(|(name, arity)| Symbol { name, arity })
            .collect();
        let mut seen = BTreeSet::new();
        for s in functions.iter().chain(&relations) {
            if !is_identifier(&s.name) {
                return Err(LogicError::Signature(format!("bad symbol name {:?}", s.name)));
            }
            if !seen.insert(s.name.clone()) {
                return Err(LogicError::Signature(format!("duplicate symbol {}", s.name)));
            }
        }
        if let Some(r) = relations.iter().find(|r| r.arity == 0) {
            return Err(LogicError::Signature(format!("relation {} has arity 0", r.name)));
        }
        if !functions.iter().any(|f| f.arity == 0) {
            return Err(LogicError::Signature("no constant symbol".into()));
        }
        Ok(Signature { functions, relations })
    }

    /// Convenience constructor from `(name, arity)` string slices.
    pub fn from_slices(functions: &[(&str, usize)], relations: &[(&str, usize)]) -> Result<Self, LogicError> {
        Signature::new(
            functions.iter().map(|(n, a)| (n.to_string(), *a)),
            relations.iter().map(|(n, a)| (n.to_string(), *a)),
        )
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn relations(&self) -> &[Symbol] {
        &self.relations
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.iter().find(|s| s.name == name).map(|s| s.arity)
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.iter().find(|s| s.name == name).map(|s| s.arity)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|s| s.name == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "forall" | "FALSE")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Var { var: String },
    App { head: String, args: Vec<Term> },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var { var: name.to_string() }
    }

    pub fn app(head: &str, args: Vec<Term>) -> Term {
        Term::App { head: head.to_string(), args }
    }

    pub fn constant(head: &str) -> Term {
        Term::app(head, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    /// Depth of the term tree; constants and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var { .. } => 0,
            Term::App { args, .. } => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { var } => {
                out.insert(var.clone());
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub(crate) fn check(&self, sig: &Signature, vars: &[String]) -> Result<(), LogicError> {
        match self {
            Term::Var { var } => {
                if vars.contains(var) {
                    Ok(())
                } else {
                    Err(LogicError::UndeclaredSymbol(var.clone()))
                }
            }
            Term::App { head, args } => {
                let arity = sig
                    .function_arity(head)
                    .ok_or_else(|| LogicError::UndeclaredSymbol(head.clone()))?;
                if arity != args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: head.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig, vars))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { var } => f.write_str(var),
            Term::App { head, args } => {
                f.write_str(head)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A relation symbol applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub head: String,
    pub args: Vec<Term>,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Term::App { head: self.head.clone(), args: self.args.clone() })
    }
}

/// Quantifier-free formula. `Bottom` is the always-false filler atom used by padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matrix {
    Atom(Atom),
    Bottom,
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn atom(head: &str, args: Vec<Term>) -> Matrix {
        Matrix::Atom(Atom { head: head.to_string(), args })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(m: Matrix) -> Matrix {
        Matrix::Not(Box::new(m))
    }

    pub fn and(a: Matrix, b: Matrix) -> Matrix {
        Matrix::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Matrix, b: Matrix) -> Matrix {
        Matrix::Implies(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Matrix>) -> Option<Matrix> {
        parts.into_iter().reduce(Matrix::and)
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.push(a));
        out
    }

    pub(crate) fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Matrix::Atom(a) => f(a),
            Matrix::Bottom => {}
            Matrix::Not(m) => m.visit_atoms(f),
            Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Implies(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_vars(&mut out)));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Truth value with atom values supplied by `value`.
    pub fn eval(&self, value: &mut impl FnMut(&Atom) -> bool) -> bool {
        match self {
            Matrix::Atom(a) => value(a),
            Matrix::Bottom => false,
            Matrix::Not(m) => !m.eval(value),
            Matrix::And(a, b) => a.eval(value) && b.eval(value),
            Matrix::Or(a, b) => a.eval(value) || b.eval(value),
            Matrix::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    /// Number of nodes, counting each atom as one.
    pub fn size(&self) -> usize {
        match self {
            Matrix::Atom(_) | Matrix::Bottom => 1,
            Matrix::Not(m) => 1 + m.size(),
            Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub(crate) fn check(&self, sig: &Signature, vars: &[String]) -> Result<(), LogicError> {
        match self {
            Matrix::Atom(a) => {
                let arity = sig
                    .relation_arity(&a.head)
                    .ok_or_else(|| LogicError::UndeclaredSymbol(a.head.clone()))?;
                if arity != a.args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: a.head.clone(),
                        expected: arity,
                        found: a.args.len(),
                    });
                }
                a.args.iter().try_for_each(|t| t.check(sig, vars))
            }
            Matrix::Bottom => Ok(()),
            Matrix::Not(m) => m.check(sig, vars),
            Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Implies(a, b) => {
                a.check(sig, vars)?;
                b.check(sig, vars)
            }
        }
    }

    // Binding strength: `->` 1 (right assoc), `|` 2, `&` 3, `~` 4.
    fn precedence(&self) -> u8 {
        match self {
            Matrix::Implies(..) => 1,
            Matrix::Or(..) => 2,
            Matrix::And(..) => 3,
            _ => 4,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            f.write_str("(")?;
        }
        match self {
            Matrix::Atom(a) => write!(f, "{a}")?,
            Matrix::Bottom => f.write_str("FALSE")?,
            Matrix::Not(m) => {
                f.write_str("~")?;
                m.write_prec(f, 4)?;
            }
            Matrix::And(a, b) => {
                a.write_prec(f, 3)?;
                f.write_str(" & ")?;
                b.write_prec(f, 4)?;
            }
            Matrix::Or(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str(" | ")?;
                b.write_prec(f, 3)?;
            }
            Matrix::Implies(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str(" -> ")?;
                b.write_prec(f, 1)?;
            }
        }
        if prec < min {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

/// `forall x1,…,xk. matrix` over a signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalSentence {
    pub signature: Signature,
    pub vars: Vec<String>,
    pub matrix: Matrix,
}

impl UniversalSentence {
    pub fn new(signature: Signature, vars: Vec<String>, matrix: Matrix) -> Result<Self, LogicError> {
        if vars.is_empty() {
            return Err(LogicError::Signature("a universal sentence needs at least one variable".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !is_identifier(v) || !seen.insert(v) {
                return Err(LogicError::Signature(format!("bad or repeated variable {v:?}")));
            }
            if signature.function_arity(v).is_some() || signature.relation_arity(v).is_some() {
                return Err(LogicError::Signature(format!("variable {v} shadows a symbol")));
            }
        }
        matrix.check(&signature, &vars)?;
        Ok(UniversalSentence { signature, vars, matrix })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sentence serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let raw: UniversalSentence =
            serde_json::from_str(text).map_err(|e| LogicError::Json(e.to_string()))?;
        let sig = Signature::new(
            raw.signature.functions.iter().map(|s| (s.name.clone(), s.arity)),
            raw.signature.relations.iter().map(|s| (s.name.clone(), s.arity)),
        )?;
        UniversalSentence::new(sig, raw.vars, raw.matrix)
    }
}

impl fmt::Display for UniversalSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall {}. {}", self.vars.join(","), self.matrix)
    }
}
