use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::PropError;

/// Propositional formula over variables `x1, x2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PropFormula {
    Var(u32),
    Const(bool),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(i: u32) -> Self {
        assert!(i >= 1, "variables are numbered from 1");
        PropFormula::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::or(PropFormula::not(a), b)
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = PropFormula>) -> Self {
        parts.into_iter().reduce(PropFormula::and).unwrap_or(PropFormula::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn or_all(parts: impl IntoIterator<Item = PropFormula>) -> Self {
        parts.into_iter().reduce(PropFormula::or).unwrap_or(PropFormula::Const(false))
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            PropFormula::Var(i) => {
                out.insert(*i);
            }
            PropFormula::Const(_) => {}
            PropFormula::Not(f) => f.collect_vars(out),
            PropFormula::And(a, b) | PropFormula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn max_var(&self) -> u32 {
        self.vars().last().copied().unwrap_or(0)
    }

    /// Evaluates with `value(i)` giving the value of `x_i`.
    pub fn eval_with(&self, value: &impl Fn(u32) -> bool) -> bool {
        match self {
            PropFormula::Var(i) => value(*i),
            PropFormula::Const(b) => *b,
            PropFormula::Not(f) => !f.eval_with(value),
            PropFormula::And(a, b) => a.eval_with(value) && b.eval_with(value),
            PropFormula::Or(a, b) => a.eval_with(value) || b.eval_with(value),
        }
    }

    /// Evaluates under an assignment; variables outside its domain read as false.
    pub fn eval(&self, a: &Assignment) -> bool {
        self.eval_with(&|i| a.get(i).unwrap_or(false))
    }

    pub fn size(&self) -> usize {
        match self {
            PropFormula::Var(_) | PropFormula::Const(_) => 1,
            PropFormula::Not(f) => 1 + f.size(),
            PropFormula::And(a, b) | PropFormula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Brute-force satisfiability over all assignments to `x1..=max_var`.
    pub fn is_satisfiable_brute(&self) -> bool {
        let n = self.max_var();
        assert!(n <= 24, "truth table too large");
        (0u64..1 << n).any(|bits| self.eval_with(&|i| bits >> (i - 1) & 1 == 1))
    }

    pub fn is_tautology_brute(&self) -> bool {
        !PropFormula::not(self.clone()).is_satisfiable_brute()
    }

    fn prec(&self) -> u8 {
        match self {
            PropFormula::Or(..) => 1,
            PropFormula::And(..) => 2,
            _ => 3,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            PropFormula::Var(i) => write!(f, "x{i}")?,
            PropFormula::Const(true) => f.write_str("T")?,
            PropFormula::Const(false) => f.write_str("F")?,
            PropFormula::Not(a) => {
                f.write_str("~")?;
                a.write_prec(f, 3)?;
            }
            PropFormula::And(a, b) => {
                a.write_prec(f, 2)?;
                f.write_str(" & ")?;
                b.write_prec(f, 3)?;
            }
            PropFormula::Or(a, b) => {
                a.write_prec(f, 1)?;
                f.write_str(" | ")?;
                b.write_prec(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

struct FormulaParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl FormulaParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, PropError> {
        Err(PropError::Syntax(format!("{msg} at offset {}", self.pos)))
    }

    fn or(&mut self) -> Result<PropFormula, PropError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            lhs = PropFormula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<PropFormula, PropError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'&') {
            self.pos += 1;
            lhs = PropFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PropFormula, PropError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(PropFormula::not(self.unary()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.or()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(PropFormula::Const(true))
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(PropFormula::Const(false))
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
                match digits.parse::<u32>() {
                    Ok(i) if i >= 1 && !digits.starts_with('0') => Ok(PropFormula::Var(i)),
                    _ => self.err("bad variable index"),
                }
            }
            _ => self.err("expected formula"),
        }
    }
}

impl FromStr for PropFormula {
    type Err = PropError;

    /// Grammar: `or := and ('|' and)*`, `and := unary ('&' unary)*`,
    /// `unary := '~' unary | '(' or ')' | 'T' | 'F' | 'x' N`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = FormulaParser { s: s.as_bytes(), pos: 0 };
        let f = p.or()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(f)
    }
}

/// Total assignment to `x1..=xn`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        (var as usize).checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Restriction to the first `n` variables.
    pub fn restrict(&self, n: usize) -> Assignment {
        Assignment { values: self.values[..n.min(self.values.len())].to_vec() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_round_trip() {
        for text in ["x1 | ~x1", "(x1 | x2) & ~(x3 & T)", "~~x12 & F | x2 & x3", "x1 & (x2 & x3)"] {
            let f: PropFormula = text.parse().unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(f.to_string().parse::<PropFormula>().unwrap(), f);
        }
        assert!("x0".parse::<PropFormula>().is_err());
        assert!("x1 |".parse::<PropFormula>().is_err());
        assert!("x01".parse::<PropFormula>().is_err());
    }

    #[test]
    fn brute_force_semantics() {
        let f: PropFormula = "x1 | ~x1".parse().unwrap();
        assert!(f.is_tautology_brute());
        let g: PropFormula = "x1 & ~x1".parse().unwrap();
        assert!(!g.is_satisfiable_brute());
    }
}
