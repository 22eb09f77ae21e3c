use std::fmt::Write as _;

use super::cnf::{Cnf, Lit};
use super::PropError;

/// Parses DIMACS CNF. Comment lines start with `c`; clauses end with `0` and
/// may span lines. The result is normalized.
pub fn read_dimacs(text: &str) -> Result<Cnf, PropError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if header.is_some() || parts.len() != 3 || parts[0] != "cnf" {
                return Err(PropError::Dimacs(format!("line {}: bad header", lineno + 1)));
            }
            let nv = parts[1].parse().map_err(|_| PropError::Dimacs("bad variable count".into()))?;
            let nc = parts[2].parse().map_err(|_| PropError::Dimacs("bad clause count".into()))?;
            header = Some((nv, nc));
            continue;
        }
        let (nv, _) = header.ok_or_else(|| PropError::Dimacs("clause before header".into()))?;
        for tok in line.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| PropError::Dimacs(format!("line {}: bad literal {tok}", lineno + 1)))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() > nv {
                return Err(PropError::Dimacs(format!("line {}: variable {} out of range", lineno + 1, l.abs())));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, nc) = header.ok_or_else(|| PropError::Dimacs("missing header".into()))?;
    if !current.is_empty() {
        return Err(PropError::Dimacs("unterminated clause".into()));
    }
    if clauses.len() != nc {
        return Err(PropError::Dimacs(format!("header declares {nc} clauses, found {}", clauses.len())));
    }
    Ok(Cnf { num_vars, clauses }.normalized())
}

pub fn write_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_normalization() {
        let text = "c example\np cnf 3 3\n1 -2 1 0\n2 -2 0\n3\n-1 0\n";
        let cnf = read_dimacs(text).unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![-1, 3]]);
        assert_eq!(read_dimacs(&write_dimacs(&cnf)).unwrap(), cnf);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_dimacs("1 2 0").is_err());
        assert!(read_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(read_dimacs("p cnf 2 1\n1 2\n").is_err());
        assert!(read_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    }
}
