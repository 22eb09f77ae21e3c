//! Concrete syntax for universal sentences.
//!
//! ```text
//! sentence := "forall" var ("," var)* "." matrix
//! matrix   := disj ("->" matrix)?
//! disj     := conj ("|" conj)*
//! conj     := unary ("&" unary)*
//! unary    := "~" unary | "(" matrix ")" | "FALSE" | Rel "(" term ("," term)* ")"
//! term     := var | const | fun "(" term ("," term)* ")"
//! ```
//!
//! A sentence file prefixes the sentence with declaration lines
//! `functions c/0 f/1` and `relations R/2`; `#` starts a comment.

use super::syntax::{Matrix, Signature, Term, UniversalSentence};
use super::LogicError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Arrow,
}

struct Lexer;

impl Lexer {
    fn tokens(text: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let tok = match c {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '~' => Tok::Not,
                '&' => Tok::And,
                '|' => Tok::Or,
                '-' if bytes.get(i + 1) == Some(&b'>') => {
                    out.push((i, Tok::Arrow));
                    i += 2;
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    out.push((start, Tok::Ident(text[start..i].to_string())));
                    continue;
                }
                other => {
                    return Err(LogicError::Syntax { pos: i, msg: format!("unexpected character {other:?}") })
                }
            };
            out.push((i, tok));
            i += 1;
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LogicError> {
        Err(LogicError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), LogicError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn sentence(&mut self) -> Result<(Vec<String>, Matrix), LogicError> {
        if self.ident()? != "forall" {
            self.pos -= 1;
            return self.err("expected `forall`");
        }
        let mut vars = vec![self.ident()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            vars.push(self.ident()?);
        }
        self.expect(Tok::Dot, "`.` after variable list")?;
        self.vars = vars.clone();
        let m = self.matrix()?;
        if self.pos != self.toks.len() {
            return self.err("trailing input");
        }
        Ok((vars, m))
    }

    fn matrix(&mut self) -> Result<Matrix, LogicError> {
        let lhs = self.disj()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.matrix()?;
            return Ok(Matrix::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Matrix, LogicError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Matrix::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Matrix, LogicError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Matrix::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Matrix, LogicError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Matrix::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let m = self.matrix()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(m)
            }
            Some(Tok::Ident(name)) if name == "FALSE" => {
                self.pos += 1;
                Ok(Matrix::Bottom)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident()?;
                let Some(arity) = self.sig.relation_arity(&name) else {
                    return Err(LogicError::UndeclaredSymbol(name));
                };
                let args = self.args()?;
                if args.len() != arity {
                    return Err(LogicError::ArityMismatch { symbol: name, expected: arity, found: args.len() });
                }
                Ok(Matrix::atom(&name, args))
            }
            _ => self.err("expected formula"),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, LogicError> {
        if self.peek() != Some(&Tok::LParen) {
            return Ok(Vec::new());
        }
        self.pos += 1;
        let mut args = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let name = self.ident()?;
        if self.vars.contains(&name) {
            return Ok(Term::Var { var: name });
        }
        let Some(arity) = self.sig.function_arity(&name) else {
            return Err(LogicError::UndeclaredSymbol(name));
        };
        let args = self.args()?;
        if args.len() != arity {
            return Err(LogicError::ArityMismatch { symbol: name, expected: arity, found: args.len() });
        }
        Ok(Term::App { head: name, args })
    }
}

/// Parses `forall v1,…,vk. <matrix>` over a given signature.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<UniversalSentence, LogicError> {
    let mut p = Parser { toks: Lexer::tokens(text)?, pos: 0, end: text.len(), sig, vars: Vec::new() };
    let (vars, matrix) = p.sentence()?;
    UniversalSentence::new(sig.clone(), vars, matrix)
}

/// Parses a ground term over `sig` (no variables allowed).
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, LogicError> {
    let mut p = Parser { toks: Lexer::tokens(text)?, pos: 0, end: text.len(), sig, vars: Vec::new() };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

fn parse_decls(line: &str) -> Result<Vec<(String, usize)>, LogicError> {
    line.split_whitespace()
        .map(|d| {
            let (name, arity) = d
                .split_once('/')
                .ok_or_else(|| LogicError::Signature(format!("declaration {d:?} is not name/arity")))?;
            let arity = arity
                .parse()
                .map_err(|_| LogicError::Signature(format!("bad arity in {d:?}")))?;
            Ok((name.to_string(), arity))
        })
        .collect()
}

/// Parses a sentence file: declaration lines followed by the sentence text.
/// A file whose first non-blank character is `{` is read as JSON instead.
pub fn parse_sentence_file(text: &str) -> Result<UniversalSentence, LogicError> {
    if text.trim_start().starts_with('{') {
        return UniversalSentence::from_json(text);
    }
    let mut functions = Vec::new();
    let mut relations = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("functions") {
            functions.extend(parse_decls(rest)?);
        } else if let Some(rest) = trimmed.strip_prefix("relations") {
            relations.extend(parse_decls(rest)?);
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    let sig = Signature::new(functions, relations)?;
    parse_sentence(body.trim(), &sig)
}

/// Renders a sentence back into the sentence-file format.
pub fn print_sentence_file(s: &UniversalSentence) -> String {
    let decl = |syms: &[super::syntax::Symbol]| {
        syms.iter().map(|s| format!("{}/{}", s.name, s.arity)).collect::<Vec<_>>().join(" ")
    };
    format!(
        "functions {}\nrelations {}\n{}\n",
        decl(s.signature.functions()),
        decl(s.signature.relations()),
        s
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::from_slices(&[("c", 0), ("f", 1)], &[("R", 2), ("P", 1)]).unwrap()
    }

    #[test]
    fn parses_two_variable_sentence() {
        let s = parse_sentence("forall x,y. ~R(x,x) & (R(x,y) -> R(x,y))", &sig()).unwrap();
        assert_eq!(s.arity(), 2);
        assert_eq!(s.to_string(), "forall x,y. ~R(x,x) & (R(x,y) -> R(x,y))");
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let err = parse_sentence("forall x. R(x)", &sig()).unwrap_err();
        assert!(matches!(err, LogicError::ArityMismatch { ref symbol, expected: 2, found: 1 } if symbol == "R"));
    }

    #[test]
    fn undeclared_and_syntax_errors() {
        assert!(matches!(parse_sentence("forall x. Q(x)", &sig()), Err(LogicError::UndeclaredSymbol(_))));
        assert!(matches!(parse_sentence("forall x. P(g(x))", &sig()), Err(LogicError::UndeclaredSymbol(_))));
        let err = parse_sentence("forall x. P(x) &", &sig()).unwrap_err();
        assert!(matches!(err, LogicError::Syntax { pos: 16, .. }), "{err:?}");
        assert!(matches!(parse_sentence("forall x P(x)", &sig()), Err(LogicError::Syntax { .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let s = parse_sentence("forall x. P(x) -> P(c) -> P(x) | P(c) & ~P(x)", &sig()).unwrap();
        let Matrix::Implies(_, rhs) = &s.matrix else { panic!() };
        assert!(matches!(**rhs, Matrix::Implies(..)));
        assert_eq!(s.to_string(), "forall x. P(x) -> P(c) -> P(x) | P(c) & ~P(x)");
        let t = parse_sentence("forall x. (P(x) -> P(c)) -> P(x)", &sig()).unwrap();
        assert_eq!(t.to_string(), "forall x. (P(x) -> P(c)) -> P(x)");
    }

    #[test]
    fn sentence_file_and_json() {
        let text = "functions c/0 f/1\nrelations R/2 # order\nforall x,y. R(x,f(y)) | FALSE\n";
        let s = parse_sentence_file(text).unwrap();
        assert_eq!(parse_sentence_file(&print_sentence_file(&s)).unwrap(), s);
        let json = s.to_json();
        assert!(json.contains("\"head\"") && json.contains("\"vars\"") && json.contains("\"matrix\""));
        assert_eq!(parse_sentence_file(&json).unwrap(), s);
    }
}
