//! Branching-time formulas over region atoms:
//!
//! ```text
//! f ::= f "|" f | f "&" f | "!" f | "(" f ")" | NAME | "all" | "empty"
//!     | ("EX" | "AX" | "EF" | "AG" | "AF" | "EG") f
//!     | "E[" f "U" f "]" | "A[" f "U" f "]" | "A[" f "R" f "]"
//! ```

use super::{exists_until, forall_release, pre, wpre, CompileError, Refusal};
use crate::automata::is_identifier_char;
use crate::mu::Term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ctl {
    Atom(String),
    All,
    Empty,
    Not(Box<Ctl>),
    And(Box<Ctl>, Box<Ctl>),
    Or(Box<Ctl>, Box<Ctl>),
    EX(Box<Ctl>),
    AX(Box<Ctl>),
    EF(Box<Ctl>),
    AG(Box<Ctl>),
    AF(Box<Ctl>),
    EG(Box<Ctl>),
    EU(Box<Ctl>, Box<Ctl>),
    AU(Box<Ctl>, Box<Ctl>),
    AR(Box<Ctl>, Box<Ctl>),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: impl Into<String>) -> CompileError {
        CompileError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip();
        let b = self.text.as_bytes();
        let start = self.pos;
        let mut end = start;
        while end < b.len() && is_identifier_char(b[end]) {
            end += 1;
        }
        (end > start).then(|| {
            self.pos = end;
            self.text[start..end].to_string()
        })
    }

    fn or(&mut self) -> Result<Ctl, CompileError> {
        let mut acc = self.and()?;
        while self.eat("|") {
            acc = Ctl::Or(Box::new(acc), Box::new(self.and()?));
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Ctl, CompileError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = Ctl::And(Box::new(acc), Box::new(self.unary()?));
        }
        Ok(acc)
    }

    fn bracket(&mut self, ops: &[&str]) -> Result<(Ctl, String, Ctl), CompileError> {
        let lhs = self.or()?;
        let op = self.ident().filter(|o| ops.contains(&o.as_str()));
        let op = op.ok_or_else(|| self.error(format!("expected {}", ops.join(" or "))))?;
        let rhs = self.or()?;
        if !self.eat("]") {
            return Err(self.error("expected ']'"));
        }
        Ok((lhs, op, rhs))
    }

    fn unary(&mut self) -> Result<Ctl, CompileError> {
        if self.eat("!") {
            return Ok(Ctl::Not(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let f = self.or()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(f);
        }
        let Some(id) = self.ident() else {
            return Err(self.error("expected a formula"));
        };
        let b = |f: Ctl| Box::new(f);
        match id.as_str() {
            "E" | "A" if self.eat("[") => {
                let ops: &[&str] = if id == "E" { &["U"] } else { &["U", "R"] };
                let (l, op, r) = self.bracket(ops)?;
                Ok(match (id.as_str(), op.as_str()) {
                    ("E", _) => Ctl::EU(b(l), b(r)),
                    (_, "U") => Ctl::AU(b(l), b(r)),
                    _ => Ctl::AR(b(l), b(r)),
                })
            }
            "EX" | "AX" | "EF" | "AG" | "AF" | "EG" => {
                let f = b(self.unary()?);
                Ok(match id.as_str() {
                    "EX" => Ctl::EX(f),
                    "AX" => Ctl::AX(f),
                    "EF" => Ctl::EF(f),
                    "AG" => Ctl::AG(f),
                    "AF" => Ctl::AF(f),
                    _ => Ctl::EG(f),
                })
            }
            "EGF" => Ok(Ctl::EG(b(Ctl::EF(b(self.unary()?))))),
            "all" => Ok(Ctl::All),
            "empty" => Ok(Ctl::Empty),
            _ => Ok(Ctl::Atom(id)),
        }
    }
}

pub fn parse_ctl(text: &str) -> Result<Ctl, CompileError> {
    let mut p = Parser { text, pos: 0 };
    let f = p.or()?;
    p.skip();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Compiles bottom-up. Complements only ever apply to closed subterms, so
/// the result respects complement parity.
pub fn compile_ctl(f: &Ctl) -> Result<Term, CompileError> {
    Ok(compile(f)?.freshen())
}

fn compile(f: &Ctl) -> Result<Term, CompileError> {
    Ok(match f {
        Ctl::Atom(n) => Term::constant(n.clone()),
        Ctl::All => Term::All,
        Ctl::Empty => Term::Empty,
        Ctl::Not(g) => compile(g)?.not(),
        Ctl::And(a, b) => compile(a)?.and(compile(b)?),
        Ctl::Or(a, b) => compile(a)?.or(compile(b)?),
        Ctl::EX(g) => pre(compile(g)?),
        Ctl::AX(g) => wpre(compile(g)?),
        Ctl::EU(a, b) => exists_until(compile(a)?, compile(b)?),
        Ctl::EF(g) => exists_until(Term::All, compile(g)?),
        Ctl::AR(a, b) => forall_release(compile(a)?, compile(b)?),
        Ctl::AG(g) => forall_release(Term::Empty, compile(g)?),
        Ctl::AF(_) | Ctl::AU(..) => return Err(CompileError::Refused(Refusal::ForallEventually)),
        Ctl::EG(g) if matches!(**g, Ctl::EF(_)) => {
            return Err(CompileError::Refused(Refusal::ExistsAlwaysEventually))
        }
        Ctl::EG(_) => {
            return Err(CompileError::OutsideFragment(
                "EG f is not built from EX, EU, conjunction and negation".into(),
            ))
        }
    })
}
