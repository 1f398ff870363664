//! Formula text:
//!
//! ```text
//! phi ::= IDENT "(" phi ("," phi)* ")" | IDENT | "empty" | "all"
//!       | phi "|" phi | phi "&" phi | "!" phi
//!       | ("up" | "down" | "kup" | "kdown") "(" phi ")"
//!       | ("mu" | "nu") VAR "." phi | "(" phi ")"
//! ```
//!
//! `!` binds tighter than `&`, which binds tighter than `|`. A binder body
//! extends as far right as possible.

use super::{Term, TermError};
use crate::automata::is_identifier_char;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bar,
    Amp,
    Bang,
    Dot,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'|' => Tok::Bar,
            b'&' => Tok::Amp,
            b'!' => Tok::Bang,
            b'.' => Tok::Dot,
            c if is_identifier_char(c) => {
                let start = i;
                while i < b.len() && is_identifier_char(b[i]) {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(TermError::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{}'", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    out.push((b.len(), Tok::End));
    Ok(out)
}

const KEYWORDS: &[&str] = &["mu", "nu", "empty", "all", "up", "down", "kup", "kdown"];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    arity: &'a dyn Fn(&str) -> Option<usize>,
    bound: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), TermError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> TermError {
        TermError::Syntax {
            pos: self.pos(),
            msg,
        }
    }

    fn expr(&mut self) -> Result<Term, TermError> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            acc = acc.or(self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Term, TermError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, TermError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Ident(kw) if kw == "mu" || kw == "nu" => {
                self.bump();
                let x = match self.bump() {
                    Tok::Ident(x) if !is_keyword(&x) => x,
                    _ => return Err(self.error("expected a variable after binder".into())),
                };
                self.expect(Tok::Dot, "'.'")?;
                self.bound.push(x.clone());
                let body = self.expr();
                self.bound.pop();
                let body = body?;
                Ok(if kw == "mu" {
                    Term::mu(x, body)
                } else {
                    Term::nu(x, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, TermError> {
        self.expect(Tok::LParen, "'('")?;
        let mut out = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(out),
                _ => {
                    self.at -= 1;
                    return Err(self.error("expected ',' or ')'".into()));
                }
            }
        }
    }

    fn primary(&mut self) -> Result<Term, TermError> {
        let pos = self.pos();
        match self.bump() {
            Tok::LParen => {
                let t = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::Ident(name) => self.ident(name, pos),
            Tok::End => Err(TermError::Syntax {
                pos,
                msg: "unexpected end of formula".into(),
            }),
            _ => Err(TermError::Syntax {
                pos,
                msg: "expected a formula".into(),
            }),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Term, TermError> {
        let guard = |p: &mut Self, f: fn(Term) -> Term| -> Result<Term, TermError> {
            let mut a = p.args()?;
            if a.len() != 1 {
                return Err(TermError::Arity {
                    name: name.clone(),
                    expected: 1,
                    found: a.len(),
                });
            }
            Ok(f(a.pop().unwrap()))
        };
        match name.as_str() {
            "empty" => return Ok(Term::Empty),
            "all" => return Ok(Term::All),
            "up" => return guard(self, Term::up),
            "down" => return guard(self, Term::down),
            "kup" => return guard(self, Term::kup),
            "kdown" => return guard(self, Term::kdown),
            _ => {}
        }
        let called = *self.peek() == Tok::LParen;
        if !called && self.bound.contains(&name) {
            return Ok(Term::Var(name));
        }
        match (self.arity)(&name) {
            Some(n) => {
                let args = if called { self.args()? } else { Vec::new() };
                if args.len() != n {
                    return Err(TermError::Arity {
                        name,
                        expected: n,
                        found: args.len(),
                    });
                }
                Ok(Term::op(name, args))
            }
            None if called => Err(TermError::UnknownOperator { name, pos }),
            None => Ok(Term::Var(name)),
        }
    }
}

/// Parses a formula, resolving identifiers through `arity`. Bare identifiers
/// are bound variables first, then nullary operators, then free variables.
/// The result has fresh binder names and respects complement parity.
pub fn parse_term(text: &str, arity: &dyn Fn(&str) -> Option<usize>) -> Result<Term, TermError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        arity,
        bound: Vec::new(),
    };
    let t = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("unexpected trailing input".into()));
    }
    if let Some(x) = t.parity_violations().into_iter().next() {
        return Err(TermError::Parity(x));
    }
    Ok(t.freshen())
}
