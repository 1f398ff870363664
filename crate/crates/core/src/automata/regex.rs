//! Text syntax for regular languages.
//!
//! ```text
//! alt     ::= concat ("|" concat)*
//! concat  ::= unary*
//! unary   ::= "~" unary | atom ("*" | "+" | "?")*
//! atom    ::= SYMBOL | "." | "(" alt ")" | "{" "}"
//! ```
//!
//! `()` is the empty word, `{}` the empty language and `~e` the complement.
//! Symbols are identifiers of the alphabet; a run of identifier characters is
//! split into symbols by longest match, so `ab` reads as `a b` when only `a`
//! and `b` are declared.

use super::alphabet::{Alphabet, Symbol};
use super::dfa::Dfa;
use super::nfa::Nfa;
use super::{AutomataError, CanonicalDfa};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Sym(Symbol),
    Bar,
    Star,
    Plus,
    Quest,
    LParen,
    RParen,
    Dot,
    LBrace,
    RBrace,
    Tilde,
}

fn lex(text: &str, alphabet: &Alphabet) -> Result<Vec<(usize, Tok)>, AutomataError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '|' => Tok::Bar,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '?' => Tok::Quest,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '.' => Tok::Dot,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '~' => Tok::Tilde,
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let run = &text[start..i];
                let syms = alphabet
                    .tokenize_run(run)
                    .ok_or_else(|| AutomataError::UnknownSymbol(run.to_string()))?;
                out.extend(syms.into_iter().map(|s| (start, Tok::Sym(s))));
                continue;
            }
            other => {
                return Err(AutomataError::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T, AutomataError> {
        Err(AutomataError::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        })
    }

    fn alt(&mut self) -> Result<Nfa, AutomataError> {
        let mut acc = self.concat()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            let rhs = self.concat()?;
            acc = acc.union(&rhs)?;
        }
        Ok(acc)
    }

    fn concat(&mut self) -> Result<Nfa, AutomataError> {
        let mut acc = Nfa::epsilon(self.alphabet);
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Bar | Tok::RParen) {
                break;
            }
            let rhs = self.unary()?;
            acc = acc.concat(&rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Nfa, AutomataError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            return Ok(self.unary()?.complement());
        }
        let mut base = self.atom()?;
        loop {
            base = match self.peek() {
                Some(Tok::Star) => base.star(),
                Some(Tok::Plus) => base.plus(),
                Some(Tok::Quest) => base.optional(),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Nfa, AutomataError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of pattern"),
        };
        self.pos += 1;
        match tok {
            Tok::Sym(s) => Ok(Nfa::symbol(self.alphabet, s)),
            Tok::Dot => Ok(Nfa::any_symbol(self.alphabet)),
            Tok::LBrace => {
                if self.peek() != Some(&Tok::RBrace) {
                    return self.err("expected '}'");
                }
                self.pos += 1;
                Ok(Nfa::empty(self.alphabet))
            }
            Tok::LParen => {
                let inner = self.alt()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                self.err("unexpected token")
            }
        }
    }
}

/// Compiles a pattern into an automaton accepting exactly its language.
pub fn compile_regex(pattern: &str, alphabet: &Alphabet) -> Result<Nfa, AutomataError> {
    let toks = lex(pattern, alphabet)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: pattern.len(),
        alphabet,
    };
    let nfa = p.alt()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected token");
    }
    Ok(nfa.trim())
}

// ---- printing ----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Re {
    Empty,
    Eps,
    Sym(Symbol),
    Cat(Vec<Re>),
    Alt(Vec<Re>),
    Star(Box<Re>),
}

fn alt(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Empty, x) | (x, Re::Empty) => x,
        (a, b) => {
            let mut items = Vec::new();
            for x in [a, b] {
                match x {
                    Re::Alt(xs) => items.extend(xs),
                    x => items.push(x),
                }
            }
            let mut dedup: Vec<Re> = Vec::new();
            for x in items {
                if !dedup.contains(&x) {
                    dedup.push(x);
                }
            }
            // ε | x x* is x*, and ε | x* is x*.
            if dedup.contains(&Re::Eps) {
                for x in dedup.iter_mut() {
                    if let Re::Cat(items) = x {
                        if let [first, Re::Star(s)] = items.as_slice() {
                            if **s == *first {
                                *x = Re::Star(s.clone());
                            }
                        }
                    }
                }
            }
            if dedup.contains(&Re::Eps) && dedup.iter().any(|x| matches!(x, Re::Star(_))) {
                dedup.retain(|x| *x != Re::Eps);
            }
            if dedup.len() == 1 {
                dedup.pop().unwrap()
            } else {
                Re::Alt(dedup)
            }
        }
    }
}

fn cat(a: Re, b: Re) -> Re {
    match (a, b) {
        (Re::Empty, _) | (_, Re::Empty) => Re::Empty,
        (Re::Eps, x) | (x, Re::Eps) => x,
        (a, b) => {
            let mut items = Vec::new();
            for x in [a, b] {
                match x {
                    Re::Cat(xs) => items.extend(xs),
                    x => items.push(x),
                }
            }
            Re::Cat(items)
        }
    }
}

fn star(a: Re) -> Re {
    match a {
        Re::Empty | Re::Eps => Re::Eps,
        Re::Star(x) => Re::Star(x),
        Re::Alt(xs) if xs.contains(&Re::Eps) => {
            let rest: Vec<Re> = xs.into_iter().filter(|x| *x != Re::Eps).collect();
            star(rest.into_iter().fold(Re::Empty, alt))
        }
        x => Re::Star(Box::new(x)),
    }
}

struct Printer<'a> {
    alphabet: &'a Alphabet,
}

impl Printer<'_> {
    fn is_any(&self, items: &[Re]) -> bool {
        items.len() == self.alphabet.len()
            && self
                .alphabet
                .symbols()
                .all(|s| items.contains(&Re::Sym(s)))
    }

    /// `prec`: 0 = alternation context, 1 = concatenation, 2 = postfix operand.
    fn print(&self, re: &Re, prec: u8, out: &mut String) {
        match re {
            Re::Empty => out.push_str("{}"),
            Re::Eps => out.push_str("()"),
            Re::Sym(s) => out.push_str(self.alphabet.name(*s)),
            Re::Alt(items) if items.len() > 1 && self.is_any(items) => out.push('.'),
            Re::Alt(items) => {
                let has_eps = items.contains(&Re::Eps);
                let rest: Vec<&Re> = items.iter().filter(|x| **x != Re::Eps).collect();
                if has_eps {
                    // Render as (rest)?
                    let inner = if rest.len() == 1 {
                        rest[0].clone()
                    } else {
                        Re::Alt(rest.into_iter().cloned().collect())
                    };
                    self.print(&inner, 2, out);
                    out.push('?');
                    return;
                }
                let paren = prec > 0;
                if paren {
                    out.push('(');
                }
                for (i, x) in rest.iter().enumerate() {
                    if i > 0 {
                        out.push('|');
                    }
                    self.print(x, 0, out);
                }
                if paren {
                    out.push(')');
                }
            }
            Re::Cat(items) => {
                let paren = prec > 1;
                if paren {
                    out.push('(');
                }
                let sep = if self.alphabet.is_single_char() { "" } else { " " };
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    self.print(x, 1, out);
                }
                if paren {
                    out.push(')');
                }
            }
            Re::Star(x) => {
                self.print(x, 2, out);
                out.push('*');
            }
        }
    }
}

/// Renders a canonical automaton as a pattern by state elimination in state
/// order. The output depends only on the language.
pub fn dfa_to_regex(dfa: &CanonicalDfa) -> String {
    let d: &Dfa = &dfa.0;
    let alphabet = &d.alphabet;
    let dead = d.dead_states();
    let live: Vec<usize> = (0..d.num_states()).filter(|&s| !dead[s]).collect();
    if live.is_empty() {
        return "{}".into();
    }
    // Generalized automaton: index 0 = fresh start, 1..=k live states, k+1 = fresh final.
    let k = live.len();
    let mut pos = vec![usize::MAX; d.num_states()];
    for (i, &s) in live.iter().enumerate() {
        pos[s] = i + 1;
    }
    let size = k + 2;
    let mut r = vec![vec![Re::Empty; size]; size];
    r[0][pos[0]] = Re::Eps;
    for &s in &live {
        for a in alphabet.symbols() {
            let t = d.step(s, a);
            if !dead[t] {
                let cell = std::mem::replace(&mut r[pos[s]][pos[t]], Re::Empty);
                r[pos[s]][pos[t]] = alt(cell, Re::Sym(a));
            }
        }
        if d.accepting[s] {
            r[pos[s]][k + 1] = Re::Eps;
        }
    }
    for x in 1..=k {
        let loop_re = star(r[x][x].clone());
        for p in 0..size {
            if p == x || r[p][x] == Re::Empty {
                continue;
            }
            for q in 0..size {
                if q == x || r[x][q] == Re::Empty {
                    continue;
                }
                let through = cat(cat(r[p][x].clone(), loop_re.clone()), r[x][q].clone());
                let cell = std::mem::replace(&mut r[p][q], Re::Empty);
                r[p][q] = alt(cell, through);
            }
        }
        for p in 0..size {
            r[p][x] = Re::Empty;
            r[x][p] = Re::Empty;
        }
    }
    let mut out = String::new();
    Printer { alphabet }.print(&r[0][k + 1], 0, &mut out);
    out
}
