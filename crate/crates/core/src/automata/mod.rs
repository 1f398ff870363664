//! Regular languages over a finite alphabet: the word-level region algebra.
//!
//! Everything here is a pure function over immutable automata. The subword
//! closures follow the classic constructions: `C↑` adds a loop on every state
//! for every letter, `C↓` doubles every letter transition by an epsilon
//! transition, and the kernels are obtained from them by complementation.

mod alphabet;
mod dfa;
mod nfa;
mod regex;

use std::fmt;

use thiserror::Error;

pub use alphabet::{Alphabet, Symbol, Word};
pub(crate) use alphabet::is_identifier_char;
pub use nfa::{Label, Nfa};
pub use regex::{compile_regex, dfa_to_regex};

pub(crate) use dfa::Dfa;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol '{0}'")]
    DuplicateSymbol(String),
    #[error("'{0}' is not a valid symbol name")]
    BadSymbolName(String),
    #[error("'{0}' is not made of declared symbols")]
    UnknownSymbol(String),
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("state {state} out of range for {count} states")]
    StateOutOfRange { state: usize, count: usize },
}

/// Minimal complete DFA with states numbered by breadth-first discovery under
/// the alphabet order. Two values are structurally equal iff they accept the
/// same language.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonicalDfa(pub(crate) Dfa);

impl CanonicalDfa {
    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.0.num_states()
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.0.accepting[state]
    }

    pub fn next(&self, state: usize, sym: Symbol) -> usize {
        self.0.step(state, sym)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.0.accepts(word)
    }

    /// Number of states from which no word is accepted (0 or 1).
    pub fn dead_state_count(&self) -> usize {
        self.0.dead_states().into_iter().filter(|&d| d).count()
    }

    pub fn is_empty(&self) -> bool {
        self.num_states() == 1 && !self.is_accepting(0)
    }

    pub fn is_universal(&self) -> bool {
        self.num_states() == 1 && self.is_accepting(0)
    }

    pub fn to_nfa(&self) -> Nfa {
        self.0.to_nfa()
    }
}

impl fmt::Debug for CanonicalDfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalDfa({} states, /{}/)", self.num_states(), dfa_to_regex(self))
    }
}

/// Boolean operator selector for [`boolean`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

/// Rational operator selector for [`rational`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RationalOp {
    Concat,
    Star,
    Reverse,
    Shuffle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

fn second<'a>(b: Option<&'a Nfa>, binary: bool) -> Result<Option<&'a Nfa>, AutomataError> {
    match (b, binary) {
        (Some(b), true) => Ok(Some(b)),
        (None, false) => Ok(None),
        // Arity misuse is a programming error at the call site.
        (Some(_), false) => panic!("unary operator applied to two operands"),
        (None, true) => panic!("binary operator applied to one operand"),
    }
}

pub fn boolean(op: BoolOp, a: &Nfa, b: Option<&Nfa>) -> Result<Nfa, AutomataError> {
    let binary = op != BoolOp::Complement;
    let b = second(b, binary)?;
    match op {
        BoolOp::Union => a.union(b.unwrap()),
        BoolOp::Intersection => a.intersection(b.unwrap()),
        BoolOp::Complement => Ok(a.complement()),
        BoolOp::Difference => a.difference(b.unwrap()),
    }
}

pub fn rational(op: RationalOp, a: &Nfa, b: Option<&Nfa>) -> Result<Nfa, AutomataError> {
    let binary = matches!(op, RationalOp::Concat | RationalOp::Shuffle);
    let b = second(b, binary)?;
    match op {
        RationalOp::Concat => a.concat(b.unwrap()),
        RationalOp::Star => Ok(a.star()),
        RationalOp::Reverse => Ok(a.reverse()),
        RationalOp::Shuffle => a.shuffle(b.unwrap()),
    }
}

/// `Left`: `{v | ∃u∈a, uv∈b}`. `Right`: `{u | ∃v∈b, uv∈a}`.
pub fn residual(side: Side, a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    match side {
        Side::Left => a.left_residual(b),
        Side::Right => a.right_residual(b),
    }
}

pub fn up_closure(a: &Nfa) -> Nfa {
    a.up_closure()
}

pub fn down_closure(a: &Nfa) -> Nfa {
    a.down_closure()
}

pub fn kernel(direction: Direction, a: &Nfa) -> Nfa {
    match direction {
        Direction::Up => a.up_kernel(),
        Direction::Down => a.down_kernel(),
    }
}

/// Queries answered by [`decide`].
#[derive(Debug, Clone)]
pub enum Query<'a> {
    Empty,
    Universal,
    Member(&'a [Symbol]),
    Equal(&'a Nfa),
    Subset(&'a Nfa),
}

pub fn decide(query: Query<'_>, a: &Nfa) -> Result<bool, AutomataError> {
    match query {
        Query::Empty => Ok(a.is_empty()),
        Query::Universal => Ok(a.is_universal()),
        Query::Member(w) => {
            if w.iter().any(|s| s.index() >= a.alphabet().len()) {
                return Err(AutomataError::AlphabetMismatch);
            }
            Ok(a.contains(w))
        }
        Query::Equal(b) => a.equals(b),
        Query::Subset(b) => a.is_subset(b),
    }
}

pub fn canonicalize(a: &Nfa) -> CanonicalDfa {
    a.canonicalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn re(p: &str) -> Nfa {
        compile_regex(p, &ab()).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let x = re("(a|b)*");
        let y = re("(a*b*)*");
        assert_eq!(canonicalize(&x), canonicalize(&y));
        let e = canonicalize(&re("{}"));
        assert_eq!(e.num_states(), 1);
        assert!(!e.is_accepting(0));
        let eps = canonicalize(&re("()"));
        assert_eq!(eps.num_states(), 2);
        assert!(eps.is_accepting(0));
        assert_eq!(eps.dead_state_count(), 1);
        assert_eq!(canonicalize(&re(".*")).dead_state_count(), 0);
    }

    #[test]
    fn kernel_examples() {
        // K↑(Σ*a) = ∅ since appending b leaves the language.
        assert!(kernel(Direction::Up, &re(".*a")).is_empty());
        assert!(kernel(Direction::Down, &re(".*")).is_universal());
        let c = up_closure(&re("ab"));
        assert!(kernel(Direction::Up, &c).equals(&c).unwrap());
    }

    #[test]
    fn decide_examples() {
        assert!(decide(Query::Empty, &re("{}")).unwrap());
        let al = ab();
        let w = al.parse_word("abba").unwrap();
        assert!(decide(Query::Member(&w), &re(".*a.*")).unwrap());
        let up = up_closure(&re("ab"));
        assert!(decide(Query::Equal(&re(".*a.*b.*")), &up).unwrap());
        assert!(decide(Query::Subset(&re(".*")), &up).unwrap());
        assert!(!decide(Query::Universal, &up).unwrap());
    }

    #[test]
    fn residual_right_of_contains_a() {
        // (Σ*aΣ*){a}⁻¹ = Σ*: u·a always contains a.
        let r = residual(Side::Right, &re(".*a.*"), &re("a")).unwrap();
        assert!(r.is_universal());
    }

    #[test]
    fn down_closure_of_words_ending_in_a() {
        assert!(down_closure(&re(".*a")).is_universal());
        let d = down_closure(&re("a|b"));
        let eps: Vec<Symbol> = vec![];
        assert!(d.contains(&eps));
    }

    #[test]
    fn operator_selectors() {
        let a = re("a");
        let b = re("b");
        let u = boolean(BoolOp::Union, &a, Some(&b)).unwrap();
        assert!(u.equals(&re("a|b")).unwrap());
        let d = boolean(BoolOp::Difference, &u, Some(&a)).unwrap();
        assert!(d.equals(&b).unwrap());
        let s = rational(RationalOp::Star, &re("{}"), None).unwrap();
        assert!(s.equals(&re("()")).unwrap());
        let sh = rational(RationalOp::Shuffle, &a, Some(&b)).unwrap();
        assert!(sh.equals(&re("ab|ba")).unwrap());
    }
}
