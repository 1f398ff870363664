use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::AutomataError;

/// Index of a symbol inside its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word is a sequence of symbol indices.
pub type Word = Vec<Symbol>;

#[derive(Debug)]
struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, Symbol>,
    single_char: bool,
}

/// Ordered, nonempty, finite set of message symbols.
///
/// Cloning is cheap. Two alphabets are equal when they list the same symbols
/// in the same order; canonical automata depend on that order.
#[derive(Clone)]
pub struct Alphabet(Arc<Inner>);

/// Name used for the separator letter of the multi-track encoding. It can never
/// collide with a declared symbol since symbols are identifiers.
pub(crate) const SEPARATOR_NAME: &str = "#";

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AutomataError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(AutomataError::EmptyAlphabet);
        }
        for s in &symbols {
            if !is_identifier(s) {
                return Err(AutomataError::BadSymbolName(s.clone()));
            }
        }
        Self::build(symbols)
    }

    fn build(symbols: Vec<String>) -> Result<Self, AutomataError> {
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), Symbol(i as u32)).is_some() {
                return Err(AutomataError::DuplicateSymbol(s.clone()));
            }
        }
        let single_char = symbols.iter().all(|s| s.chars().count() == 1);
        Ok(Alphabet(Arc::new(Inner {
            symbols,
            index,
            single_char,
        })))
    }

    /// The same alphabet plus one trailing separator letter.
    pub(crate) fn with_separator(&self) -> (Alphabet, Symbol) {
        let mut symbols = self.0.symbols.clone();
        let sep = Symbol(symbols.len() as u32);
        symbols.push(SEPARATOR_NAME.to_string());
        (Self::build(symbols).expect("separator is fresh"), sep)
    }

    pub fn len(&self) -> usize {
        self.0.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.0.symbols.len() as u32).map(Symbol)
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.0.symbols[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.0.symbols
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.0.index.get(name).copied()
    }

    /// True when every symbol is one character long, so words can be written
    /// without separating spaces.
    pub fn is_single_char(&self) -> bool {
        self.0.single_char
    }

    /// Splits an identifier run into declared symbols, longest match first.
    pub fn tokenize_run(&self, run: &str) -> Option<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut rest = run;
        while !rest.is_empty() {
            let mut best: Option<(usize, Symbol)> = None;
            for (name, &sym) in &self.0.index {
                if rest.starts_with(name.as_str()) && best.is_none_or(|(l, _)| name.len() > l) {
                    best = Some((name.len(), sym));
                }
            }
            let (len, sym) = best?;
            out.push(sym);
            rest = &rest[len..];
        }
        Some(out)
    }

    /// Parses a word written as symbol names, optionally separated by spaces.
    pub fn parse_word(&self, text: &str) -> Result<Word, AutomataError> {
        let mut word = Vec::new();
        for run in text.split_whitespace() {
            match self.tokenize_run(run) {
                Some(mut syms) => word.append(&mut syms),
                None => return Err(AutomataError::UnknownSymbol(run.to_string())),
            }
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[Symbol]) -> String {
        let sep = if self.is_single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.symbols == other.0.symbols
    }
}

impl Eq for Alphabet {}

impl std::hash::Hash for Alphabet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.symbols.hash(state);
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.symbols.iter()).finish()
    }
}

pub(crate) fn is_identifier_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
