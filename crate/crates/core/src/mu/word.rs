use std::collections::BTreeMap;

use super::RegionAlgebra;
use crate::automata::{Alphabet, Nfa, Word};

/// The algebra of regular languages over one alphabet, with named constants
/// and the rational operators `concat`, `star`, `reverse`, `shuffle`, `lres`
/// (left residual `A⁻¹B`) and `rres` (right residual `AB⁻¹`).
#[derive(Debug, Clone)]
pub struct WordAlgebra {
    alphabet: Alphabet,
    constants: BTreeMap<String, Nfa>,
}

const OPERATORS: &[(&str, usize)] = &[
    ("concat", 2),
    ("star", 1),
    ("reverse", 1),
    ("shuffle", 2),
    ("lres", 2),
    ("rres", 2),
];

impl WordAlgebra {
    pub fn new(alphabet: &Alphabet) -> WordAlgebra {
        WordAlgebra {
            alphabet: alphabet.clone(),
            constants: BTreeMap::new(),
        }
    }

    pub fn with_constant(mut self, name: impl Into<String>, lang: Nfa) -> WordAlgebra {
        self.constants.insert(name.into(), lang.minimized());
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

fn same(r: Result<Nfa, crate::automata::AutomataError>) -> Nfa {
    r.expect("operands share the algebra alphabet")
}

impl RegionAlgebra for WordAlgebra {
    type Value = Nfa;
    type Element = Word;

    fn empty(&self) -> Nfa {
        Nfa::empty(&self.alphabet)
    }

    fn full(&self) -> Nfa {
        Nfa::universal(&self.alphabet)
    }

    fn union(&self, a: &Nfa, b: &Nfa) -> Nfa {
        same(a.union(b)).minimized()
    }

    fn intersection(&self, a: &Nfa, b: &Nfa) -> Nfa {
        same(a.intersection(b)).minimized()
    }

    fn complement(&self, a: &Nfa) -> Nfa {
        a.complement()
    }

    fn up_closure(&self, a: &Nfa) -> Nfa {
        a.up_closure().minimized()
    }

    fn down_closure(&self, a: &Nfa) -> Nfa {
        a.down_closure().minimized()
    }

    fn up_kernel(&self, a: &Nfa) -> Nfa {
        a.up_kernel()
    }

    fn down_kernel(&self, a: &Nfa) -> Nfa {
        a.down_kernel()
    }

    fn equal(&self, a: &Nfa, b: &Nfa) -> bool {
        a.canonicalize() == b.canonicalize()
    }

    fn subset(&self, a: &Nfa, b: &Nfa) -> bool {
        same(a.difference(b)).is_empty()
    }

    fn member(&self, w: &Word, a: &Nfa) -> bool {
        a.contains(w)
    }

    fn size(&self, a: &Nfa) -> usize {
        a.num_states()
    }

    fn arity(&self, name: &str) -> Option<usize> {
        if self.constants.contains_key(name) {
            return Some(0);
        }
        OPERATORS.iter().find(|(n, _)| *n == name).map(|&(_, k)| k)
    }

    fn apply(&self, name: &str, args: &[Nfa]) -> Result<Nfa, String> {
        if let Some(c) = self.constants.get(name) {
            return Ok(c.clone());
        }
        let r = match (name, args) {
            ("concat", [a, b]) => a.concat(b),
            ("star", [a]) => Ok(a.star()),
            ("reverse", [a]) => Ok(a.reverse()),
            ("shuffle", [a, b]) => a.shuffle(b),
            ("lres", [a, b]) => a.left_residual(b),
            ("rres", [a, b]) => a.right_residual(b),
            _ => return Err(format!("unknown operator {name}/{}", args.len())),
        };
        r.map(|n| n.minimized()).map_err(|e| e.to_string())
    }
}
