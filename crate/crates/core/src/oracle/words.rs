use std::collections::BTreeSet;

use super::OracleError;
use crate::automata::{Alphabet, Word};

/// Word-level operators with a direct set-theoretic definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordOp {
    Union,
    Intersection,
    Complement,
    Difference,
    Concat,
    Star,
    Reverse,
    Shuffle,
    /// `{v | ∃u ∈ A. uv ∈ B}`
    LeftResidual,
    /// `{u | ∃v ∈ B. uv ∈ A}`
    RightResidual,
    UpClosure,
    DownClosure,
    UpKernel,
    DownKernel,
}

impl WordOp {
    fn arity(self) -> usize {
        use WordOp::*;
        match self {
            Union | Intersection | Difference | Concat | Shuffle | LeftResidual
            | RightResidual => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        use WordOp::*;
        match self {
            Union => "union",
            Intersection => "intersection",
            Complement => "complement",
            Difference => "difference",
            Concat => "concat",
            Star => "star",
            Reverse => "reverse",
            Shuffle => "shuffle",
            LeftResidual => "left residual",
            RightResidual => "right residual",
            UpClosure => "up closure",
            DownClosure => "down closure",
            UpKernel => "up kernel",
            DownKernel => "down kernel",
        }
    }
}

/// All words over the alphabet of length at most `max_len`, shortest first.
pub fn all_words(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::new()];
    let mut layer = vec![Word::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.symbols().map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn embeds(u: &Word, w: &Word) -> bool {
    let mut it = w.iter();
    u.iter().all(|a| it.any(|b| b == a))
}

fn splits_into(w: &[crate::automata::Symbol], a: &BTreeSet<Word>) -> bool {
    if w.is_empty() {
        return true;
    }
    (1..=w.len()).any(|i| a.contains(&w[..i]) && splits_into(&w[i..], a))
}

fn interleaves(w: &Word, a: &BTreeSet<Word>, b: &BTreeSet<Word>) -> bool {
    let n = w.len();
    (0u32..1 << n).any(|mask| {
        let (mut u, mut v) = (Word::new(), Word::new());
        for (i, &s) in w.iter().enumerate() {
            if mask >> i & 1 == 1 {
                u.push(s);
            } else {
                v.push(s);
            }
        }
        a.contains(&u) && b.contains(&v)
    })
}

/// Evaluates `op` on explicit finite languages by its definition.
///
/// Operands are read as finite sets. Everything is computed inside the
/// universe of words of length at most `max_len`: complements and kernels
/// quantify over that universe only, and results are cut to it. Operands
/// longer than the bound are ignored.
pub fn brute_words(
    op: WordOp,
    inputs: &[&BTreeSet<Word>],
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<BTreeSet<Word>, OracleError> {
    if max_len > 8 {
        return Err(OracleError::BoundTooLarge(max_len));
    }
    if inputs.len() != op.arity() {
        return Err(OracleError::Arity(op.name(), op.arity()));
    }
    let universe = all_words(alphabet, max_len);
    let cut = |s: &BTreeSet<Word>| -> BTreeSet<Word> {
        s.iter().filter(|w| w.len() <= max_len).cloned().collect()
    };
    let a = cut(inputs[0]);
    let b = inputs.get(1).map(|s| cut(s)).unwrap_or_default();
    let keep = |f: &dyn Fn(&Word) -> bool| -> BTreeSet<Word> {
        universe.iter().filter(|w| f(w)).cloned().collect()
    };
    use WordOp::*;
    Ok(match op {
        Union => a.union(&b).cloned().collect(),
        Intersection => a.intersection(&b).cloned().collect(),
        Difference => a.difference(&b).cloned().collect(),
        Complement => keep(&|w| !a.contains(w)),
        Concat => keep(&|w| (0..=w.len()).any(|i| a.contains(&w[..i]) && b.contains(&w[i..]))),
        Star => keep(&|w| splits_into(w, &a)),
        Reverse => a
            .iter()
            .map(|w| w.iter().rev().copied().collect())
            .collect(),
        Shuffle => keep(&|w| interleaves(w, &a, &b)),
        LeftResidual => a
            .iter()
            .flat_map(|u| b.iter().filter_map(move |w| w.strip_prefix(u.as_slice())))
            .map(|v| v.to_vec())
            .collect(),
        RightResidual => b
            .iter()
            .flat_map(|v| a.iter().filter_map(move |w| w.strip_suffix(v.as_slice())))
            .map(|u| u.to_vec())
            .collect(),
        UpClosure => keep(&|w| a.iter().any(|u| embeds(u, w))),
        DownClosure => keep(&|w| a.iter().any(|v| embeds(w, v))),
        UpKernel => keep(&|w| universe.iter().all(|v| !embeds(w, v) || a.contains(v))),
        DownKernel => keep(&|w| universe.iter().all(|u| !embeds(u, w) || a.contains(u))),
    })
}
