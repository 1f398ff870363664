use std::collections::{BTreeSet, HashMap, VecDeque};

use super::alphabet::{Alphabet, Symbol};
use super::dfa::Dfa;
use super::{AutomataError, CanonicalDfa};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Eps,
    Sym(Symbol),
}

/// Nondeterministic finite automaton with epsilon transitions.
///
/// States are dense indices `0..num_states()`. Values are immutable from the
/// outside; every operation builds a fresh automaton.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<u32>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Label, u32)>>,
}

impl Nfa {
    // ---- construction -------------------------------------------------

    pub(crate) fn empty_with_states(alphabet: &Alphabet, n: usize) -> Nfa {
        Nfa {
            alphabet: alphabet.clone(),
            initial: Vec::new(),
            accepting: vec![false; n],
            edges: vec![Vec::new(); n],
        }
    }

    pub(crate) fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.accepting.len() - 1
    }

    pub(crate) fn add_edge(&mut self, from: usize, label: Label, to: usize) {
        self.edges[from].push((label, to as u32));
    }

    pub(crate) fn set_accepting(&mut self, state: usize, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub(crate) fn set_initial(&mut self, mut states: Vec<u32>) {
        states.sort_unstable();
        states.dedup();
        self.initial = states;
    }

    /// Builds an automaton from explicit parts. `None` labels are epsilon
    /// moves.
    pub fn from_parts(
        alphabet: &Alphabet,
        num_states: usize,
        initial: &[usize],
        accepting: &[usize],
        edges: &[(usize, Option<Symbol>, usize)],
    ) -> Result<Nfa, AutomataError> {
        let check = |q: usize| {
            if q < num_states {
                Ok(())
            } else {
                Err(AutomataError::StateOutOfRange {
                    state: q,
                    count: num_states,
                })
            }
        };
        let mut n = Nfa::empty_with_states(alphabet, num_states);
        for &q in accepting {
            check(q)?;
            n.set_accepting(q, true);
        }
        for &(from, label, to) in edges {
            check(from)?;
            check(to)?;
            let label = match label {
                Some(s) if s.index() >= alphabet.len() => {
                    return Err(AutomataError::AlphabetMismatch)
                }
                Some(s) => Label::Sym(s),
                None => Label::Eps,
            };
            n.add_edge(from, label, to);
        }
        for &q in initial {
            check(q)?;
        }
        n.set_initial(initial.iter().map(|&q| q as u32).collect());
        Ok(n)
    }

    /// The empty language.
    pub fn empty(alphabet: &Alphabet) -> Nfa {
        Self::empty_with_states(alphabet, 0)
    }

    /// The language `{ε}`.
    pub fn epsilon(alphabet: &Alphabet) -> Nfa {
        let mut n = Self::empty_with_states(alphabet, 1);
        n.accepting[0] = true;
        n.initial = vec![0];
        n
    }

    /// All words, `Σ*`.
    pub fn universal(alphabet: &Alphabet) -> Nfa {
        let mut n = Self::epsilon(alphabet);
        for a in alphabet.symbols() {
            n.add_edge(0, Label::Sym(a), 0);
        }
        n
    }

    /// Single-letter words, `Σ`.
    pub fn any_symbol(alphabet: &Alphabet) -> Nfa {
        let mut n = Self::empty_with_states(alphabet, 2);
        n.initial = vec![0];
        n.accepting[1] = true;
        for a in alphabet.symbols() {
            n.add_edge(0, Label::Sym(a), 1);
        }
        n
    }

    pub fn symbol(alphabet: &Alphabet, s: Symbol) -> Nfa {
        Self::word(alphabet, &[s])
    }

    pub fn word(alphabet: &Alphabet, word: &[Symbol]) -> Nfa {
        let mut n = Self::empty_with_states(alphabet, word.len() + 1);
        n.initial = vec![0];
        n.accepting[word.len()] = true;
        for (i, &a) in word.iter().enumerate() {
            n.add_edge(i, Label::Sym(a), i + 1);
        }
        n
    }

    /// Finite language given by explicit words.
    pub fn finite<'a>(alphabet: &Alphabet, words: impl IntoIterator<Item = &'a Word>) -> Nfa {
        let mut acc = Self::empty(alphabet);
        for w in words {
            acc = acc.union_unchecked(&Self::word(alphabet, w));
        }
        acc
    }

    // ---- accessors ----------------------------------------------------

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial_states(&self) -> &[u32] {
        &self.initial
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn edges(&self, state: usize) -> &[(Label, u32)] {
        &self.edges[state]
    }

    /// Sorted epsilon closure of a state set.
    pub(crate) fn epsilon_closure(&self, states: impl Iterator<Item = u32>) -> Vec<u32> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<u32> = Vec::new();
        for s in states {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            out.push(s);
            for &(l, t) in &self.edges[s as usize] {
                if l == Label::Eps && !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn check_same(&self, other: &Nfa) -> Result<(), AutomataError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(AutomataError::AlphabetMismatch)
        }
    }

    /// Reinterprets the automaton over a larger alphabet whose first symbols
    /// coincide with the current ones.
    pub(crate) fn widen(&self, alphabet: &Alphabet) -> Nfa {
        debug_assert!(self
            .alphabet
            .names()
            .iter()
            .zip(alphabet.names())
            .all(|(a, b)| a == b));
        let mut n = self.clone();
        n.alphabet = alphabet.clone();
        n
    }

    // ---- simple structural helpers ------------------------------------

    /// Copies the states of `other` after ours, returning the offset.
    fn absorb(&mut self, other: &Nfa) -> u32 {
        let off = self.num_states() as u32;
        self.accepting.extend_from_slice(&other.accepting);
        for es in &other.edges {
            self.edges
                .push(es.iter().map(|&(l, t)| (l, t + off)).collect());
        }
        off
    }

    /// Drops states that are unreachable from an initial state or cannot
    /// reach an accepting one.
    pub fn trim(&self) -> Nfa {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for &i in &self.initial {
            if !fwd[i as usize] {
                fwd[i as usize] = true;
                stack.push(i as usize);
            }
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in &self.edges[s] {
                if !fwd[t as usize] {
                    fwd[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for &(_, t) in &self.edges[s] {
                rev[t as usize].push(s);
            }
        }
        let mut bwd = vec![false; n];
        for s in 0..n {
            if self.accepting[s] {
                bwd[s] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut id = vec![u32::MAX; n];
        let mut out = Self::empty(&self.alphabet);
        for s in 0..n {
            if fwd[s] && bwd[s] {
                id[s] = out.add_state(self.accepting[s]) as u32;
            }
        }
        for s in 0..n {
            if id[s] == u32::MAX {
                continue;
            }
            let mut es: Vec<(Label, u32)> = self.edges[s]
                .iter()
                .filter(|&&(_, t)| id[t as usize] != u32::MAX)
                .map(|&(l, t)| (l, id[t as usize]))
                .collect();
            es.sort_unstable();
            es.dedup();
            out.edges[id[s] as usize] = es;
        }
        out.set_initial(
            self.initial
                .iter()
                .filter(|&&i| id[i as usize] != u32::MAX)
                .map(|&i| id[i as usize])
                .collect(),
        );
        out
    }

    /// Equivalent automaton without epsilon transitions (same state set).
    pub(crate) fn without_epsilons(&self) -> Nfa {
        if self.edges.iter().flatten().all(|&(l, _)| l != Label::Eps) {
            return self.clone();
        }
        let n = self.num_states();
        let mut out = Self::empty_with_states(&self.alphabet, n);
        out.initial = self.initial.clone();
        for s in 0..n {
            let closure = self.epsilon_closure(std::iter::once(s as u32));
            let mut es = BTreeSet::new();
            for &p in &closure {
                if self.accepting[p as usize] {
                    out.accepting[s] = true;
                }
                for &(l, t) in &self.edges[p as usize] {
                    if let Label::Sym(_) = l {
                        es.insert((l, t));
                    }
                }
            }
            out.edges[s] = es.into_iter().collect();
        }
        out
    }

    // ---- boolean operations ------------------------------------------

    fn union_unchecked(&self, other: &Nfa) -> Nfa {
        let mut out = self.clone();
        let off = out.absorb(other);
        let mut init = out.initial.clone();
        init.extend(other.initial.iter().map(|&i| i + off));
        out.set_initial(init);
        out
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        Ok(self.union_unchecked(other))
    }

    pub fn intersection(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let a = self.without_epsilons();
        let b = other.without_epsilons();
        let mut out = Self::empty(&self.alphabet);
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut init = Vec::new();
        for &p in &a.initial {
            for &q in &b.initial {
                let id = out.add_state(a.accepting[p as usize] && b.accepting[q as usize]) as u32;
                ids.insert((p, q), id);
                queue.push_back((p, q));
                init.push(id);
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let from = ids[&(p, q)] as usize;
            for &(la, ta) in &a.edges[p as usize] {
                for &(lb, tb) in &b.edges[q as usize] {
                    if la != lb {
                        continue;
                    }
                    let to = match ids.get(&(ta, tb)) {
                        Some(&id) => id,
                        None => {
                            let id = out.add_state(
                                a.accepting[ta as usize] && b.accepting[tb as usize],
                            ) as u32;
                            ids.insert((ta, tb), id);
                            queue.push_back((ta, tb));
                            id
                        }
                    };
                    out.add_edge(from, la, to as usize);
                }
            }
        }
        out.set_initial(init);
        Ok(out.trim())
    }

    pub fn complement(&self) -> Nfa {
        Dfa::from_nfa(self).complement().minimize().to_nfa()
    }

    pub fn difference(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let d = Dfa::product(&Dfa::from_nfa(self), &Dfa::from_nfa(other), |x, y| x && !y);
        Ok(d.minimize().to_nfa())
    }

    // ---- rational operations ------------------------------------------

    pub fn concat(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let mut out = self.clone();
        let off = out.absorb(other);
        for s in 0..self.num_states() {
            if self.accepting[s] {
                out.accepting[s] = false;
                for &i in &other.initial {
                    out.add_edge(s, Label::Eps, (i + off) as usize);
                }
            }
        }
        Ok(out.trim())
    }

    pub fn star(&self) -> Nfa {
        let mut out = self.clone();
        let hub = out.add_state(true);
        for &i in &self.initial {
            out.add_edge(hub, Label::Eps, i as usize);
        }
        for s in 0..self.num_states() {
            if self.accepting[s] {
                out.add_edge(s, Label::Eps, hub);
            }
        }
        out.set_initial(vec![hub as u32]);
        out.trim()
    }

    pub fn plus(&self) -> Nfa {
        self.concat(&self.star()).expect("same alphabet")
    }

    pub fn optional(&self) -> Nfa {
        self.union_unchecked(&Self::epsilon(&self.alphabet))
    }

    pub fn reverse(&self) -> Nfa {
        let n = self.num_states();
        let mut out = Self::empty_with_states(&self.alphabet, n);
        for s in 0..n {
            for &(l, t) in &self.edges[s] {
                out.add_edge(t as usize, l, s);
            }
        }
        for &i in &self.initial {
            out.accepting[i as usize] = true;
        }
        out.set_initial(
            (0..n)
                .filter(|&s| self.accepting[s])
                .map(|s| s as u32)
                .collect(),
        );
        out
    }

    /// All interleavings of a word of `self` with a word of `other`.
    pub fn shuffle(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let a = self.trim();
        let b = other.trim();
        let nb = b.num_states();
        let id = |p: usize, q: usize| p * nb + q;
        let mut out = Self::empty_with_states(&self.alphabet, a.num_states() * nb);
        for p in 0..a.num_states() {
            for q in 0..nb {
                out.accepting[id(p, q)] = a.accepting[p] && b.accepting[q];
                for &(l, t) in &a.edges[p] {
                    out.add_edge(id(p, q), l, id(t as usize, q));
                }
                for &(l, t) in &b.edges[q] {
                    out.add_edge(id(p, q), l, id(p, t as usize));
                }
            }
        }
        let mut init = Vec::new();
        for &p in &a.initial {
            for &q in &b.initial {
                init.push(id(p as usize, q as usize) as u32);
            }
        }
        out.set_initial(init);
        Ok(out.trim())
    }

    /// Pairs of states reachable by reading one common word from the
    /// initial states of both automata (which must be epsilon-free).
    fn co_reachable_pairs(a: &Nfa, b: &Nfa) -> BTreeSet<(u32, u32)> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for &p in &a.initial {
            for &q in &b.initial {
                if seen.insert((p, q)) {
                    queue.push_back((p, q));
                }
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            for &(la, ta) in &a.edges[p as usize] {
                for &(lb, tb) in &b.edges[q as usize] {
                    if la == lb && seen.insert((ta, tb)) {
                        queue.push_back((ta, tb));
                    }
                }
            }
        }
        seen
    }

    /// Left residual `self⁻¹ other = { v | ∃u ∈ self, uv ∈ other }`.
    pub fn left_residual(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let a = self.without_epsilons();
        let b = other.without_epsilons();
        let starts: Vec<u32> = Self::co_reachable_pairs(&a, &b)
            .into_iter()
            .filter(|&(p, _)| a.accepting[p as usize])
            .map(|(_, q)| q)
            .collect();
        let mut out = b;
        out.set_initial(starts);
        Ok(out.trim())
    }

    /// Right residual `self other⁻¹ = { u | ∃v ∈ other, uv ∈ self }`.
    pub fn right_residual(&self, other: &Nfa) -> Result<Nfa, AutomataError> {
        self.check_same(other)?;
        let a = self.without_epsilons();
        let b = other.without_epsilons();
        let (na, nb) = (a.num_states(), b.num_states());
        // Backward search over the full product graph from accepting pairs.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); na * nb];
        for p in 0..na {
            for q in 0..nb {
                for &(la, ta) in &a.edges[p] {
                    for &(lb, tb) in &b.edges[q] {
                        if la == lb {
                            rev[ta as usize * nb + tb as usize].push(p * nb + q);
                        }
                    }
                }
            }
        }
        let mut good = vec![false; na * nb];
        let mut stack = Vec::new();
        for p in 0..na {
            for q in 0..nb {
                if a.accepting[p] && b.accepting[q] {
                    good[p * nb + q] = true;
                    stack.push(p * nb + q);
                }
            }
        }
        while let Some(x) = stack.pop() {
            for &y in &rev[x] {
                if !good[y] {
                    good[y] = true;
                    stack.push(y);
                }
            }
        }
        let mut out = a;
        for p in 0..na {
            out.accepting[p] = b.initial.iter().any(|&q| good[p * nb + q as usize]);
        }
        Ok(out.trim())
    }

    // ---- subword closures and kernels ----------------------------------

    /// Upward closure under the subword ordering: every state gets a loop
    /// on every symbol.
    pub fn up_closure(&self) -> Nfa {
        let mut out = self.trim();
        for s in 0..out.num_states() {
            for a in self.alphabet.symbols() {
                out.add_edge(s, Label::Sym(a), s);
            }
            out.edges[s].sort_unstable();
            out.edges[s].dedup();
        }
        out
    }

    /// Downward closure: every symbol transition is doubled by an epsilon
    /// transition.
    pub fn down_closure(&self) -> Nfa {
        let mut out = self.trim();
        for s in 0..out.num_states() {
            let extra: Vec<(Label, u32)> = out.edges[s]
                .iter()
                .filter(|(l, _)| matches!(l, Label::Sym(_)))
                .map(|&(_, t)| (Label::Eps, t))
                .collect();
            out.edges[s].extend(extra);
            out.edges[s].sort_unstable();
            out.edges[s].dedup();
        }
        out
    }

    /// Largest upward-closed subset: `¬C↓(¬L)`.
    pub fn up_kernel(&self) -> Nfa {
        self.complement().down_closure().complement()
    }

    /// Largest downward-closed subset: `¬C↑(¬L)`.
    pub fn down_kernel(&self) -> Nfa {
        self.complement().up_closure().complement()
    }

    // ---- decisions ---------------------------------------------------

    pub fn is_empty(&self) -> bool {
        self.trim().initial.is_empty()
    }

    pub fn is_universal(&self) -> bool {
        Dfa::from_nfa(self).complement().is_empty()
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        let mut cur = self.epsilon_closure(self.initial.iter().copied());
        for &a in word {
            let mut next = Vec::new();
            for &s in &cur {
                for &(l, t) in &self.edges[s as usize] {
                    if l == Label::Sym(a) {
                        next.push(t);
                    }
                }
            }
            cur = self.epsilon_closure(next.into_iter());
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&s| self.accepting[s as usize])
    }

    /// `L(self) ⊆ L(other)`, decided by emptiness of the product difference.
    pub fn is_subset(&self, other: &Nfa) -> Result<bool, AutomataError> {
        self.check_same(other)?;
        let d = Dfa::product(&Dfa::from_nfa(self), &Dfa::from_nfa(other), |x, y| x && !y);
        Ok(d.is_empty())
    }

    pub fn equals(&self, other: &Nfa) -> Result<bool, AutomataError> {
        self.check_same(other)?;
        let d = Dfa::product(&Dfa::from_nfa(self), &Dfa::from_nfa(other), |x, y| x != y);
        Ok(d.is_empty())
    }

    pub fn canonicalize(&self) -> CanonicalDfa {
        CanonicalDfa(Dfa::from_nfa(self).minimize())
    }

    /// Trimmed minimal deterministic automaton for the same language.
    pub fn minimized(&self) -> Nfa {
        self.canonicalize().to_nfa()
    }

    /// Words of length at most `max_len`, in length-lexicographic order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let d = Dfa::from_nfa(self);
        let mut out = Vec::new();
        let mut layer: Vec<(Word, usize)> = vec![(Vec::new(), 0)];
        for len in 0..=max_len {
            for (w, s) in &layer {
                if d.accepting[*s] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, s) in &layer {
                for a in self.alphabet.symbols() {
                    let mut w2 = w.clone();
                    w2.push(a);
                    next.push((w2, d.step(*s, a)));
                }
            }
            layer = next;
        }
        out
    }
}

use super::alphabet::Word;

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn w(al: &Alphabet, s: &str) -> Word {
        al.parse_word(s).unwrap()
    }

    fn lang(al: &Alphabet, words: &[&str]) -> Nfa {
        let ws: Vec<Word> = words.iter().map(|s| w(al, s)).collect();
        Nfa::finite(al, &ws)
    }

    #[test]
    fn finite_intersection() {
        let al = ab();
        let r = lang(&al, &["a", "ab"])
            .intersection(&lang(&al, &["ab", "b"]))
            .unwrap();
        assert!(r.equals(&lang(&al, &["ab"])).unwrap());
    }

    #[test]
    fn union_with_empty_is_identity() {
        let al = ab();
        let l = lang(&al, &["a", "bb", ""]);
        assert!(Nfa::empty(&al).union(&l).unwrap().equals(&l).unwrap());
    }

    #[test]
    fn double_complement() {
        let al = ab();
        let l = lang(&al, &["a", "bab"]).star();
        assert!(l.complement().complement().equals(&l).unwrap());
    }

    #[test]
    fn rational_examples() {
        let al = ab();
        let a = lang(&al, &["a"]);
        let b = lang(&al, &["b"]);
        assert!(a.concat(&b).unwrap().equals(&lang(&al, &["ab"])).unwrap());
        assert!(Nfa::empty(&al).star().equals(&Nfa::epsilon(&al)).unwrap());
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let sh = lang(&abc, &["ab"]).shuffle(&lang(&abc, &["c"])).unwrap();
        assert!(sh.equals(&lang(&abc, &["cab", "acb", "abc"])).unwrap());
        assert!(lang(&al, &["ab", "bba"])
            .reverse()
            .equals(&lang(&al, &["ba", "abb"]))
            .unwrap());
    }

    #[test]
    fn residual_examples() {
        let al = ab();
        let r = lang(&al, &["a"]).left_residual(&lang(&al, &["ab"])).unwrap();
        assert!(r.equals(&lang(&al, &["b"])).unwrap());
        let l = lang(&al, &["ab", "b"]).star();
        assert!(Nfa::empty(&al).left_residual(&l).unwrap().is_empty());
        let r = lang(&al, &["abb"]).right_residual(&lang(&al, &["b"])).unwrap();
        assert!(r.equals(&lang(&al, &["ab"])).unwrap());
    }

    #[test]
    fn closures_of_trivial_languages() {
        let al = ab();
        let u = Nfa::universal(&al);
        assert!(u.up_closure().equals(&u).unwrap());
        assert!(Nfa::empty(&al).up_closure().is_empty());
        let d = lang(&al, &["ab"]).down_closure();
        assert!(d.equals(&lang(&al, &["", "a", "b", "ab"])).unwrap());
        assert!(u.down_kernel().is_universal());
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let x = Nfa::universal(&ab());
        let y = Nfa::universal(&Alphabet::new(["a", "c"]).unwrap());
        assert!(matches!(x.union(&y), Err(AutomataError::AlphabetMismatch)));
        assert!(matches!(x.shuffle(&y), Err(AutomataError::AlphabetMismatch)));
    }

    #[test]
    fn words_enumeration() {
        let al = ab();
        let l = lang(&al, &["b", "", "ab"]);
        let got: Vec<String> = l.words_up_to(3).iter().map(|x| al.format_word(x)).collect();
        assert_eq!(got, vec!["", "b", "ab"]);
    }
}
