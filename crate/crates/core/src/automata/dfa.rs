//! Complete deterministic automata, subset construction and minimization.

use std::collections::{HashMap, VecDeque};

use super::alphabet::{Alphabet, Symbol};
use super::nfa::{Label, Nfa};

/// Complete DFA with start state 0. Transitions are stored row-major:
/// `next[state * width + symbol]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Dfa {
    pub(crate) alphabet: Alphabet,
    pub(crate) width: usize,
    pub(crate) next: Vec<u32>,
    pub(crate) accepting: Vec<bool>,
}

impl Dfa {
    pub(crate) fn num_states(&self) -> usize {
        self.accepting.len()
    }

    #[inline]
    pub(crate) fn step(&self, state: usize, sym: Symbol) -> usize {
        self.next[state * self.width + sym.index()] as usize
    }

    pub(crate) fn accepts(&self, word: &[Symbol]) -> bool {
        let mut s = 0;
        for &a in word {
            s = self.step(s, a);
        }
        self.accepting[s]
    }

    /// Subset construction over epsilon-closed state sets.
    pub(crate) fn from_nfa(nfa: &Nfa) -> Dfa {
        let width = nfa.alphabet().len();
        let start = nfa.epsilon_closure(nfa.initial_states().iter().copied());
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut sets: Vec<Vec<u32>> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut next = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let set = sets[i].clone();
            accepting.push(set.iter().any(|&q| nfa.is_accepting(q as usize)));
            // Gather symbol successors for the whole set at once.
            let mut moves: Vec<Vec<u32>> = vec![Vec::new(); width];
            for &q in &set {
                for &(label, t) in nfa.edges(q as usize) {
                    if let Label::Sym(a) = label {
                        moves[a.index()].push(t);
                    }
                }
            }
            for targets in moves {
                let closed = nfa.epsilon_closure(targets.into_iter());
                let id = match ids.get(&closed) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(closed.clone(), id);
                        sets.push(closed);
                        id
                    }
                };
                next.push(id);
            }
            i += 1;
        }
        Dfa {
            alphabet: nfa.alphabet().clone(),
            width,
            next,
            accepting,
        }
    }

    pub(crate) fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for a in d.accepting.iter_mut() {
            *a = !*a;
        }
        d
    }

    /// Synchronous product restricted to reachable pairs.
    pub(crate) fn product(a: &Dfa, b: &Dfa, combine: impl Fn(bool, bool) -> bool) -> Dfa {
        debug_assert_eq!(a.width, b.width);
        let width = a.width;
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        ids.insert((0, 0), 0);
        let mut next = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            accepting.push(combine(a.accepting[p as usize], b.accepting[q as usize]));
            for s in 0..width {
                let np = a.next[p as usize * width + s];
                let nq = b.next[q as usize * width + s];
                let id = *ids.entry((np, nq)).or_insert_with(|| {
                    pairs.push((np, nq));
                    (pairs.len() - 1) as u32
                });
                next.push(id);
            }
            i += 1;
        }
        Dfa {
            alphabet: a.alphabet.clone(),
            width,
            next,
            accepting,
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        !self.reachable_order().iter().any(|&s| self.accepting[s])
    }

    /// States reachable from the start, in breadth-first order with
    /// successors visited in alphabet order.
    fn reachable_order(&self) -> Vec<usize> {
        let n = self.num_states();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for a in 0..self.width {
                let t = self.next[s * self.width + a] as usize;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Renumbers reachable states in breadth-first discovery order, dropping
    /// the unreachable ones.
    fn renumber_bfs(&self) -> Dfa {
        let order = self.reachable_order();
        let mut new_id = vec![u32::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            new_id[s] = i as u32;
        }
        let mut next = Vec::with_capacity(order.len() * self.width);
        let mut accepting = Vec::with_capacity(order.len());
        for &s in &order {
            accepting.push(self.accepting[s]);
            for a in 0..self.width {
                next.push(new_id[self.next[s * self.width + a] as usize]);
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            width: self.width,
            next,
            accepting,
        }
    }

    /// Moore partition refinement followed by canonical renumbering.
    pub(crate) fn minimize(&self) -> Dfa {
        let d = self.renumber_bfs();
        let n = d.num_states();
        let w = d.width;
        let mut class: Vec<u32> = d.accepting.iter().map(|&a| a as u32).collect();
        let mut count = {
            let any_acc = d.accepting.iter().any(|&a| a);
            let any_rej = d.accepting.iter().any(|&a| !a);
            any_acc as usize + any_rej as usize
        };
        loop {
            let mut sigs: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut refined = vec![0u32; n];
            for s in 0..n {
                let mut sig = Vec::with_capacity(w + 1);
                sig.push(class[s]);
                for a in 0..w {
                    sig.push(class[d.next[s * w + a] as usize]);
                }
                let len = sigs.len() as u32;
                refined[s] = *sigs.entry(sig).or_insert(len);
            }
            let new_count = sigs.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut next = vec![0u32; count * w];
        let mut accepting = vec![false; count];
        for s in 0..n {
            let c = class[s] as usize;
            accepting[c] = d.accepting[s];
            for a in 0..w {
                next[c * w + a] = class[d.next[s * w + a] as usize];
            }
        }
        // Class of the start state must become state 0 before renumbering.
        let start = class[0] as usize;
        let mut q = Dfa {
            alphabet: d.alphabet.clone(),
            width: w,
            next,
            accepting,
        };
        if start != 0 {
            q = q.swap_states(0, start);
        }
        q.renumber_bfs()
    }

    fn swap_states(&self, x: usize, y: usize) -> Dfa {
        let n = self.num_states();
        let w = self.width;
        let perm = |s: usize| -> usize {
            if s == x {
                y
            } else if s == y {
                x
            } else {
                s
            }
        };
        let mut next = vec![0u32; n * w];
        let mut accepting = vec![false; n];
        for s in 0..n {
            let t = perm(s);
            accepting[t] = self.accepting[s];
            for a in 0..w {
                next[t * w + a] = perm(self.next[s * w + a] as usize) as u32;
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            width: w,
            next,
            accepting,
        }
    }

    /// States from which no accepting state is reachable.
    pub(crate) fn dead_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for a in 0..self.width {
                rev[self.next[s * self.width + a] as usize].push(s);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&s| live[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live.into_iter().map(|l| !l).collect()
    }

    pub(crate) fn to_nfa(&self) -> Nfa {
        let dead = self.dead_states();
        let mut nfa = Nfa::empty_with_states(&self.alphabet, self.num_states());
        nfa.set_initial(vec![0]);
        for s in 0..self.num_states() {
            nfa.set_accepting(s, self.accepting[s]);
            if dead[s] {
                continue;
            }
            for a in 0..self.width {
                let t = self.next[s * self.width + a] as usize;
                if !dead[t] {
                    nfa.add_edge(s, Label::Sym(Symbol(a as u32)), t);
                }
            }
        }
        nfa.trim()
    }
}
