#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use wsmc::automata::{Alphabet, Label, Nfa, Symbol, Word};
use wsmc::lcs::{parse_model, GlcsModel};
use wsmc::mu::Term;
use wsmc::region::{parse_region, Config, Region};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

/// Random automaton with up to `max_states` states and a few epsilon moves.
pub fn random_nfa(rng: &mut StdRng, alphabet: &Alphabet, max_states: usize) -> Nfa {
    let n = rng.gen_range(1..=max_states);
    let syms: Vec<Symbol> = alphabet.symbols().collect();
    let mut edges = Vec::new();
    for from in 0..n {
        for to in 0..n {
            for &s in &syms {
                if rng.gen_bool(0.3) {
                    edges.push((from, Some(s), to));
                }
            }
            if from != to && rng.gen_bool(0.05) {
                edges.push((from, None, to));
            }
        }
    }
    let mut initial = vec![0];
    if n > 1 && rng.gen_bool(0.2) {
        initial.push(rng.gen_range(1..n));
    }
    let accepting: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Nfa::from_parts(alphabet, n, &initial, &accepting, &edges).unwrap()
}

fn eps_close(nfa: &Nfa, mut set: Vec<bool>) -> Vec<bool> {
    let mut stack: Vec<usize> = (0..set.len()).filter(|&q| set[q]).collect();
    while let Some(q) = stack.pop() {
        for &(l, t) in nfa.edges(q) {
            if l == Label::Eps && !set[t as usize] {
                set[t as usize] = true;
                stack.push(t as usize);
            }
        }
    }
    set
}

fn step(nfa: &Nfa, cur: &[bool], s: Symbol) -> Vec<bool> {
    let mut next = vec![false; cur.len()];
    for q in (0..cur.len()).filter(|&q| cur[q]) {
        for &(l, t) in nfa.edges(q) {
            if l == Label::Sym(s) {
                next[t as usize] = true;
            }
        }
    }
    eps_close(nfa, next)
}

fn start(nfa: &Nfa) -> Vec<bool> {
    let mut set = vec![false; nfa.num_states()];
    for &q in nfa.initial_states() {
        set[q as usize] = true;
    }
    eps_close(nfa, set)
}

fn accepts(nfa: &Nfa, set: &[bool]) -> bool {
    (0..set.len()).any(|q| set[q] && nfa.is_accepting(q))
}

/// Membership by direct simulation of the transition graph.
pub fn simulate(nfa: &Nfa, w: &[Symbol]) -> bool {
    let mut cur = start(nfa);
    for &s in w {
        cur = step(nfa, &cur, s);
    }
    accepts(nfa, &cur)
}

/// The words of `nfa` up to length `n`, by simulation along the word tree.
pub fn language(nfa: &Nfa, n: usize) -> BTreeSet<Word> {
    fn walk(nfa: &Nfa, w: &mut Word, cur: Vec<bool>, n: usize, out: &mut BTreeSet<Word>) {
        if accepts(nfa, &cur) {
            out.insert(w.clone());
        }
        if w.len() == n || !cur.contains(&true) {
            return;
        }
        for s in nfa.alphabet().symbols() {
            let next = step(nfa, &cur, s);
            w.push(s);
            walk(nfa, w, next, n, out);
            w.pop();
        }
    }
    let mut out = BTreeSet::new();
    walk(nfa, &mut Word::new(), start(nfa), n, &mut out);
    out
}

const REGEXES: &[&str] = &[
    ".*", "()", "a.*", ".*b", "a*", "b*", "(ab)*", ".*a.*", "b.*a", "a|bb", "{}", "(a|b)(a|b)",
];

pub fn random_regex(rng: &mut StdRng) -> &'static str {
    REGEXES.choose(rng).unwrap()
}

fn location_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("l{i}")).collect()
}

fn product_text(rng: &mut StdRng, loc: &str, channels: usize) -> String {
    let mut s = format!("({loc}");
    for _ in 0..channels {
        s.push_str("; ");
        s.push_str(random_regex(rng));
    }
    s.push(')');
    s
}

/// Text of a random region: a sum of up to three products.
pub fn random_region_text(rng: &mut StdRng, locs: usize, channels: usize) -> String {
    let names = location_names(locs);
    let k = rng.gen_range(1..=3);
    (0..k)
        .map(|_| {
            let loc = names.choose(rng).unwrap().clone();
            product_text(rng, &loc, channels)
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn region(m: &GlcsModel, text: &str) -> Region {
    parse_region(text, m.signature(), &|n| m.region(n).cloned()).unwrap()
}

pub struct ModelShape {
    pub max_locations: usize,
    pub max_channels: usize,
    pub max_rules: usize,
    pub guards: bool,
}

/// Random model text over {a, b}. Always declares a region `GOAL`.
pub fn random_model_text(rng: &mut StdRng, shape: &ModelShape) -> String {
    let n = rng.gen_range(1..=shape.max_locations);
    let k = rng.gen_range(0..=shape.max_channels);
    let names = location_names(n);
    let chans: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let mut text = format!("alphabet: a b\nchannels: {}\nlocations: {}\n", chans.join(" "), names.join(" "));
    text += &format!("region GOAL = {}\n", random_region_text(rng, n, k));
    let rules = rng.gen_range(1..=shape.max_rules);
    for _ in 0..rules {
        let src = names.choose(rng).unwrap();
        let dst = names.choose(rng).unwrap();
        let op = if k == 0 || rng.gen_bool(0.3) {
            "nop".to_string()
        } else {
            let c = chans.choose(rng).unwrap();
            let m = ["a", "b"].choose(rng).unwrap();
            let dir = if rng.gen_bool(0.5) { "!" } else { "?" };
            format!("{c}{dir}{m}")
        };
        let (src, dst) = (src.clone(), dst.clone());
        text += &format!("rule {src} -> {dst} : {op}");
        if shape.guards && rng.gen_bool(0.4) {
            text += &format!(" guard {}", product_text(rng, &src, k));
        }
        text.push('\n');
    }
    text
}

pub fn random_model(rng: &mut StdRng, shape: &ModelShape) -> GlcsModel {
    parse_model(&random_model_text(rng, shape)).unwrap()
}

/// Random strictly alternating, deadlock-free game without channels.
pub fn random_finite_game(rng: &mut StdRng, max_locations: usize) -> GlcsModel {
    let n = rng.gen_range(2..=max_locations.max(2));
    let owners: Vec<bool> = (0..n).map(|i| i == 0 || (i > 1 && rng.gen_bool(0.5))).collect();
    let a: Vec<usize> = (0..n).filter(|&i| owners[i]).collect();
    let b: Vec<usize> = (0..n).filter(|&i| !owners[i]).collect();
    let mut text = String::from("alphabet: a\nlocations:");
    for i in 0..n {
        text += &format!(" l{i}[{}]", if owners[i] { "A" } else { "B" });
    }
    text.push('\n');
    let goal: Vec<String> = (0..n)
        .filter(|_| rng.gen_bool(0.3))
        .map(|i| format!("(l{i})"))
        .collect();
    let goal = if goal.is_empty() { "{}".to_string() } else { goal.join(" + ") };
    text += &format!("region GOAL = {goal}\n");
    for i in 0..n {
        let other = if owners[i] { &b } else { &a };
        let mut targets: Vec<usize> = other.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if targets.is_empty() {
            targets.push(*other.choose(rng).unwrap());
        }
        for t in targets {
            text += &format!("rule l{i} -> l{t} : nop\n");
        }
    }
    parse_model(&text).unwrap()
}

/// Random closed term of bounded depth over the configuration operators.
/// Bound variables only occur under an even number of complements.
pub struct TermGen<'a> {
    pub constants: &'a [&'a str],
    pub game: bool,
}

impl TermGen<'_> {
    pub fn term(&self, rng: &mut StdRng, depth: usize) -> Term {
        self.gen(rng, depth, &mut Vec::new())
    }

    fn gen(&self, rng: &mut StdRng, depth: usize, bound: &mut Vec<(String, bool)>) -> Term {
        let usable: Vec<String> = bound.iter().filter(|(_, odd)| !odd).map(|(x, _)| x.clone()).collect();
        if depth == 0 || rng.gen_bool(0.2) {
            return match rng.gen_range(0..4) {
                0 if !usable.is_empty() => Term::var(usable.choose(rng).unwrap().clone()),
                1 => [Term::All, Term::Empty].choose(rng).unwrap().clone(),
                2 if self.game => Term::constant(*["confA", "confB"].choose(rng).unwrap()),
                _ => Term::constant(*self.constants.choose(rng).unwrap()),
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..9) {
            0 => self.gen(rng, d, bound).or(self.gen(rng, d, bound)),
            1 => self.gen(rng, d, bound).and(self.gen(rng, d, bound)),
            2 => {
                for b in bound.iter_mut() {
                    b.1 = !b.1;
                }
                let t = self.gen(rng, d, bound).not();
                for b in bound.iter_mut() {
                    b.1 = !b.1;
                }
                t
            }
            3 | 4 => {
                let op = *["pre", "wpre", "post", "prep", "wprep", "postp"].choose(rng).unwrap();
                Term::unary(op, self.gen(rng, d, bound))
            }
            5 => {
                let t = self.gen(rng, d, bound);
                match rng.gen_range(0..4) {
                    0 => t.up(),
                    1 => t.down(),
                    2 => t.kup(),
                    _ => t.kdown(),
                }
            }
            _ => {
                let x = format!("X{}", bound.len());
                bound.push((x.clone(), false));
                let body = self.gen(rng, d, bound);
                bound.pop();
                if rng.gen_bool(0.5) {
                    Term::mu(x, body)
                } else {
                    Term::nu(x, body)
                }
            }
        }
    }
}

/// Every configuration with channel words of length at most `n`.
pub fn configs_up_to(m: &GlcsModel, n: usize) -> Vec<Config> {
    let words = wsmc::oracle::all_words(m.signature().alphabet(), n);
    let mut out = Vec::new();
    for l in m.signature().locations() {
        let mut rows: Vec<Vec<Word>> = vec![vec![]];
        for _ in 0..m.signature().num_channels() {
            rows = rows
                .iter()
                .flat_map(|r| {
                    words.iter().map(move |w| {
                        let mut r = r.clone();
                        r.push(w.clone());
                        r
                    })
                })
                .collect();
        }
        out.extend(rows.into_iter().map(|words| Config { location: l, words }));
    }
    out
}
