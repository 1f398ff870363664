//! Naive reference implementations used to cross-check the symbolic engine.
//! Nothing here is used by the engine itself.

mod words;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::lcs::{GlcsModel, Op, Player, StepMode};
use crate::mu::Term;
use crate::region::{Config, Location, Region};

pub use words::{all_words, brute_words, WordOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("length bound {0} exceeds the maximum of 8")]
    BoundTooLarge(usize),
    #[error("operator {0} expects {1} operand(s)")]
    Arity(&'static str, usize),
    #[error("model has channels; the finite oracle needs none")]
    HasChannels,
    #[error("unknown operator or constant '{0}'")]
    Unknown(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("iteration did not stabilize")]
    NoConvergence,
}

pub type LocSet = BTreeSet<Location>;

struct Finite<'a> {
    model: &'a GlcsModel,
    all: LocSet,
    constants: BTreeMap<String, LocSet>,
}

fn empty_config(l: Location) -> Config {
    Config {
        location: l,
        words: Vec::new(),
    }
}

impl Finite<'_> {
    fn enabled(&self, l: Location) -> Vec<Location> {
        self.model
            .rules()
            .iter()
            .filter(|r| r.source == l && r.op == Op::Nop)
            .filter(|r| match &r.guard {
                Some(g) => g.contains(&empty_config(l)).unwrap_or(false),
                None => true,
            })
            .map(|r| r.target)
            .collect()
    }

    fn pre(&self, s: &LocSet) -> LocSet {
        self.all
            .iter()
            .copied()
            .filter(|&l| self.enabled(l).iter().any(|t| s.contains(t)))
            .collect()
    }

    fn post(&self, s: &LocSet) -> LocSet {
        s.iter().flat_map(|&l| self.enabled(l)).collect()
    }

    fn not(&self, s: &LocSet) -> LocSet {
        self.all.difference(s).copied().collect()
    }

    fn owned(&self, p: Player) -> LocSet {
        self.all
            .iter()
            .copied()
            .filter(|&l| self.model.owner(l) == Some(p))
            .collect()
    }

    fn eval(&self, t: &Term, env: &mut HashMap<String, LocSet>) -> Result<LocSet, OracleError> {
        Ok(match t {
            Term::Empty => LocSet::new(),
            Term::All => self.all.clone(),
            Term::Var(x) => env
                .get(x)
                .cloned()
                .ok_or_else(|| OracleError::UnboundVariable(x.clone()))?,
            Term::Union(a, b) => {
                let x = self.eval(a, env)?;
                x.union(&self.eval(b, env)?).copied().collect()
            }
            Term::Inter(a, b) => {
                let x = self.eval(a, env)?;
                x.intersection(&self.eval(b, env)?).copied().collect()
            }
            Term::Not(a) => self.not(&self.eval(a, env)?),
            // Without channels every configuration is minimal and maximal.
            Term::Up(a) | Term::Down(a) | Term::KUp(a) | Term::KDown(a) => self.eval(a, env)?,
            Term::Op { name, args } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                self.apply(name, &vals)?
            }
            Term::Mu(x, body) | Term::Nu(x, body) => {
                let mut cur = if matches!(t, Term::Mu(..)) {
                    LocSet::new()
                } else {
                    self.all.clone()
                };
                let saved = env.remove(x);
                // A monotone chain in a lattice of height n stabilizes within
                // n + 1 steps.
                let mut result = Err(OracleError::NoConvergence);
                for _ in 0..=self.all.len() + 1 {
                    env.insert(x.clone(), cur.clone());
                    let next = self.eval(body, env)?;
                    if next == cur {
                        result = Ok(next);
                        break;
                    }
                    cur = next;
                }
                env.remove(x);
                if let Some(s) = saved {
                    env.insert(x.clone(), s);
                }
                result?
            }
        })
    }

    fn apply(&self, name: &str, args: &[LocSet]) -> Result<LocSet, OracleError> {
        if let (Some(c), []) = (self.constants.get(name), args) {
            return Ok(c.clone());
        }
        Ok(match (name, args) {
            ("pre" | "prep", [s]) => self.pre(s),
            ("wpre" | "wprep", [s]) => self.not(&self.pre(&self.not(s))),
            ("post" | "postp", [s]) => self.post(s),
            ("confA", []) => self.owned(Player::A),
            ("confB", []) => self.owned(Player::B),
            _ => return Err(OracleError::Unknown(name.to_string())),
        })
    }
}

/// Locations of a channel-free model as a set.
pub fn region_locations(r: &Region) -> LocSet {
    r.signature()
        .locations()
        .filter(|&l| r.contains(&empty_config(l)).unwrap_or(false))
        .collect()
}

/// Explicit Knaster–Tarski evaluation on a model without channels, where
/// configurations are just locations. Works for any term, guarded or not.
/// Constants are the model's named regions plus `extra`.
pub fn finite_mc(
    model: &GlcsModel,
    t: &Term,
    extra: &BTreeMap<String, Region>,
) -> Result<LocSet, OracleError> {
    if model.signature().num_channels() != 0 {
        return Err(OracleError::HasChannels);
    }
    let mut constants: BTreeMap<String, LocSet> = model
        .regions()
        .iter()
        .map(|(k, r)| (k.clone(), region_locations(r)))
        .collect();
    for (k, r) in extra {
        constants.insert(k.clone(), region_locations(r));
    }
    let f = Finite {
        model,
        all: model.signature().locations().collect(),
        constants,
    };
    f.eval(t, &mut HashMap::new())
}

/// Classical attractor of `target` for player `p` on a channel-free game
/// graph, by backward induction.
pub fn finite_attractor(model: &GlcsModel, p: Player, target: &LocSet) -> LocSet {
    let f = Finite {
        model,
        all: model.signature().locations().collect(),
        constants: BTreeMap::new(),
    };
    let mut attr = target.clone();
    loop {
        let mut grew = false;
        for &l in &f.all {
            if attr.contains(&l) {
                continue;
            }
            let succ = f.enabled(l);
            let wins = if model.owner(l) == Some(p) {
                succ.iter().any(|t| attr.contains(t))
            } else {
                !succ.is_empty() && succ.iter().all(|t| attr.contains(t))
            };
            if wins {
                attr.insert(l);
                grew = true;
            }
        }
        if !grew {
            return attr;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedReach {
    Reachable,
    Unknown,
}

/// Breadth-first search over lossy steps. Only `Reachable` is conclusive.
pub fn bounded_reach(model: &GlcsModel, start: &Config, v: &Region, depth: usize) -> BoundedReach {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start.clone(), 0)]);
    while let Some((c, d)) = queue.pop_front() {
        if v.contains(&c).unwrap_or(false) {
            return BoundedReach::Reachable;
        }
        if d == depth {
            continue;
        }
        for n in model.step_configs(&c, StepMode::Lossy) {
            if seen.insert(n.clone()) {
                queue.push_back((n, d + 1));
            }
        }
    }
    BoundedReach::Unknown
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameSemantics {
    /// Both players' steps may lose messages.
    Symmetric,
    /// Only B's steps may lose messages.
    Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedGame {
    Win(Player),
    Unknown,
}

/// Reachability game for `p` towards `v`, explored to `depth` moves.
///
/// When the configurations reachable from `start` within `depth` steps are
/// closed under successors, the game is solved exactly on that finite graph
/// and a win for either side is reported. Otherwise a win for `p` within
/// `depth` moves is conclusive and anything else is `Unknown`.
pub fn bounded_game(
    model: &GlcsModel,
    start: &Config,
    p: Player,
    v: &Region,
    semantics: GameSemantics,
    depth: usize,
) -> BoundedGame {
    let succ = |c: &Config| {
        let mode = match (semantics, model.owner(c.location)) {
            (GameSemantics::Asymmetric, Some(Player::A)) => StepMode::Perfect,
            _ => StepMode::Lossy,
        };
        model.step_configs(c, mode)
    };
    let goal = |c: &Config| v.contains(c).unwrap_or(false);

    // Explore the finite neighbourhood.
    let mut graph: BTreeMap<Config, Vec<Config>> = BTreeMap::new();
    let mut queue = VecDeque::from([(start.clone(), 0)]);
    let mut closed = true;
    while let Some((c, d)) = queue.pop_front() {
        if graph.contains_key(&c) {
            continue;
        }
        if d == depth {
            closed = false;
            continue;
        }
        let next = succ(&c);
        for n in &next {
            if !graph.contains_key(n) {
                queue.push_back((n.clone(), d + 1));
            }
        }
        graph.insert(c, next);
    }

    if closed {
        let mut attr: BTreeSet<Config> = graph.keys().filter(|c| goal(c)).cloned().collect();
        loop {
            let add: Vec<Config> = graph
                .iter()
                .filter(|(c, _)| !attr.contains(*c))
                .filter(|(c, next)| {
                    if model.owner(c.location) == Some(p) {
                        next.iter().any(|n| attr.contains(n))
                    } else {
                        !next.is_empty() && next.iter().all(|n| attr.contains(n))
                    }
                })
                .map(|(c, _)| c.clone())
                .collect();
            if add.is_empty() {
                break;
            }
            attr.extend(add);
        }
        return if attr.contains(start) {
            BoundedGame::Win(p)
        } else {
            BoundedGame::Win(p.opponent())
        };
    }

    fn wins(
        c: &Config,
        d: usize,
        p: Player,
        model: &GlcsModel,
        succ: &dyn Fn(&Config) -> Vec<Config>,
        goal: &dyn Fn(&Config) -> bool,
    ) -> bool {
        if goal(c) {
            return true;
        }
        if d == 0 {
            return false;
        }
        let next = succ(c);
        if model.owner(c.location) == Some(p) {
            next.iter().any(|n| wins(n, d - 1, p, model, succ, goal))
        } else {
            !next.is_empty() && next.iter().all(|n| wins(n, d - 1, p, model, succ, goal))
        }
    }
    if wins(start, depth, p, model, &succ, &goal) {
        BoundedGame::Win(p)
    } else {
        BoundedGame::Unknown
    }
}
