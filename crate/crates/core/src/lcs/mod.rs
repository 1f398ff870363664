//! Guarded lossy channel systems: models, the model file format, validation,
//! and symbolic step operators on regions.

mod algebra;
mod parse;
mod steps;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::automata::Symbol;
use crate::region::{Location, Region, RegionError, Signature};

pub use algebra::{ConfigAlgebra, CONFIG_OPERATORS};
pub use parse::parse_model;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Region(#[from] RegionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::A => "A",
            Player::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Send { channel: usize, symbol: Symbol },
    Recv { channel: usize, symbol: Symbol },
    Nop,
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub source: Location,
    pub target: Location,
    pub op: Op,
    /// `None` means the rule is always enabled (apart from its read).
    pub guard: Option<Region>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    Perfect,
    Lossy,
}

/// A channel system with optional guards and an optional owner for every
/// location.
#[derive(Debug, Clone)]
pub struct GlcsModel {
    sig: Arc<Signature>,
    owners: Vec<Option<Player>>,
    rules: Vec<Rule>,
    regions: BTreeMap<String, Region>,
}

/// One violated structural assumption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Some configuration at this location enables no sending or internal
    /// rule.
    Deadlock { location: String },
    /// A rule that does not hand the turn to the other player.
    Alternation { rule: usize, text: String },
    /// Game mode was required but the locations have no owners.
    NotGame,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Deadlock { location } => {
                write!(f, "deadlock: location {location} may have no non-receiving rule enabled")
            }
            Violation::Alternation { rule, text } => {
                write!(f, "alternation: rule {rule} ({text}) stays with the same player")
            }
            Violation::NotGame => f.write_str("not a game: locations have no owners"),
        }
    }
}

impl GlcsModel {
    pub fn new(
        sig: Arc<Signature>,
        owners: Vec<Option<Player>>,
        rules: Vec<Rule>,
        regions: BTreeMap<String, Region>,
    ) -> Result<GlcsModel, ModelError> {
        let bad = |msg: String| ModelError::Parse { line: 0, msg };
        if owners.len() != sig.num_locations() {
            return Err(bad("one owner entry per location expected".into()));
        }
        if owners.iter().any(Option::is_some) && owners.iter().any(Option::is_none) {
            return Err(bad("either every location has an owner or none does".into()));
        }
        for r in &rules {
            if r.source.index() >= sig.num_locations() || r.target.index() >= sig.num_locations() {
                return Err(bad("rule endpoint is not a declared location".into()));
            }
            if let Op::Send { channel, symbol } | Op::Recv { channel, symbol } = r.op {
                if channel >= sig.num_channels() || symbol.index() >= sig.alphabet().len() {
                    return Err(bad("rule uses an undeclared channel or symbol".into()));
                }
            }
            if let Some(g) = &r.guard {
                if g.intersection(&Region::full(&sig)).is_err() {
                    return Err(RegionError::SignatureMismatch.into());
                }
            }
        }
        Ok(GlcsModel {
            sig,
            owners,
            rules,
            regions,
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn owner(&self, l: Location) -> Option<Player> {
        self.owners[l.index()]
    }

    pub fn is_game(&self) -> bool {
        self.owners.iter().all(Option::is_some) && !self.owners.is_empty()
    }

    pub fn regions(&self) -> &BTreeMap<String, Region> {
        &self.regions
    }

    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.get(name)
    }

    /// Configurations whose location belongs to `p`.
    pub fn conf(&self, p: Player) -> Region {
        self.sig
            .locations()
            .filter(|&l| self.owner(l) == Some(p))
            .fold(Region::empty(&self.sig), |acc, l| {
                acc.union(&Region::at_location(&self.sig, l))
                    .expect("same signature")
            })
    }

    pub fn rule_text(&self, r: &Rule) -> String {
        let sig = &self.sig;
        let op = match r.op {
            Op::Send { channel, symbol } => {
                format!("{}!{}", sig.channels()[channel], sig.alphabet().name(symbol))
            }
            Op::Recv { channel, symbol } => {
                format!("{}?{}", sig.channels()[channel], sig.alphabet().name(symbol))
            }
            Op::Nop => "nop".into(),
        };
        let mut s = format!(
            "{} -> {} : {op}",
            sig.location_name(r.source),
            sig.location_name(r.target)
        );
        if let Some(g) = &r.guard {
            s.push_str(&format!(" guard {g}"));
        }
        s
    }

    /// Structural assumptions: no deadlocks, and strict alternation when
    /// `game` is set or the model has owners.
    pub fn validate(&self, game: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        for l in self.sig.locations() {
            let at = Region::at_location(&self.sig, l);
            let mut enabled = Region::empty(&self.sig);
            for r in &self.rules {
                if r.source == l && !matches!(r.op, Op::Recv { .. }) {
                    let g = r.guard.clone().unwrap_or_else(|| at.clone());
                    enabled = enabled.union(&g).expect("same signature");
                }
            }
            if !at.is_subset(&enabled).expect("same signature") {
                out.push(Violation::Deadlock {
                    location: self.sig.location_name(l).to_string(),
                });
            }
        }
        if game && !self.is_game() {
            out.push(Violation::NotGame);
        }
        if self.is_game() {
            for (i, r) in self.rules.iter().enumerate() {
                if self.owner(r.source) == self.owner(r.target) {
                    out.push(Violation::Alternation {
                        rule: i + 1,
                        text: self.rule_text(r),
                    });
                }
            }
        }
        out
    }
}
