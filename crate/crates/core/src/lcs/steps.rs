use std::collections::BTreeSet;

use super::{GlcsModel, Op, Rule, StepMode};
use crate::automata::{Nfa, Word};
use crate::region::{Config, Product, Region, RegionError};

impl GlcsModel {
    fn typed(&self, r: &Region) -> Result<(), RegionError> {
        Region::empty(&self.sig).union(r).map(|_| ())
    }

    fn guarded(&self, rule: &Rule, r: Region) -> Region {
        match &rule.guard {
            Some(g) => r.intersection(g).expect("guard typed against the model"),
            None => r,
        }
    }

    /// Perfect predecessors through one rule, without normalization or guard.
    fn pre_products(&self, rule: &Rule, r: &Region) -> Vec<Product> {
        let al = self.sig.alphabet();
        r.summands()
            .iter()
            .filter(|p| p.location == rule.target)
            .map(|p| {
                let mut channels = p.channels.clone();
                match rule.op {
                    Op::Recv { channel, symbol } => {
                        channels[channel] = Nfa::symbol(al, symbol)
                            .concat(&channels[channel])
                            .expect("same alphabet");
                    }
                    Op::Send { channel, symbol } => {
                        channels[channel] = channels[channel]
                            .right_residual(&Nfa::symbol(al, symbol))
                            .expect("same alphabet");
                    }
                    Op::Nop => {}
                }
                Product {
                    location: rule.source,
                    channels,
                }
            })
            .collect()
    }

    /// `G ∩ Pre_perf[rule](R)`.
    pub fn pre_perf_rule(&self, rule: &Rule, r: &Region) -> Result<Region, RegionError> {
        self.typed(r)?;
        let raw = Region::from_products(&self.sig, self.pre_products(rule, r))?.normalize();
        Ok(self.guarded(rule, raw))
    }

    /// Existential predecessors. Lossy mode is the perfect predecessor of
    /// the upward closure.
    pub fn pre(&self, r: &Region, mode: StepMode) -> Result<Region, RegionError> {
        self.typed(r)?;
        let r = match mode {
            StepMode::Perfect => r.clone(),
            StepMode::Lossy => r.up_closure(),
        };
        let mut acc = Region::empty(&self.sig);
        let mut unguarded = Vec::new();
        for rule in &self.rules {
            if rule.guard.is_some() {
                acc = acc.union(&self.pre_perf_rule(rule, &r)?)?;
            } else {
                unguarded.extend(self.pre_products(rule, &r));
            }
        }
        acc.union(&Region::from_products(&self.sig, unguarded)?)
    }

    /// Universal predecessors: `!pre(!R)`.
    pub fn wpre(&self, r: &Region, mode: StepMode) -> Result<Region, RegionError> {
        self.typed(r)?;
        Ok(self.pre(&r.complement(), mode)?.complement())
    }

    pub fn post_perf_rule(&self, rule: &Rule, r: &Region) -> Result<Region, RegionError> {
        self.typed(r)?;
        let r = self.guarded(rule, r.clone());
        let al = self.sig.alphabet();
        let products = r
            .summands()
            .iter()
            .filter(|p| p.location == rule.source)
            .map(|p| {
                let mut channels = p.channels.clone();
                match rule.op {
                    Op::Send { channel, symbol } => {
                        channels[channel] = channels[channel]
                            .concat(&Nfa::symbol(al, symbol))
                            .expect("same alphabet");
                    }
                    Op::Recv { channel, symbol } => {
                        channels[channel] = Nfa::symbol(al, symbol)
                            .left_residual(&channels[channel])
                            .expect("same alphabet");
                    }
                    Op::Nop => {}
                }
                Product {
                    location: rule.target,
                    channels,
                }
            })
            .collect();
        Ok(Region::from_products(&self.sig, products)?.normalize())
    }

    /// Successors. Lossy mode is the downward closure of the perfect image.
    pub fn post(&self, r: &Region, mode: StepMode) -> Result<Region, RegionError> {
        self.typed(r)?;
        let mut acc = Region::empty(&self.sig);
        for rule in &self.rules {
            acc = acc.union(&self.post_perf_rule(rule, r)?)?;
        }
        Ok(match mode {
            StepMode::Perfect => acc,
            StepMode::Lossy => acc.down_closure(),
        })
    }

    /// Perfect successor of `c` through `rule`, if the rule is enabled.
    pub fn fire(&self, rule: &Rule, c: &Config) -> Option<Config> {
        if rule.source != c.location {
            return None;
        }
        if let Some(g) = &rule.guard {
            if !g.contains(c).ok()? {
                return None;
            }
        }
        let mut words = c.words.clone();
        match rule.op {
            Op::Send { channel, symbol } => words[channel].push(symbol),
            Op::Recv { channel, symbol } => {
                if words[channel].first() != Some(&symbol) {
                    return None;
                }
                words[channel].remove(0);
            }
            Op::Nop => {}
        }
        Some(Config {
            location: rule.target,
            words,
        })
    }

    /// All successors of one configuration, sorted. Lossy successors are
    /// every configuration below a perfect successor.
    pub fn step_configs(&self, c: &Config, mode: StepMode) -> Vec<Config> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            if let Some(next) = self.fire(rule, c) {
                match mode {
                    StepMode::Perfect => {
                        out.insert(next);
                    }
                    StepMode::Lossy => out.extend(configs_below(&next)),
                }
            }
        }
        out.into_iter().collect()
    }
}

fn subwords(w: &Word) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for mask in 0u64..(1u64 << w.len()) {
        out.insert(
            w.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &s)| s)
                .collect(),
        );
    }
    out
}

/// Every configuration `⊑ c`.
pub fn configs_below(c: &Config) -> Vec<Config> {
    let mut rows: Vec<Vec<Word>> = vec![Vec::new()];
    for w in &c.words {
        let subs = subwords(w);
        rows = rows
            .into_iter()
            .flat_map(|r| {
                subs.iter().map(move |s| {
                    let mut r = r.clone();
                    r.push(s.clone());
                    r
                })
            })
            .collect();
    }
    rows.into_iter()
        .map(|words| Config {
            location: c.location,
            words,
        })
        .collect()
}
