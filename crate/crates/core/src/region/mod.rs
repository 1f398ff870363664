//! Regions of the configuration space `Q × (Mess*)^C`.
//!
//! A region is a finite sum of products `(q, R¹, …, Rⁿ)`, one regular language
//! per channel. Sums of products have no unique shape, so every operation
//! that needs one goes through the multi-track encoding of a location: the
//! language `{ w₁ # w₂ # … # wₙ }` over the message alphabet extended with a
//! separator letter. Its minimal DFA is unique, and cutting that DFA at the
//! separator transitions yields a canonical list of products.

mod text;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::automata::{AutomataError, Alphabet, CanonicalDfa, Dfa, Direction, Nfa, Symbol, Word};

pub use text::{parse_config, parse_region};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("regions belong to different models")]
    SignatureMismatch,
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("unknown location '{0}'")]
    UnknownLocation(String),
    #[error("unknown region '{0}'")]
    UnknownRegion(String),
    #[error("expected {expected} channel component(s), found {found}")]
    ChannelCount { expected: usize, found: usize },
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location(pub u32);

impl Location {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Locations, channels and message alphabet shared by all regions of a model.
#[derive(Debug)]
pub struct Signature {
    alphabet: Alphabet,
    locations: Vec<String>,
    channels: Vec<String>,
    loc_index: HashMap<String, Location>,
    ext: Alphabet,
    sep: Symbol,
    universe: Dfa,
}

impl Signature {
    pub fn new(
        alphabet: Alphabet,
        locations: Vec<String>,
        channels: Vec<String>,
    ) -> Result<Arc<Signature>, RegionError> {
        let mut loc_index = HashMap::new();
        for (i, l) in locations.iter().enumerate() {
            if loc_index.insert(l.clone(), Location(i as u32)).is_some() {
                return Err(RegionError::Syntax {
                    pos: 0,
                    msg: format!("duplicate location '{l}'"),
                });
            }
        }
        let (ext, sep) = alphabet.with_separator();
        let universe = {
            let sigma_star = Nfa::universal(&alphabet).widen(&ext);
            let sep_nfa = Nfa::symbol(&ext, sep);
            let mut u = if channels.is_empty() {
                Nfa::epsilon(&ext)
            } else {
                sigma_star.clone()
            };
            for _ in 1..channels.len() {
                u = u.concat(&sep_nfa)?.concat(&sigma_star)?;
            }
            Dfa::from_nfa(&u).minimize()
        };
        Ok(Arc::new(Signature {
            alphabet,
            locations,
            channels,
            loc_index,
            ext,
            sep,
            universe,
        }))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn locations(&self) -> impl Iterator<Item = Location> {
        (0..self.locations.len() as u32).map(Location)
    }

    pub fn num_locations(&self) -> usize {
        self.locations.len()
    }

    pub fn location_name(&self, l: Location) -> &str {
        &self.locations[l.index()]
    }

    pub fn location(&self, name: &str) -> Option<Location> {
        self.loc_index.get(name).copied()
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channel(&self, name: &str) -> Option<usize> {
        self.channels.iter().position(|c| c == name)
    }

    fn same(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
        Arc::ptr_eq(a, b)
            || (a.alphabet == b.alphabet && a.locations == b.locations && a.channels == b.channels)
    }
}

/// One concrete configuration: a location and one word per channel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Config {
    pub location: Location,
    pub words: Vec<Word>,
}

impl Config {
    pub fn display(&self, sig: &Signature) -> String {
        let words: Vec<String> = self
            .words
            .iter()
            .map(|w| sig.alphabet.format_word(w))
            .collect();
        format!("{} : {}", sig.location_name(self.location), words.join(", "))
    }

    /// `self ⊑ other`: same location and channel-wise subword.
    pub fn is_below(&self, other: &Config) -> bool {
        self.location == other.location
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(u, v)| is_subword(u, v))
    }
}

pub(crate) fn is_subword(u: &[Symbol], v: &[Symbol]) -> bool {
    let mut it = v.iter();
    u.iter().all(|a| it.any(|b| b == a))
}

/// One summand `(q, R¹, …, Rⁿ)`.
#[derive(Debug, Clone)]
pub struct Product {
    pub location: Location,
    pub channels: Vec<Nfa>,
}

impl Product {
    pub fn is_empty(&self) -> bool {
        self.channels.iter().any(Nfa::is_empty)
    }

    pub fn contains(&self, c: &Config) -> bool {
        c.location == self.location
            && self
                .channels
                .iter()
                .zip(&c.words)
                .all(|(l, w)| l.contains(w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionBoolOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureMode {
    Closure,
    Kernel,
}

#[derive(Debug, Clone)]
pub enum RegionQuery<'a> {
    Empty,
    Universal,
    Member(&'a Config),
    Equal(&'a Region),
    Subset(&'a Region),
}

/// A finite sum of products over one model signature.
#[derive(Clone)]
pub struct Region {
    sig: Arc<Signature>,
    summands: Vec<Product>,
}

/// Per-location canonical encodings; equal keys iff equal regions.
pub type RegionKey = Vec<(Location, CanonicalDfa)>;

impl Region {
    // ---- construction -------------------------------------------------

    pub fn empty(sig: &Arc<Signature>) -> Region {
        Region {
            sig: sig.clone(),
            summands: Vec::new(),
        }
    }

    pub fn full(sig: &Arc<Signature>) -> Region {
        let summands = sig.locations().map(|l| Self::full_product(sig, l)).collect();
        Region {
            sig: sig.clone(),
            summands,
        }
    }

    fn full_product(sig: &Signature, l: Location) -> Product {
        Product {
            location: l,
            channels: vec![Nfa::universal(&sig.alphabet); sig.num_channels()],
        }
    }

    /// `{q} × (Mess*)^C`.
    pub fn at_location(sig: &Arc<Signature>, l: Location) -> Region {
        Region {
            sig: sig.clone(),
            summands: vec![Self::full_product(sig, l)],
        }
    }

    pub fn product(
        sig: &Arc<Signature>,
        location: Location,
        channels: Vec<Nfa>,
    ) -> Result<Region, RegionError> {
        Self::from_products(sig, vec![Product { location, channels }])
    }

    /// Builds a region from raw summands, checking shapes. The result is not
    /// normalized.
    pub fn from_products(
        sig: &Arc<Signature>,
        summands: Vec<Product>,
    ) -> Result<Region, RegionError> {
        for p in &summands {
            if p.location.index() >= sig.num_locations() {
                return Err(RegionError::UnknownLocation(format!("#{}", p.location.0)));
            }
            if p.channels.len() != sig.num_channels() {
                return Err(RegionError::ChannelCount {
                    expected: sig.num_channels(),
                    found: p.channels.len(),
                });
            }
            if p.channels.iter().any(|n| *n.alphabet() != sig.alphabet) {
                return Err(RegionError::Automata(AutomataError::AlphabetMismatch));
            }
        }
        Ok(Region {
            sig: sig.clone(),
            summands,
        })
    }

    /// The singleton region `{c}`.
    pub fn singleton(sig: &Arc<Signature>, c: &Config) -> Result<Region, RegionError> {
        let channels = c.words.iter().map(|w| Nfa::word(&sig.alphabet, w)).collect();
        Self::product(sig, c.location, channels)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn summands(&self) -> &[Product] {
        &self.summands
    }

    fn check(&self, other: &Region) -> Result<(), RegionError> {
        if Signature::same(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(RegionError::SignatureMismatch)
        }
    }

    /// Total number of automaton states over all summands.
    pub fn size(&self) -> usize {
        self.summands
            .iter()
            .flat_map(|p| p.channels.iter())
            .map(Nfa::num_states)
            .sum()
    }

    // ---- multi-track encoding -----------------------------------------

    fn encode_product(&self, p: &Product) -> Nfa {
        let sig = &*self.sig;
        let sep = Nfa::symbol(&sig.ext, sig.sep);
        let mut acc: Option<Nfa> = None;
        for lang in &p.channels {
            let l = lang.widen(&sig.ext);
            acc = Some(match acc {
                None => l,
                Some(a) => a
                    .concat(&sep)
                    .and_then(|x| x.concat(&l))
                    .expect("shared alphabet"),
            });
        }
        acc.unwrap_or_else(|| Nfa::epsilon(&sig.ext))
    }

    fn encoded_by_location(&self) -> BTreeMap<Location, Dfa> {
        let mut grouped: BTreeMap<Location, Nfa> = BTreeMap::new();
        for p in &self.summands {
            let e = self.encode_product(p);
            let entry = grouped
                .entry(p.location)
                .or_insert_with(|| Nfa::empty(&self.sig.ext));
            *entry = entry.union(&e).expect("shared alphabet");
        }
        grouped
            .into_iter()
            .map(|(l, n)| (l, Dfa::from_nfa(&n).minimize()))
            .collect()
    }

    fn empty_ext(&self) -> Dfa {
        Dfa::from_nfa(&Nfa::empty(&self.sig.ext))
    }

    /// Canonical cut of a minimal encoded DFA into products.
    fn decode(sig: &Signature, l: Location, d: &Dfa) -> Vec<Product> {
        let k = sig.num_channels();
        if d.is_empty() {
            return Vec::new();
        }
        if k == 0 {
            return if d.accepting[0] {
                vec![Product {
                    location: l,
                    channels: Vec::new(),
                }]
            } else {
                Vec::new()
            };
        }
        let dead = d.dead_states();
        Self::decode_from(sig, d, &dead, 0, k)
            .into_iter()
            .map(|channels| Product {
                location: l,
                channels,
            })
            .collect()
    }

    fn decode_from(
        sig: &Signature,
        d: &Dfa,
        dead: &[bool],
        start: usize,
        remaining: usize,
    ) -> Vec<Vec<Nfa>> {
        if remaining == 1 {
            let comp = Self::track(sig, d, start, |p| d.accepting[p]);
            return if comp.is_empty() {
                Vec::new()
            } else {
                vec![vec![comp]]
            };
        }
        let reach = Self::track_states(sig, d, start);
        let targets: BTreeSet<usize> = reach
            .iter()
            .map(|&p| d.step(p, sig.sep))
            .filter(|&t| !dead[t])
            .collect();
        let mut out = Vec::new();
        for t in targets {
            let comp = Self::track(sig, d, start, |p| d.step(p, sig.sep) == t);
            if comp.is_empty() {
                continue;
            }
            for tail in Self::decode_from(sig, d, dead, t, remaining - 1) {
                let mut row = Vec::with_capacity(remaining);
                row.push(comp.clone());
                row.extend(tail);
                out.push(row);
            }
        }
        out
    }

    /// States reachable from `start` reading message letters only.
    fn track_states(sig: &Signature, d: &Dfa, start: usize) -> Vec<usize> {
        let mut seen = vec![false; d.num_states()];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for a in sig.alphabet.symbols() {
                let t = d.step(s, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Message-letter language read from `start` up to a state satisfying
    /// `accept`, as a minimal automaton over the message alphabet.
    fn track(sig: &Signature, d: &Dfa, start: usize, accept: impl Fn(usize) -> bool) -> Nfa {
        let states = Self::track_states(sig, d, start);
        let mut id = vec![u32::MAX; d.num_states()];
        for (i, &s) in states.iter().enumerate() {
            id[s] = i as u32;
        }
        let width = sig.alphabet.len();
        let mut next = Vec::with_capacity(states.len() * width);
        let mut accepting = Vec::with_capacity(states.len());
        for &s in &states {
            accepting.push(accept(s));
            for a in sig.alphabet.symbols() {
                next.push(id[d.step(s, a)]);
            }
        }
        Dfa {
            alphabet: sig.alphabet.clone(),
            width,
            next,
            accepting,
        }
        .minimize()
        .to_nfa()
    }

    /// Combines two regions location by location on their encodings.
    fn combine(&self, other: &Region, f: impl Fn(bool, bool) -> bool) -> Region {
        let mut a = self.encoded_by_location();
        let mut b = other.encoded_by_location();
        let mut summands = Vec::new();
        for l in self.sig.locations() {
            let da = a.remove(&l).unwrap_or_else(|| self.empty_ext());
            let db = b.remove(&l).unwrap_or_else(|| self.empty_ext());
            let d = Dfa::product(&da, &db, &f).minimize();
            summands.extend(Self::decode(&self.sig, l, &d));
        }
        Region {
            sig: self.sig.clone(),
            summands,
        }
    }

    // ---- boolean operations ------------------------------------------

    /// Canonical sum of products for the same set of configurations: empty
    /// summands vanish, summands sharing a location are merged through the
    /// location encoding, and component automata are minimal.
    pub fn normalize(&self) -> Region {
        let mut summands = Vec::new();
        for (l, d) in self.encoded_by_location() {
            summands.extend(Self::decode(&self.sig, l, &d));
        }
        Region {
            sig: self.sig.clone(),
            summands,
        }
    }

    pub fn union(&self, other: &Region) -> Result<Region, RegionError> {
        self.check(other)?;
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Ok(Region {
            sig: self.sig.clone(),
            summands,
        }
        .normalize())
    }

    pub fn intersection(&self, other: &Region) -> Result<Region, RegionError> {
        self.check(other)?;
        Ok(self.combine(other, |x, y| x && y))
    }

    pub fn difference(&self, other: &Region) -> Result<Region, RegionError> {
        self.check(other)?;
        Ok(self.combine(other, |x, y| x && !y))
    }

    pub fn complement(&self) -> Region {
        let mut enc = self.encoded_by_location();
        let mut summands = Vec::new();
        for l in self.sig.locations() {
            let d = match enc.remove(&l) {
                None => self.sig.universe.clone(),
                Some(d) => Dfa::product(&self.sig.universe, &d, |x, y| x && !y).minimize(),
            };
            summands.extend(Self::decode(&self.sig, l, &d));
        }
        Region {
            sig: self.sig.clone(),
            summands,
        }
    }

    pub fn boolean(&self, op: RegionBoolOp, other: Option<&Region>) -> Result<Region, RegionError> {
        match (op, other) {
            (RegionBoolOp::Complement, _) => Ok(self.complement()),
            (RegionBoolOp::Union, Some(b)) => self.union(b),
            (RegionBoolOp::Intersection, Some(b)) => self.intersection(b),
            (RegionBoolOp::Difference, Some(b)) => self.difference(b),
            (_, None) => panic!("binary region operator applied to one operand"),
        }
    }

    // ---- closures and kernels -----------------------------------------

    fn map_channels(&self, f: impl Fn(&Nfa) -> Nfa) -> Region {
        let summands = self
            .summands
            .iter()
            .map(|p| Product {
                location: p.location,
                channels: p.channels.iter().map(&f).collect(),
            })
            .collect();
        Region {
            sig: self.sig.clone(),
            summands,
        }
        .normalize()
    }

    /// Componentwise subword upward closure at fixed location.
    pub fn up_closure(&self) -> Region {
        self.map_channels(Nfa::up_closure)
    }

    pub fn down_closure(&self) -> Region {
        self.map_channels(Nfa::down_closure)
    }

    pub fn up_kernel(&self) -> Region {
        self.complement().down_closure().complement()
    }

    pub fn down_kernel(&self) -> Region {
        self.complement().up_closure().complement()
    }

    pub fn closure(&self, direction: Direction, mode: ClosureMode) -> Region {
        match (direction, mode) {
            (Direction::Up, ClosureMode::Closure) => self.up_closure(),
            (Direction::Down, ClosureMode::Closure) => self.down_closure(),
            (Direction::Up, ClosureMode::Kernel) => self.up_kernel(),
            (Direction::Down, ClosureMode::Kernel) => self.down_kernel(),
        }
    }

    // ---- decisions ---------------------------------------------------

    pub fn is_empty(&self) -> bool {
        self.summands.iter().all(Product::is_empty)
    }

    pub fn contains(&self, c: &Config) -> Result<bool, RegionError> {
        if c.location.index() >= self.sig.num_locations() {
            return Err(RegionError::UnknownLocation(format!("#{}", c.location.0)));
        }
        if c.words.len() != self.sig.num_channels() {
            return Err(RegionError::ChannelCount {
                expected: self.sig.num_channels(),
                found: c.words.len(),
            });
        }
        if c
            .words
            .iter()
            .flatten()
            .any(|s| s.index() >= self.sig.alphabet.len())
        {
            return Err(RegionError::Automata(AutomataError::AlphabetMismatch));
        }
        Ok(self.summands.iter().any(|p| p.contains(c)))
    }

    pub fn canonical_key(&self) -> RegionKey {
        self.encoded_by_location()
            .into_iter()
            .filter(|(_, d)| !d.is_empty())
            .map(|(l, d)| (l, CanonicalDfa(d)))
            .collect()
    }

    pub fn equals(&self, other: &Region) -> Result<bool, RegionError> {
        self.check(other)?;
        Ok(self.canonical_key() == other.canonical_key())
    }

    pub fn is_subset(&self, other: &Region) -> Result<bool, RegionError> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_universal(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn decide(&self, query: RegionQuery<'_>) -> Result<bool, RegionError> {
        match query {
            RegionQuery::Empty => Ok(self.is_empty()),
            RegionQuery::Universal => self.equals(&Region::full(&self.sig)),
            RegionQuery::Member(c) => self.contains(c),
            RegionQuery::Equal(b) => self.equals(b),
            RegionQuery::Subset(b) => self.is_subset(b),
        }
    }

    /// Minimal DFA size of each nonempty location encoding.
    pub fn location_sizes(&self) -> Vec<(Location, usize)> {
        self.canonical_key()
            .into_iter()
            .map(|(l, d)| (l, d.num_states()))
            .collect()
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Region({self})")
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_region(self))
    }
}
