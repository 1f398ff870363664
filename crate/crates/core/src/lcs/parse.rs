//! Line-oriented model files:
//!
//! ```text
//! alphabet: a b
//! channels: c d
//! locations: p[A] q[B] r
//! region GOAL = (q; a*; .*)
//! rule p -> q : c!a
//! rule q -> p : c?a guard (q; .*a.*; .*)
//! rule r -> r : nop
//! ```
//!
//! `#` starts a comment. The header lines come first, in any order.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{GlcsModel, ModelError, Op, Player, Rule, CONFIG_OPERATORS};
use crate::automata::Alphabet;
use crate::mu::is_keyword;
use crate::region::{parse_region, Region, Signature};

fn err(line: usize, msg: impl Into<String>) -> ModelError {
    ModelError::Parse {
        line,
        msg: msg.into(),
    }
}

#[derive(Default)]
struct Header {
    alphabet: Option<Vec<String>>,
    channels: Option<Vec<String>>,
    locations: Option<Vec<(String, Option<Player>)>>,
}

fn is_name(s: &str) -> bool {
    !s.is_empty()
        && s.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_')
        && !s.as_bytes()[0].is_ascii_digit()
}

fn parse_location(tok: &str, line: usize) -> Result<(String, Option<Player>), ModelError> {
    let (name, owner) = match tok.split_once('[') {
        None => (tok, None),
        Some((name, rest)) => {
            let owner = match rest {
                "A]" => Player::A,
                "B]" => Player::B,
                _ => return Err(err(line, format!("bad owner annotation in '{tok}'"))),
            };
            (name, Some(owner))
        }
    };
    if !is_name(name) {
        return Err(err(line, format!("'{name}' is not a valid location name")));
    }
    Ok((name.to_string(), owner))
}

pub fn parse_model(text: &str) -> Result<GlcsModel, ModelError> {
    let mut header = Header::default();
    let mut sig: Option<(Arc<Signature>, Vec<Option<Player>>)> = None;
    let mut regions: BTreeMap<String, Region> = BTreeMap::new();
    let mut rules = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(|c: char| c.is_whitespace() || c == ':')
            .unwrap_or((content, ""));
        match keyword {
            "alphabet" | "channels" | "locations" => {
                if sig.is_some() {
                    return Err(err(line, format!("'{keyword}' must precede regions and rules")));
                }
                let rest = rest.trim_start();
                let rest = rest.strip_prefix(':').unwrap_or(rest);
                let items: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let dup = match keyword {
                    "alphabet" => header.alphabet.replace(items).is_some(),
                    "channels" => {
                        if let Some(c) = items.iter().find(|c| !is_name(c)) {
                            return Err(err(line, format!("'{c}' is not a valid channel name")));
                        }
                        header.channels.replace(items).is_some()
                    }
                    _ => {
                        let locs = items
                            .iter()
                            .map(|t| parse_location(t, line))
                            .collect::<Result<Vec<_>, _>>()?;
                        header.locations.replace(locs).is_some()
                    }
                };
                if dup {
                    return Err(err(line, format!("duplicate '{keyword}' line")));
                }
            }
            "region" | "rule" => {
                if sig.is_none() {
                    sig = Some(build_signature(&header, line)?);
                }
                let (s, _) = sig.as_ref().unwrap();
                let named = |n: &str| regions.get(n).cloned();
                if keyword == "region" {
                    let (name, body) = rest
                        .split_once('=')
                        .ok_or_else(|| err(line, "expected 'region NAME = <region>'"))?;
                    let name = name.trim();
                    if !is_name(name) {
                        return Err(err(line, format!("'{name}' is not a valid region name")));
                    }
                    if is_keyword(name) || CONFIG_OPERATORS.iter().any(|(o, _)| *o == name) {
                        return Err(err(line, format!("region name '{name}' is reserved")));
                    }
                    if regions.contains_key(name) {
                        return Err(err(line, format!("region '{name}' declared twice")));
                    }
                    let r = parse_region(body.trim(), s, &named)
                        .map_err(|e| err(line, e.to_string()))?;
                    regions.insert(name.to_string(), r);
                } else {
                    let rule = parse_rule(rest, s, &named, line)?;
                    rules.push(rule);
                }
            }
            _ => return Err(err(line, format!("unknown directive '{keyword}'"))),
        }
    }
    let (sig, owners) = match sig {
        Some(s) => s,
        None => build_signature(&header, last_line.max(1))?,
    };
    GlcsModel::new(sig, owners, rules, regions)
}

fn build_signature(
    h: &Header,
    line: usize,
) -> Result<(Arc<Signature>, Vec<Option<Player>>), ModelError> {
    let alphabet = h
        .alphabet
        .as_ref()
        .ok_or_else(|| err(line, "missing 'alphabet:' line"))?;
    let locations = h
        .locations
        .as_ref()
        .ok_or_else(|| err(line, "missing 'locations:' line"))?;
    if locations.is_empty() {
        return Err(err(line, "at least one location is required"));
    }
    let owned = locations.iter().filter(|(_, o)| o.is_some()).count();
    if owned != 0 && owned != locations.len() {
        return Err(err(line, "either every location has an owner or none does"));
    }
    let alphabet = Alphabet::new(alphabet.clone()).map_err(|e| err(line, e.to_string()))?;
    let channels = h.channels.clone().unwrap_or_default();
    let names = locations.iter().map(|(n, _)| n.clone()).collect();
    let sig = Signature::new(alphabet, names, channels).map_err(|e| err(line, e.to_string()))?;
    Ok((sig, locations.iter().map(|(_, o)| *o).collect()))
}

fn parse_rule(
    text: &str,
    sig: &Arc<Signature>,
    named: &dyn Fn(&str) -> Option<Region>,
    line: usize,
) -> Result<Rule, ModelError> {
    let (ends, rest) = text
        .split_once(':')
        .ok_or_else(|| err(line, "expected 'rule SRC -> DST : op'"))?;
    let (src, dst) = ends
        .split_once("->")
        .ok_or_else(|| err(line, "expected '->' between locations"))?;
    let loc = |name: &str| {
        let name = name.trim();
        sig.location(name)
            .ok_or_else(|| err(line, format!("unknown location '{name}'")))
    };
    let (source, target) = (loc(src)?, loc(dst)?);
    let rest = rest.trim();
    let (op_text, guard_text) = match rest.split_once(char::is_whitespace) {
        Some((op, g)) => {
            let g = g.trim_start();
            let g = g
                .strip_prefix("guard")
                .ok_or_else(|| err(line, format!("unexpected '{g}' after operation")))?;
            (op, Some(g.trim()))
        }
        None => (rest, None),
    };
    let op = parse_op(op_text, sig, line)?;
    let guard = match guard_text {
        None => None,
        Some(g) => Some(parse_region(g, sig, named).map_err(|e| err(line, e.to_string()))?),
    };
    Ok(Rule {
        source,
        target,
        op,
        guard,
    })
}

fn parse_op(text: &str, sig: &Signature, line: usize) -> Result<Op, ModelError> {
    if text == "nop" {
        return Ok(Op::Nop);
    }
    let (idx, send) = match (text.find('!'), text.find('?')) {
        (Some(i), None) => (i, true),
        (None, Some(i)) => (i, false),
        _ => return Err(err(line, format!("'{text}' is not c!m, c?m or nop"))),
    };
    let (chan, sym) = (&text[..idx], &text[idx + 1..]);
    let channel = sig
        .channel(chan)
        .ok_or_else(|| err(line, format!("unknown channel '{chan}'")))?;
    let symbol = sig
        .alphabet()
        .lookup(sym)
        .ok_or_else(|| err(line, format!("unknown message '{sym}'")))?;
    Ok(if send {
        Op::Send { channel, symbol }
    } else {
        Op::Recv { channel, symbol }
    })
}
