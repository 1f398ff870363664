//! Region expressions: `{}` | `all` | atom ("+" atom)*, where an atom is
//! `(LOC; regex; …; regex)` with one pattern per channel, or the name of a
//! declared region.

use std::sync::Arc;

use super::{Config, Region, RegionError, Signature};
use crate::automata::{compile_regex, dfa_to_regex, is_identifier_char, AutomataError};

fn syntax(pos: usize, msg: impl Into<String>) -> RegionError {
    RegionError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

/// Parses a region expression. `named` resolves identifiers that are not
/// keywords.
pub fn parse_region(
    text: &str,
    sig: &Arc<Signature>,
    named: &dyn Fn(&str) -> Option<Region>,
) -> Result<Region, RegionError> {
    let b = text.as_bytes();
    let mut i = skip_ws(b, 0);
    if text[i..].trim() == "{}" {
        return Ok(Region::empty(sig));
    }
    let mut acc = Region::empty(sig);
    loop {
        i = skip_ws(b, i);
        if i >= b.len() {
            return Err(syntax(i, "expected a region atom"));
        }
        if b[i] == b'(' {
            let open = i;
            let mut depth = 0usize;
            let mut close = None;
            for (j, &c) in b.iter().enumerate().skip(open) {
                match c {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            close = Some(j);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let close = close.ok_or_else(|| syntax(open, "unbalanced '('"))?;
            acc = acc.union(&parse_atom(text, open + 1, close, sig)?)?;
            i = close + 1;
        } else if is_identifier_char(b[i]) {
            let start = i;
            while i < b.len() && is_identifier_char(b[i]) {
                i += 1;
            }
            let name = &text[start..i];
            let r = match name {
                "all" => Region::full(sig),
                "empty" => Region::empty(sig),
                _ => named(name).ok_or_else(|| RegionError::UnknownRegion(name.to_string()))?,
            };
            acc = acc.union(&r)?;
        } else {
            return Err(syntax(i, "expected '(' or a region name"));
        }
        i = skip_ws(b, i);
        if i >= b.len() {
            return Ok(acc);
        }
        if b[i] != b'+' {
            return Err(syntax(i, "expected '+'"));
        }
        i += 1;
    }
}

fn parse_atom(
    text: &str,
    start: usize,
    end: usize,
    sig: &Arc<Signature>,
) -> Result<Region, RegionError> {
    let inner = &text[start..end];
    let mut pieces = Vec::new();
    let mut offset = start;
    for piece in inner.split(';') {
        pieces.push((offset, piece));
        offset += piece.len() + 1;
    }
    let (loc_off, loc_text) = pieces[0];
    let loc_name = loc_text.trim();
    let loc = sig.location(loc_name).ok_or_else(|| {
        if loc_name.is_empty() {
            syntax(loc_off, "missing location")
        } else {
            RegionError::UnknownLocation(loc_name.to_string())
        }
    })?;
    let patterns = &pieces[1..];
    if patterns.len() != sig.num_channels() {
        return Err(RegionError::ChannelCount {
            expected: sig.num_channels(),
            found: patterns.len(),
        });
    }
    let mut channels = Vec::with_capacity(patterns.len());
    for &(off, p) in patterns {
        let nfa = compile_regex(p, sig.alphabet()).map_err(|e| match e {
            AutomataError::Syntax { pos, msg } => syntax(off + pos, msg),
            other => RegionError::Automata(other),
        })?;
        channels.push(nfa);
    }
    Region::product(sig, loc, channels)
}

/// Parses `loc : w1, w2, …` with one word per channel.
pub fn parse_config(text: &str, sig: &Signature) -> Result<Config, RegionError> {
    let (loc_text, rest) = match text.find(':') {
        Some(i) => (&text[..i], Some(&text[i + 1..])),
        None => (text, None),
    };
    let loc_name = loc_text.trim();
    let location = sig
        .location(loc_name)
        .ok_or_else(|| RegionError::UnknownLocation(loc_name.to_string()))?;
    let k = sig.num_channels();
    let raw: Vec<&str> = match rest {
        None => Vec::new(),
        Some(r) if k == 0 && r.trim().is_empty() => Vec::new(),
        Some(r) => r.split(',').collect(),
    };
    if raw.len() != k {
        return Err(RegionError::ChannelCount {
            expected: k,
            found: raw.len(),
        });
    }
    let words = raw
        .into_iter()
        .map(|w| sig.alphabet().parse_word(w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Config { location, words })
}

pub(super) fn format_region(r: &Region) -> String {
    let n = r.normalize();
    if n.summands.is_empty() {
        return "{}".into();
    }
    if n.is_universal() {
        return "all".into();
    }
    let atoms: Vec<String> = n
        .summands
        .iter()
        .map(|p| {
            let mut s = format!("({}", r.sig.location_name(p.location));
            for c in &p.channels {
                s.push_str("; ");
                s.push_str(&dfa_to_regex(&c.canonicalize()));
            }
            s.push(')');
            s
        })
        .collect();
    atoms.join(" + ")
}
