use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Fixpoint terms over an operator family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Application of a named operator; nullary operators are constants.
    Op { name: String, args: Vec<Term> },
    Empty,
    All,
    Union(Box<Term>, Box<Term>),
    Inter(Box<Term>, Box<Term>),
    Not(Box<Term>),
    Var(String),
    Mu(String, Box<Term>),
    Nu(String, Box<Term>),
    Up(Box<Term>),
    Down(Box<Term>),
    KUp(Box<Term>),
    KDown(Box<Term>),
}

/// Kind of fixpoint binder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fix {
    Least,
    Greatest,
}

/// A free occurrence of a bound variable that is not properly guarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Offense {
    pub binder: String,
    /// Child indices from the binder body down to the occurrence.
    pub path: Vec<usize>,
}

impl Term {
    pub fn op(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Op {
            name: name.into(),
            args,
        }
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::op(name, Vec::new())
    }

    pub fn unary(name: impl Into<String>, arg: Term) -> Term {
        Term::op(name, vec![arg])
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn or(self, other: Term) -> Term {
        Term::Union(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Term) -> Term {
        Term::Inter(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Term {
        Term::Not(Box::new(self))
    }

    pub fn up(self) -> Term {
        Term::Up(Box::new(self))
    }

    pub fn down(self) -> Term {
        Term::Down(Box::new(self))
    }

    pub fn kup(self) -> Term {
        Term::KUp(Box::new(self))
    }

    pub fn kdown(self) -> Term {
        Term::KDown(Box::new(self))
    }

    pub fn mu(x: impl Into<String>, body: Term) -> Term {
        Term::Mu(x.into(), Box::new(body))
    }

    pub fn nu(x: impl Into<String>, body: Term) -> Term {
        Term::Nu(x.into(), Box::new(body))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Op { args, .. } => args.iter().collect(),
            Term::Empty | Term::All | Term::Var(_) => Vec::new(),
            Term::Union(a, b) | Term::Inter(a, b) => vec![a, b],
            Term::Not(a)
            | Term::Mu(_, a)
            | Term::Nu(_, a)
            | Term::Up(a)
            | Term::Down(a)
            | Term::KUp(a)
            | Term::KDown(a) => vec![a],
        }
    }

    fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        let b = |t: &Term, f: &mut dyn FnMut(&Term) -> Term| Box::new(f(t));
        match self {
            Term::Op { name, args } => Term::Op {
                name: name.clone(),
                args: args.iter().map(&mut f).collect(),
            },
            Term::Empty | Term::All | Term::Var(_) => self.clone(),
            Term::Union(x, y) => Term::Union(b(x, &mut f), b(y, &mut f)),
            Term::Inter(x, y) => Term::Inter(b(x, &mut f), b(y, &mut f)),
            Term::Not(x) => Term::Not(b(x, &mut f)),
            Term::Mu(v, x) => Term::Mu(v.clone(), b(x, &mut f)),
            Term::Nu(v, x) => Term::Nu(v.clone(), b(x, &mut f)),
            Term::Up(x) => Term::Up(b(x, &mut f)),
            Term::Down(x) => Term::Down(b(x, &mut f)),
            Term::KUp(x) => Term::KUp(b(x, &mut f)),
            Term::KDown(x) => Term::KDown(b(x, &mut f)),
        }
    }

    pub fn binder(&self) -> Option<(Fix, &str, &Term)> {
        match self {
            Term::Mu(x, b) => Some((Fix::Least, x, b)),
            Term::Nu(x, b) => Some((Fix::Greatest, x, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Mu(x, b) | Term::Nu(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Names of all operators used, with their arity.
    pub fn operators(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Op { name, args } = t {
                out.insert((name.clone(), args.len()));
            }
        });
        out
    }

    fn walk(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Binder names in pre-order.
    pub fn binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Some((_, x, _)) = t.binder() {
                out.push(x.to_string());
            }
        });
        out
    }

    /// The first binder subterm named `x`, in pre-order.
    pub fn find_binder(&self, x: &str) -> Option<&Term> {
        if let Some((_, y, _)) = self.binder() {
            if y == x {
                return Some(self);
            }
        }
        self.children().into_iter().find_map(|c| c.find_binder(x))
    }

    /// Capture-free only when binder names are distinct from the free
    /// variables of `by`, which holds after [`Term::freshen`].
    pub fn substitute(&self, x: &str, by: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => by.clone(),
            Term::Mu(y, _) | Term::Nu(y, _) if y == x => self.clone(),
            _ => self.map_children(|c| c.substitute(x, by)),
        }
    }

    /// Renames binders so that no two binders share a name and no binder
    /// reuses the name of a free variable.
    pub fn freshen(&self) -> Term {
        let mut used: BTreeSet<String> = self.free_vars();
        self.freshen_in(&mut used, &mut HashMap::new())
    }

    fn freshen_in(&self, used: &mut BTreeSet<String>, scope: &mut HashMap<String, String>) -> Term {
        match self {
            Term::Var(x) => Term::Var(scope.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Mu(x, b) | Term::Nu(x, b) => {
                let name = fresh_name(x, used);
                used.insert(name.clone());
                let saved = scope.insert(x.clone(), name.clone());
                let body = Box::new(b.freshen_in(used, scope));
                match saved {
                    Some(s) => scope.insert(x.clone(), s),
                    None => scope.remove(x),
                };
                if matches!(self, Term::Mu(..)) {
                    Term::Mu(name, body)
                } else {
                    Term::Nu(name, body)
                }
            }
            _ => self.map_children(|c| c.freshen_in(used, scope)),
        }
    }

    /// Bound variables that occur under an odd number of complements
    /// between their binder and the occurrence.
    pub fn parity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.parity_in(&mut Vec::new(), false, &mut out);
        out.dedup();
        out
    }

    fn parity_in(&self, bound: &mut Vec<(String, bool)>, neg: bool, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => {
                if let Some((_, at)) = bound.iter().rev().find(|(y, _)| y == x) {
                    if *at != neg && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
            }
            Term::Not(a) => a.parity_in(bound, !neg, out),
            Term::Mu(x, b) | Term::Nu(x, b) => {
                bound.push((x.clone(), neg));
                b.parity_in(bound, neg, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.parity_in(bound, neg, out);
                }
            }
        }
    }

    /// Every free occurrence of a μ-variable must sit below an upward guard
    /// and every ν-variable below a downward guard. A complement between
    /// binder and guard swaps the direction the guard counts for.
    pub fn check_guarded(&self) -> Vec<Offense> {
        let mut out = Vec::new();
        self.guard_scan(&mut out);
        out
    }

    fn guard_scan(&self, out: &mut Vec<Offense>) {
        if let Some((fix, x, body)) = self.binder() {
            let mut path = Vec::new();
            body.guard_occurrences(x, fix, false, false, &mut path, out);
        }
        for c in self.children() {
            c.guard_scan(out);
        }
    }

    fn guard_occurrences(
        &self,
        x: &str,
        fix: Fix,
        neg: bool,
        guarded: bool,
        path: &mut Vec<usize>,
        out: &mut Vec<Offense>,
    ) {
        let upward = match self {
            Term::Up(_) | Term::KUp(_) => Some(true),
            Term::Down(_) | Term::KDown(_) => Some(false),
            _ => None,
        };
        let guarded = guarded
            || upward.is_some_and(|up| {
                // Seen from the binder, a guard under a complement acts in
                // the opposite direction.
                let effective_up = up != neg;
                effective_up == (fix == Fix::Least)
            });
        match self {
            Term::Var(y) if y == x => {
                if !guarded {
                    out.push(Offense {
                        binder: x.to_string(),
                        path: path.clone(),
                    });
                }
            }
            Term::Mu(y, _) | Term::Nu(y, _) if y == x => {}
            _ => {
                let neg = if matches!(self, Term::Not(_)) { !neg } else { neg };
                for (i, c) in self.children().into_iter().enumerate() {
                    path.push(i);
                    c.guard_occurrences(x, fix, neg, guarded, path, out);
                    path.pop();
                }
            }
        }
    }

    pub fn is_guarded(&self) -> bool {
        self.check_guarded().is_empty()
    }

    /// Replaces the body of binder `x` by the body with itself substituted
    /// for `x`, then freshens. `None` when there is no such binder.
    pub fn unfold(&self, x: &str) -> Option<Term> {
        self.find_binder(x)?;
        let mut done = false;
        Some(self.unfold_in(x, &mut done).freshen())
    }

    fn unfold_in(&self, x: &str, done: &mut bool) -> Term {
        if !*done {
            if let Some((fix, y, body)) = self.binder() {
                if y == x {
                    *done = true;
                    let b = Box::new(body.substitute(x, body));
                    return match fix {
                        Fix::Least => Term::Mu(x.to_string(), b),
                        Fix::Greatest => Term::Nu(x.to_string(), b),
                    };
                }
            }
        }
        self.map_children(|c| c.unfold_in(x, done))
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let unary = |f: &mut fmt::Formatter<'_>, name: &str, a: &Term| {
            write!(f, "{name}(")?;
            a.fmt_prec(f, 0)?;
            f.write_str(")")
        };
        match self {
            Term::Op { name, args } => {
                f.write_str(name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        a.fmt_prec(f, 0)?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Term::Empty => f.write_str("empty"),
            Term::All => f.write_str("all"),
            Term::Var(x) => f.write_str(x),
            Term::Up(a) => unary(f, "up", a),
            Term::Down(a) => unary(f, "down", a),
            Term::KUp(a) => unary(f, "kup", a),
            Term::KDown(a) => unary(f, "kdown", a),
            Term::Not(a) => {
                f.write_str("!")?;
                a.fmt_prec(f, 3)
            }
            Term::Union(a, b) | Term::Inter(a, b) => {
                let (own, sym) = if matches!(self, Term::Union(..)) {
                    (1, " | ")
                } else {
                    (2, " & ")
                };
                if prec > own {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, own)?;
                f.write_str(sym)?;
                b.fmt_prec(f, own + 1)?;
                if prec > own {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Term::Mu(x, b) | Term::Nu(x, b) => {
                let kw = if matches!(self, Term::Mu(..)) { "mu" } else { "nu" };
                if prec > 0 {
                    f.write_str("(")?;
                }
                write!(f, "{kw} {x}. ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn fresh_name(x: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(x) {
        return x.to_string();
    }
    let stem = x.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { x } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !used.contains(n))
        .expect("unbounded supply of names")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
