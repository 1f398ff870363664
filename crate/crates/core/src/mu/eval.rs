use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use super::{EvalError, Fix, Term};

/// An effective region algebra: a boolean lattice of values with the four
/// closure/kernel operators, named monotone operators and decidable equality.
pub trait RegionAlgebra {
    type Value: Clone;
    type Element;

    fn empty(&self) -> Self::Value;
    fn full(&self) -> Self::Value;
    fn union(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn intersection(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn complement(&self, a: &Self::Value) -> Self::Value;
    fn up_closure(&self, a: &Self::Value) -> Self::Value;
    fn down_closure(&self, a: &Self::Value) -> Self::Value;
    fn up_kernel(&self, a: &Self::Value) -> Self::Value;
    fn down_kernel(&self, a: &Self::Value) -> Self::Value;
    fn equal(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn subset(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn member(&self, e: &Self::Element, a: &Self::Value) -> bool;
    /// Representation size, for statistics only.
    fn size(&self, a: &Self::Value) -> usize;

    /// Arity of a named operator, `None` if unknown.
    fn arity(&self, name: &str) -> Option<usize>;
    fn apply(&self, name: &str, args: &[Self::Value]) -> Result<Self::Value, String>;
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Per-binder cap on approximant steps. Unguarded terms are only
    /// evaluated when a cap is given.
    pub max_iter: Option<usize>,
    /// Check that every approximant chain is monotone.
    pub check_monotone: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_iter: None,
            check_monotone: true,
        }
    }
}

impl Limits {
    pub fn capped(n: usize) -> Limits {
        Limits {
            max_iter: Some(n),
            ..Limits::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalStats {
    /// Total approximant steps per binder, over all restarts of inner loops.
    pub iterations: BTreeMap<String, usize>,
    /// Longest single approximant chain per binder.
    pub longest_chain: BTreeMap<String, usize>,
    pub max_size: usize,
    pub elapsed: Duration,
}

pub type Env<V> = HashMap<String, V>;

struct Evaluator<'a, A: RegionAlgebra> {
    alg: &'a A,
    limits: Limits,
    stats: EvalStats,
}

impl<A: RegionAlgebra> Evaluator<'_, A> {
    fn note(&mut self, v: &A::Value) {
        let s = self.alg.size(v);
        if s > self.stats.max_size {
            self.stats.max_size = s;
        }
    }

    fn eval(&mut self, t: &Term, env: &mut Env<A::Value>) -> Result<A::Value, EvalError> {
        let alg = self.alg;
        let v = match t {
            Term::Empty => alg.empty(),
            Term::All => alg.full(),
            Term::Var(x) => env
                .get(x)
                .cloned()
                .ok_or_else(|| EvalError::UnknownVariable(x.clone()))?,
            Term::Op { name, args } => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, env))
                    .collect::<Result<Vec<_>, _>>()?;
                alg.apply(name, &vals).map_err(EvalError::Algebra)?
            }
            Term::Union(a, b) => {
                let x = self.eval(a, env)?;
                alg.union(&x, &self.eval(b, env)?)
            }
            Term::Inter(a, b) => {
                let x = self.eval(a, env)?;
                alg.intersection(&x, &self.eval(b, env)?)
            }
            Term::Not(a) => alg.complement(&self.eval(a, env)?),
            Term::Up(a) => alg.up_closure(&self.eval(a, env)?),
            Term::Down(a) => alg.down_closure(&self.eval(a, env)?),
            Term::KUp(a) => alg.up_kernel(&self.eval(a, env)?),
            Term::KDown(a) => alg.down_kernel(&self.eval(a, env)?),
            Term::Mu(x, body) => self.fixpoint(Fix::Least, x, body, env)?,
            Term::Nu(x, body) => self.fixpoint(Fix::Greatest, x, body, env)?,
        };
        self.note(&v);
        Ok(v)
    }

    fn fixpoint(
        &mut self,
        fix: Fix,
        x: &str,
        body: &Term,
        env: &mut Env<A::Value>,
    ) -> Result<A::Value, EvalError> {
        let alg = self.alg;
        let mut cur = match fix {
            Fix::Least => alg.empty(),
            Fix::Greatest => alg.full(),
        };
        let saved = env.remove(x);
        let mut steps = 0usize;
        let result = loop {
            if let Some(cap) = self.limits.max_iter {
                if steps >= cap {
                    break Err(EvalError::IterationCap {
                        binder: x.to_string(),
                        cap,
                    });
                }
            }
            env.insert(x.to_string(), cur.clone());
            let next = match self.eval(body, env) {
                Ok(v) => v,
                Err(e) => break Err(e),
            };
            steps += 1;
            *self.stats.iterations.entry(x.to_string()).or_default() += 1;
            if self.limits.check_monotone {
                let ok = match fix {
                    Fix::Least => alg.subset(&cur, &next),
                    Fix::Greatest => alg.subset(&next, &cur),
                };
                if !ok {
                    break Err(EvalError::NotMonotone(x.to_string()));
                }
            }
            if alg.equal(&cur, &next) {
                break Ok(next);
            }
            cur = next;
        };
        env.remove(x);
        if let Some(s) = saved {
            env.insert(x.to_string(), s);
        }
        let longest = self.stats.longest_chain.entry(x.to_string()).or_default();
        *longest = (*longest).max(steps);
        result
    }
}

/// Evaluates `t` by approximant iteration. Free variables are looked up in
/// `env`.
pub fn evaluate<A: RegionAlgebra>(
    t: &Term,
    env: &Env<A::Value>,
    alg: &A,
    limits: Limits,
) -> Result<(A::Value, EvalStats), EvalError> {
    let (r, stats) = evaluate_partial(t, env, alg, limits);
    r.map(|v| (v, stats))
}

/// Like [`evaluate`], but returns the statistics gathered so far even when
/// evaluation fails.
pub fn evaluate_partial<A: RegionAlgebra>(
    t: &Term,
    env: &Env<A::Value>,
    alg: &A,
    limits: Limits,
) -> (Result<A::Value, EvalError>, EvalStats) {
    if limits.max_iter.is_none() {
        if let Some(o) = t.check_guarded().into_iter().next() {
            return (Err(EvalError::Unguarded(o.binder)), EvalStats::default());
        }
    }
    let start = Instant::now();
    let mut ev = Evaluator {
        alg,
        limits,
        stats: EvalStats::default(),
    };
    let mut env = env.clone();
    let r = ev.eval(t, &mut env);
    ev.stats.elapsed = start.elapsed();
    (r, ev.stats)
}

#[derive(Debug, Clone)]
pub enum Query<E> {
    Member(E),
    Satisfiable,
    Universal,
}

/// Decision questions on the denotation of a closed term.
pub fn decide_query<A: RegionAlgebra>(
    q: &Query<A::Element>,
    t: &Term,
    alg: &A,
    limits: Limits,
) -> Result<bool, EvalError> {
    let (v, _) = evaluate(t, &Env::new(), alg, limits)?;
    Ok(match q {
        Query::Member(e) => alg.member(e, &v),
        Query::Satisfiable => !alg.equal(&v, &alg.empty()),
        Query::Universal => alg.equal(&v, &alg.full()),
    })
}

/// Checks the fixpoint equation at every binder met along the outermost
/// chain of nested binders at the root of `t`: each computed value `V` for
/// `σX.φ` must satisfy `φ[X := V] = V` under the enclosing values.
pub fn check_fixpoints<A: RegionAlgebra>(
    t: &Term,
    env: &Env<A::Value>,
    alg: &A,
    limits: Limits,
) -> Result<bool, EvalError> {
    let mut env = env.clone();
    let mut cur = t;
    while let Some((_, x, body)) = cur.binder() {
        let (v, _) = evaluate(cur, &env, alg, limits)?;
        env.insert(x.to_string(), v.clone());
        let (again, _) = evaluate(body, &env, alg, limits)?;
        if !alg.equal(&again, &v) {
            return Ok(false);
        }
        cur = body;
    }
    Ok(true)
}
