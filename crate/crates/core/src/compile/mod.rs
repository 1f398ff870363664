//! Translation of verification questions into guarded fixpoint terms over
//! the configuration algebra, and refusal of the questions whose answer
//! sets are not effectively computable.

mod ctl;

use std::fmt;

use thiserror::Error;

use crate::lcs::{GlcsModel, Player, Violation};
use crate::mu::Term;

pub use ctl::{compile_ctl, parse_ctl, Ctl};

/// Questions that are refused instead of approximated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refusal {
    /// `AF V` and `A[f U g]`.
    ForallEventually,
    /// `EG EF V`.
    ExistsAlwaysEventually,
    /// Reachability for A (or its dual, invariance for B) when only B can
    /// lose messages.
    AsymmetricReach,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refusal::ForallEventually => {
                "refused: the set of configurations satisfying AF V (inevitability) \
                 is not effectively computable for lossy channel systems"
            }
            Refusal::ExistsAlwaysEventually => {
                "refused: EG EF V (recurrent reachability) is undecidable for lossy \
                 channel systems"
            }
            Refusal::AsymmetricReach => {
                "refused: in asymmetric games the winning set of a reachability game \
                 for A (dually, an invariant game for B) is not effectively computable"
            }
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("{0}")]
    Refused(Refusal),
    #[error("formula is outside the supported fragment: {0}")]
    OutsideFragment(String),
    #[error("model is not a valid game: {}", join(.0))]
    NotGame(Vec<Violation>),
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn pre(t: Term) -> Term {
    Term::unary("pre", t)
}

fn wpre(t: Term) -> Term {
    Term::unary("wpre", t)
}

fn conf(p: Player) -> Term {
    Term::constant(match p {
        Player::A => "confA",
        Player::B => "confB",
    })
}

/// `μX. V ∪ pre(C↑X)`: configurations from which `V` is reachable.
pub fn pre_star(v: Term) -> Term {
    Term::mu("X", v.or(pre(Term::var("X").up())))
}

/// `νX. V₂ ∩ (wpre(K↓X) ∪ V₁)`: `A[V₁ R V₂]`.
pub fn forall_release(v1: Term, v2: Term) -> Term {
    Term::nu("X", v2.and(wpre(Term::var("X").kdown()).or(v1)))
}

/// `E[f U g]` as the complement of `A[!f R !g]`.
pub fn exists_until(f: Term, g: Term) -> Term {
    forall_release(f.not(), g.not()).not()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameGoal {
    Reach,
    Invariant,
    Buchi,
    Persistence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbGoal {
    ReachSure,
    InvariantSure,
    ReachPositive,
    InvariantPositive,
}

/// The reachability game term before any rewriting:
/// `μX. V ∪ (Conf_p ∩ pre(X)) ∪ (Conf_o ∩ wpre(X))`. Not guarded; kept for
/// cross-checks of the rewritten form.
pub fn game_reach_plain(p: Player, v: Term) -> Term {
    let x = || Term::var("X");
    Term::mu(
        "X",
        v.or(conf(p).and(pre(x()))).or(conf(p.opponent()).and(wpre(x()))),
    )
}

/// Reachability for `p` with the opponent's moves unfolded once, which
/// strict alternation simplifies to `wpre(V ∪ pre(C↑X))`.
fn game_reach(p: Player, v: Term) -> Term {
    let step = || pre(Term::var("X").up());
    Term::mu(
        "X",
        v.clone()
            .or(conf(p).and(step()))
            .or(conf(p.opponent()).and(wpre(v.or(step())))),
    )
}

fn game_buchi(p: Player, v: Term) -> Term {
    let y = || Term::var("Y");
    let phi_p = conf(p).and(pre(wpre(y().kdown()).up()));
    let phi_o = conf(p.opponent()).and(wpre(y().kdown()));
    Term::nu("Y", game_reach(p, v.and(phi_p.or(phi_o))))
}

/// Winning region terms for symmetric games, where every step may lose
/// messages.
pub fn game_term(goal: GameGoal, p: Player, v: Term) -> Term {
    let t = match goal {
        GameGoal::Reach => game_reach(p, v),
        GameGoal::Invariant => game_reach(p.opponent(), v.not()).not(),
        GameGoal::Buchi => game_buchi(p, v),
        GameGoal::Persistence => game_buchi(p.opponent(), v.not()).not(),
    };
    t.freshen()
}

/// Asymmetric games: B's steps are lossy and A's are perfect. Only
/// reachability for B and invariance for A are computable.
pub fn asym_game_term(goal: GameGoal, p: Player, v: Term) -> Result<Term, CompileError> {
    let reach_b = |v: Term| {
        let step = || pre(Term::var("X").up());
        Term::mu(
            "X",
            v.clone()
                .or(conf(Player::B).and(step()))
                .or(conf(Player::A).and(Term::unary("wprep", v.or(step())))),
        )
    };
    match (goal, p) {
        (GameGoal::Reach, Player::B) => Ok(reach_b(v)),
        (GameGoal::Invariant, Player::A) => Ok(reach_b(v.not()).not()),
        (GameGoal::Reach, Player::A) | (GameGoal::Invariant, Player::B) => {
            Err(CompileError::Refused(Refusal::AsymmetricReach))
        }
        _ => Err(CompileError::OutsideFragment(
            "asymmetric games support reachability and invariance only".into(),
        )),
    }
}

fn prob_reach_sure(p: Player, v: Term) -> Term {
    let inner = || Term::var("X").up().and(Term::var("Y").kdown());
    Term::nu(
        "Y",
        Term::mu(
            "X",
            v.or(conf(p).and(Term::unary("prep", inner())))
                .or(conf(p.opponent()).and(Term::unary("wprep", inner()))),
        ),
    )
}

fn prob_inv_sure(p: Player, v: Term) -> Term {
    let k = || Term::var("X").kdown();
    Term::nu(
        "X",
        v.and(
            conf(p)
                .and(Term::unary("prep", k()))
                .or(conf(p.opponent()).and(wpre(k()))),
        ),
    )
}

/// Qualitative goals under probabilistic message loss. The positive
/// probability goals are complements of the opponent's sure goals.
pub fn prob_game_term(goal: ProbGoal, p: Player, v: Term) -> Term {
    let t = match goal {
        ProbGoal::ReachSure => prob_reach_sure(p, v),
        ProbGoal::InvariantSure => prob_inv_sure(p, v),
        ProbGoal::ReachPositive => prob_inv_sure(p.opponent(), v.not()).not(),
        ProbGoal::InvariantPositive => prob_reach_sure(p.opponent(), v.not()).not(),
    };
    t.freshen()
}

/// Game compilers require a deadlock-free, strictly alternating model.
pub fn check_game_model(model: &GlcsModel) -> Result<(), CompileError> {
    let v = model.validate(true);
    if v.is_empty() {
        Ok(())
    } else {
        Err(CompileError::NotGame(v))
    }
}

pub fn compile_game(
    goal: GameGoal,
    p: Player,
    v: Term,
    model: &GlcsModel,
) -> Result<Term, CompileError> {
    check_game_model(model)?;
    Ok(game_term(goal, p, v))
}

pub fn compile_asym_game(
    goal: GameGoal,
    p: Player,
    v: Term,
    model: &GlcsModel,
) -> Result<Term, CompileError> {
    let t = asym_game_term(goal, p, v)?;
    check_game_model(model)?;
    Ok(t)
}

pub fn compile_prob_game(
    goal: ProbGoal,
    p: Player,
    v: Term,
    model: &GlcsModel,
) -> Result<Term, CompileError> {
    check_game_model(model)?;
    Ok(prob_game_term(goal, p, v))
}
