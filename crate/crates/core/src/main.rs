use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wsmc::compile::{
    compile_asym_game, compile_ctl, compile_game, compile_prob_game, forall_release, parse_ctl,
    pre_star, GameGoal, ProbGoal,
};
use wsmc::lcs::{parse_model, ConfigAlgebra, GlcsModel, Player};
use wsmc::mu::{evaluate_partial, parse_term, EvalError, EvalStats, Limits, RegionAlgebra, Term};
use wsmc::oracle::{bounded_game, bounded_reach, finite_mc, BoundedGame, BoundedReach, GameSemantics};
use wsmc::region::{parse_config, parse_region, Region};

#[derive(Parser)]
#[command(name = "wsmc", version, about = "Fixpoint model checking for lossy channel systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the structural assumptions of a model.
    Validate { model: PathBuf },
    /// Evaluate a closed fixpoint term over the model's regions.
    Eval(EvalArgs),
    /// Compute the region of a named property.
    Check(CheckArgs),
    /// Brute-force reference procedures, for debugging.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct Output {
    /// Print approximant statistics.
    #[arg(long)]
    stats: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Cap on approximant steps per binder; allows unguarded terms.
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    model: PathBuf,
    /// Term text.
    #[arg(short = 'f', long = "formula", conflicts_with = "file", required_unless_present = "file")]
    formula: Option<String>,
    /// File holding the term.
    #[arg(short = 'F', long = "file")]
    file: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Prestar,
    Release,
    Ctl,
    GameReach,
    GameInv,
    GameBuchi,
    GamePersist,
    #[value(name = "asym-reach-B")]
    AsymReachB,
    #[value(name = "asym-inv-A")]
    AsymInvA,
    #[value(name = "asym-reach-A")]
    AsymReachA,
    #[value(name = "asym-inv-B")]
    AsymInvB,
    #[value(name = "prob-reach-1")]
    ProbReach1,
    #[value(name = "prob-inv-1")]
    ProbInv1,
    ProbReachPos,
    ProbInvPos,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlayerArg {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
}

impl From<PlayerArg> for Player {
    fn from(p: PlayerArg) -> Player {
        match p {
            PlayerArg::A => Player::A,
            PlayerArg::B => Player::B,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    model: PathBuf,
    #[arg(value_enum)]
    property: Property,
    /// Goal region.
    #[arg(long)]
    target: Option<String>,
    /// Side condition: the releasing region for `release`.
    #[arg(long)]
    cond: Option<String>,
    #[arg(long, value_enum, default_value = "A")]
    player: PlayerArg,
    /// Configuration to test, as "loc : w1, w2, ...".
    #[arg(long)]
    member: Option<String>,
    /// Formula for `ctl`.
    #[arg(long)]
    formula: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Bounded breadth-first search over lossy steps.
    Reach {
        model: PathBuf,
        #[arg(long)]
        start: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Bounded reachability game search.
    Game {
        model: PathBuf,
        #[arg(long)]
        start: String,
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "A")]
        player: PlayerArg,
        /// Only B's steps lose messages.
        #[arg(long)]
        asymmetric: bool,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Explicit evaluation on a model without channels.
    Finite {
        model: PathBuf,
        #[arg(short = 'f', long = "formula")]
        formula: String,
    },
}

/// Exit code 2 with a message.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Fail {
        Fail(e.to_string())
    }
}

struct Report {
    text: String,
    code: u8,
}

#[derive(Serialize)]
struct JsonStats {
    iterations: BTreeMap<String, usize>,
    longest_chain: BTreeMap<String, usize>,
    max_size: usize,
}

#[derive(Serialize)]
struct JsonReport {
    verdict: Option<String>,
    region: Option<String>,
    stats: Option<JsonStats>,
}

fn load(path: &Path) -> Result<GlcsModel, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    parse_model(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn require_valid(m: &GlcsModel) -> Result<(), Fail> {
    let v = m.validate(m.is_game());
    if v.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    Err(Fail(format!("model does not validate:\n{}", lines.join("\n"))))
}

fn region_arg(m: &GlcsModel, text: &str) -> Result<Region, Fail> {
    Ok(parse_region(text, m.signature(), &|n| m.region(n).cloned())?)
}

fn stats_text(s: &EvalStats) -> String {
    let join = |m: &BTreeMap<String, usize>| {
        m.iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "iterations: {}\nlongest chain: {}\nmax size: {}\n",
        join(&s.iterations),
        join(&s.longest_chain),
        s.max_size
    )
}

fn json_stats(s: &EvalStats) -> JsonStats {
    JsonStats {
        iterations: s.iterations.clone(),
        longest_chain: s.longest_chain.clone(),
        max_size: s.max_size,
    }
}

fn limits(o: &Output) -> Limits {
    Limits {
        max_iter: o.max_iter,
        ..Limits::default()
    }
}

/// Evaluates `t` and renders the result.
fn run_term(
    alg: &ConfigAlgebra<'_>,
    t: &Term,
    member: Option<&str>,
    o: &Output,
) -> Result<Report, Fail> {
    // Round-trip through the parser to resolve names and check closedness.
    let t = parse_term(&t.to_string(), &|n| alg.arity(n))?;
    if let Some(x) = t.free_vars().into_iter().next() {
        return Err(Fail(format!("term is not closed: free variable {x}")));
    }
    let (r, stats) = evaluate_partial(&t, &Default::default(), alg, limits(o));
    eprintln!("elapsed: {:?}", stats.elapsed);
    let v = match r {
        Ok(v) => v,
        Err(e @ EvalError::IterationCap { .. }) => {
            return Err(Fail(format!("{e}\npartial statistics:\n{}", stats_text(&stats).trim_end())));
        }
        Err(e) => return Err(e.into()),
    };
    let sig = alg.model().signature();
    let verdict = match member {
        Some(c) => Some(v.contains(&parse_config(c, sig)?)?),
        None => None,
    };
    let region = v.to_string();
    let code = match verdict {
        Some(false) => 1,
        _ => 0,
    };
    let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
    let text = if o.json {
        let j = JsonReport {
            verdict: verdict.map(yes_no),
            region: Some(region),
            stats: o.stats.then(|| json_stats(&stats)),
        };
        serde_json::to_string_pretty(&j)? + "\n"
    } else {
        let mut s = match verdict {
            Some(b) => yes_no(b) + "\n",
            None => {
                let sizes: Vec<String> = v
                    .location_sizes()
                    .into_iter()
                    .map(|(l, n)| format!("{}={n}", sig.location_name(l)))
                    .collect();
                format!("{region}\ndfa states: {}\n", sizes.join(" "))
            }
        };
        if o.stats {
            s += &stats_text(&stats);
        }
        s
    };
    Ok(Report { text, code })
}

fn cmd_validate(path: &Path) -> Result<Report, Fail> {
    let m = load(path)?;
    let v = m.validate(m.is_game());
    if v.is_empty() {
        return Ok(Report {
            text: "ok\n".into(),
            code: 0,
        });
    }
    let text = v.iter().map(|x| format!("{x}\n")).collect();
    Ok(Report { text, code: 1 })
}

fn cmd_eval(a: &EvalArgs) -> Result<Report, Fail> {
    let m = load(&a.model)?;
    require_valid(&m)?;
    let text = match (&a.formula, &a.file) {
        (Some(f), _) => f.clone(),
        (None, Some(p)) => {
            fs::read_to_string(p).map_err(|e| Fail(format!("{}: {e}", p.display())))?
        }
        (None, None) => return Err(Fail("no formula given".into())),
    };
    let alg = ConfigAlgebra::new(&m);
    let t = parse_term(&text, &|n| alg.arity(n))?;
    run_term(&alg, &t, None, &a.output)
}

const TARGET: &str = "TARGET";
const COND: &str = "COND";

fn cmd_check(a: &CheckArgs) -> Result<Report, Fail> {
    let m = load(&a.model)?;
    let p = Player::from(a.player);
    let target = || Term::constant(TARGET);
    let game = |g| compile_game(g, p, target(), &m);
    let prob = |g| compile_prob_game(g, p, target(), &m);
    let asym = |g, p| compile_asym_game(g, p, target(), &m);
    let needs_target = !matches!(a.property, Property::Ctl);
    if needs_target && a.target.is_none() {
        return Err(Fail("this property needs --target".into()));
    }
    let t = match a.property {
        Property::Prestar => pre_star(target()),
        Property::Release => forall_release(Term::constant(COND), target()),
        Property::Ctl => {
            let f = a.formula.as_deref().ok_or(Fail("ctl needs --formula".into()))?;
            compile_ctl(&parse_ctl(f)?)?
        }
        Property::GameReach => game(GameGoal::Reach)?,
        Property::GameInv => game(GameGoal::Invariant)?,
        Property::GameBuchi => game(GameGoal::Buchi)?,
        Property::GamePersist => game(GameGoal::Persistence)?,
        Property::AsymReachB => asym(GameGoal::Reach, Player::B)?,
        Property::AsymInvA => asym(GameGoal::Invariant, Player::A)?,
        Property::AsymReachA => asym(GameGoal::Reach, Player::A)?,
        Property::AsymInvB => asym(GameGoal::Invariant, Player::B)?,
        Property::ProbReach1 => prob(ProbGoal::ReachSure)?,
        Property::ProbInv1 => prob(ProbGoal::InvariantSure)?,
        Property::ProbReachPos => prob(ProbGoal::ReachPositive)?,
        Property::ProbInvPos => prob(ProbGoal::InvariantPositive)?,
    };
    require_valid(&m)?;
    let mut alg = ConfigAlgebra::new(&m);
    if let Some(r) = &a.target {
        alg = alg.with_constant(TARGET, region_arg(&m, r)?);
    }
    let cond = match &a.cond {
        Some(r) => region_arg(&m, r)?,
        None => Region::empty(m.signature()),
    };
    alg = alg.with_constant(COND, cond);
    run_term(&alg, &t, a.member.as_deref(), &a.output)
}

fn cmd_oracle(c: &OracleCmd) -> Result<Report, Fail> {
    let line = |s: &str, code| Report {
        text: format!("{s}\n"),
        code,
    };
    match c {
        OracleCmd::Reach {
            model,
            start,
            target,
            depth,
        } => {
            let m = load(model)?;
            let s = parse_config(start, m.signature())?;
            Ok(match bounded_reach(&m, &s, &region_arg(&m, target)?, *depth) {
                BoundedReach::Reachable => line("reachable", 0),
                BoundedReach::Unknown => line("unknown", 1),
            })
        }
        OracleCmd::Game {
            model,
            start,
            target,
            player,
            asymmetric,
            depth,
        } => {
            let m = load(model)?;
            let s = parse_config(start, m.signature())?;
            let sem = if *asymmetric {
                GameSemantics::Asymmetric
            } else {
                GameSemantics::Symmetric
            };
            let p = Player::from(*player);
            Ok(match bounded_game(&m, &s, p, &region_arg(&m, target)?, sem, *depth) {
                BoundedGame::Win(w) => line(&format!("win {w}"), if w == p { 0 } else { 1 }),
                BoundedGame::Unknown => line("unknown", 1),
            })
        }
        OracleCmd::Finite { model, formula } => {
            let m = load(model)?;
            let alg = ConfigAlgebra::new(&m);
            let t = parse_term(formula, &|n| alg.arity(n))?;
            let set = finite_mc(&m, &t, &BTreeMap::new())?;
            let names: Vec<&str> = set.iter().map(|&l| m.signature().location_name(l)).collect();
            Ok(line(&format!("{{{}}}", names.join(", ")), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Eval(a) => a.output.out.clone(),
        Cmd::Check(a) => a.output.out.clone(),
        _ => None,
    };
    let result = match &cli.cmd {
        Cmd::Validate { model } => cmd_validate(model),
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Oracle(c) => cmd_oracle(c),
    };
    match result {
        Ok(r) => {
            match out {
                Some(p) => {
                    if let Err(e) = fs::write(&p, &r.text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", r.text),
            }
            ExitCode::from(r.code)
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
