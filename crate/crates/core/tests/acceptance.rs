//! Acceptance criteria. Runs without the test harness so that every
//! criterion prints exactly one result line.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use wsmc::automata::{compile_regex, Nfa};
use wsmc::compile::{
    asym_game_term, compile_ctl, exists_until, forall_release, game_reach_plain, game_term,
    parse_ctl, pre_star, prob_game_term, GameGoal, ProbGoal,
};
use wsmc::lcs::{parse_model, ConfigAlgebra, GlcsModel, Player, StepMode};
use wsmc::mu::{
    check_fixpoints, evaluate, parse_term, Env, Limits, RegionAlgebra, Term, WordAlgebra,
};
use wsmc::oracle::{
    all_words, bounded_reach, brute_words, finite_attractor, finite_mc, region_locations,
    BoundedReach, WordOp,
};
use wsmc::region::Region;

const MODELS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../models");

fn model_file(name: &str) -> String {
    format!("{MODELS}/{name}")
}

fn load(name: &str) -> GlcsModel {
    parse_model(&std::fs::read_to_string(model_file(name)).unwrap()).unwrap()
}

/// Resolves names against the algebra, as the command line does.
fn resolve(alg: &ConfigAlgebra<'_>, t: &Term) -> Term {
    parse_term(&t.to_string(), &|n| alg.arity(n)).unwrap()
}

fn eval(alg: &ConfigAlgebra<'_>, t: &Term, limits: Limits) -> Region {
    evaluate(&resolve(alg, t), &Env::new(), alg, limits).unwrap().0
}

/// Larger than any approximant chain over a zero-channel model in the suite,
/// so it never truncates; only there to admit unguarded terms.
const NO_CAP: Limits = Limits {
    max_iter: Some(1 << 20),
    check_monotone: true,
};

fn goal() -> Term {
    Term::constant("GOAL")
}

/// Every term the compilers produce for the goal region `GOAL`.
fn compiled_terms(game: bool) -> Vec<(String, Term)> {
    let mut out = vec![
        ("prestar".to_string(), pre_star(goal())),
        ("release".into(), forall_release(Term::constant("GOAL"), Term::All)),
        ("until".into(), exists_until(Term::All, goal())),
    ];
    for f in ["EX GOAL", "AX GOAL", "EF GOAL", "AG !GOAL", "E[!GOAL U GOAL]", "A[GOAL R all] & EX EF GOAL"] {
        out.push((format!("ctl {f}"), compile_ctl(&parse_ctl(f).unwrap()).unwrap()));
    }
    if game {
        for p in [Player::A, Player::B] {
            for g in [GameGoal::Reach, GameGoal::Invariant, GameGoal::Buchi, GameGoal::Persistence] {
                out.push((format!("{g:?} {p}"), game_term(g, p, goal())));
            }
            for g in [ProbGoal::ReachSure, ProbGoal::InvariantSure, ProbGoal::ReachPositive, ProbGoal::InvariantPositive] {
                out.push((format!("{g:?} {p}"), prob_game_term(g, p, goal())));
            }
        }
        out.push(("asym reach B".into(), asym_game_term(GameGoal::Reach, Player::B, goal()).unwrap()));
        out.push(("asym inv A".into(), asym_game_term(GameGoal::Invariant, Player::A, goal()).unwrap()));
    }
    out
}

fn reach_terms() -> Vec<Term> {
    let mut out = Vec::new();
    for p in [Player::A, Player::B] {
        out.push(game_term(GameGoal::Reach, p, goal()));
        out.push(prob_game_term(ProbGoal::ReachSure, p, goal()));
    }
    out.push(asym_game_term(GameGoal::Reach, Player::B, goal()).unwrap());
    out
}

fn c1_closures() -> String {
    let al = ab();
    let n = 6;
    let universe = all_words(&al, n);
    let short = Nfa::finite(&al, &universe);
    let long = short.complement();
    let cut = |x: &Nfa| language(x, n);
    let mut rng = rng(1);
    for i in 0..200 {
        let l = random_nfa(&mut rng, &al, 6);
        let m = random_nfa(&mut rng, &al, 6);
        let (a, b) = (cut(&l), cut(&m));
        let brute = |op, ins: &[&_]| brute_words(op, ins, &al, n).unwrap();
        let bounded = l.intersection(&short).unwrap();
        let bounded_m = m.intersection(&short).unwrap();
        let checks: Vec<(&str, Nfa, _)> = vec![
            ("up closure", l.up_closure(), brute(WordOp::UpClosure, &[&a])),
            ("down closure", bounded.down_closure(), brute(WordOp::DownClosure, &[&a])),
            ("up kernel", l.union(&long).unwrap().up_kernel(), brute(WordOp::UpKernel, &[&a])),
            ("down kernel", l.down_kernel(), brute(WordOp::DownKernel, &[&a])),
            ("union", l.union(&m).unwrap(), brute(WordOp::Union, &[&a, &b])),
            ("intersection", l.intersection(&m).unwrap(), brute(WordOp::Intersection, &[&a, &b])),
            ("complement", l.complement(), brute(WordOp::Complement, &[&a])),
            ("difference", l.difference(&m).unwrap(), brute(WordOp::Difference, &[&a, &b])),
            ("concat", l.concat(&m).unwrap(), brute(WordOp::Concat, &[&a, &b])),
            ("star", l.star(), brute(WordOp::Star, &[&a])),
            ("reverse", l.reverse(), brute(WordOp::Reverse, &[&a])),
            ("shuffle", l.shuffle(&m).unwrap(), brute(WordOp::Shuffle, &[&a, &b])),
            ("left residual", bounded.left_residual(&bounded_m).unwrap(), brute(WordOp::LeftResidual, &[&a, &b])),
            ("right residual", bounded.right_residual(&bounded_m).unwrap(), brute(WordOp::RightResidual, &[&a, &b])),
        ];
        for (name, engine, oracle) in checks {
            assert_eq!(cut(&engine), oracle, "automaton {i}: {name}");
        }
        let not = l.complement();
        assert!(l.up_kernel().equals(&not.down_closure().complement()).unwrap(), "{i}: K-up duality");
        assert!(l.down_kernel().equals(&not.up_closure().complement()).unwrap(), "{i}: K-down duality");
        assert!(l.up_closure().equals(&not.down_kernel().complement()).unwrap(), "{i}: C-up duality");
        assert!(l.down_closure().equals(&not.up_kernel().complement()).unwrap(), "{i}: C-down duality");
        assert!(l.up_kernel().is_subset(&l).unwrap() && l.is_subset(&l.up_closure()).unwrap());
        assert!(l.down_kernel().is_subset(&l).unwrap() && l.is_subset(&l.down_closure()).unwrap());
    }
    "200 automata, 14 operators, duality identities".into()
}

fn c2_lemma() -> String {
    let shape = ModelShape {
        max_locations: 4,
        max_channels: 2,
        max_rules: 6,
        guards: true,
    };
    let mut rng = rng(2);
    let mut checks = 0;
    for i in 0..100 {
        let m = random_model(&mut rng, &shape);
        let k = m.signature().num_channels();
        let n = m.signature().num_locations();
        for _ in 0..3 {
            let r = region(&m, &random_region_text(&mut rng, n, k));
            let a = m.pre(&r, StepMode::Lossy).unwrap();
            let b = m.pre(&r.up_closure(), StepMode::Lossy).unwrap();
            assert!(a.equals(&b).unwrap(), "model {i}: pre(R) != pre(up R) for {r}");
            let a = m.wpre(&r, StepMode::Lossy).unwrap();
            let b = m.wpre(&r.down_kernel(), StepMode::Lossy).unwrap();
            assert!(a.equals(&b).unwrap(), "model {i}: wpre(R) != wpre(kdown R) for {r}");
            checks += 2;
        }
    }
    format!("100 models, {checks} identities")
}

fn c3_finite() -> String {
    let shape = ModelShape {
        max_locations: 4,
        max_channels: 0,
        max_rules: 6,
        guards: true,
    };
    let mut rng = rng(3);
    let (mut random, mut unguarded, mut compiled) = (0, 0, 0);
    for i in 0..100 {
        let game = i % 2 == 1;
        let m = if game {
            random_finite_game(&mut rng, 4)
        } else {
            random_model(&mut rng, &shape)
        };
        let alg = ConfigAlgebra::new(&m);
        let gen = TermGen {
            constants: &["GOAL"],
            game,
        };
        let mut terms: Vec<Term> = (0..5)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                gen.term(&mut rng, d).freshen()
            })
            .collect();
        random += terms.len();
        unguarded += terms.iter().filter(|t| !t.is_guarded()).count();
        let ct: Vec<Term> = compiled_terms(game).into_iter().map(|(_, t)| t).collect();
        compiled += ct.len();
        terms.extend(ct);
        if game {
            for p in [Player::A, Player::B] {
                terms.push(game_reach_plain(p, goal()));
            }
        }
        for t in &terms {
            let engine = eval(&alg, t, NO_CAP);
            let oracle = finite_mc(&m, t, &BTreeMap::new()).unwrap();
            assert_eq!(region_locations(&engine), oracle, "model {i}: {t}");
        }
        if game {
            let target = region_locations(m.region("GOAL").unwrap());
            for p in [Player::A, Player::B] {
                let w = eval(&alg, &game_term(GameGoal::Reach, p, goal()), Limits::default());
                assert_eq!(region_locations(&w), finite_attractor(&m, p, &target), "model {i}: attractor {p}");
                let inv = eval(&alg, &game_term(GameGoal::Invariant, p.opponent(), goal().not()), Limits::default());
                assert!(w.intersection(&inv).unwrap().is_empty(), "model {i}: {p} partition");
                assert!(w.union(&inv).unwrap().is_universal(), "model {i}: {p} partition");
            }
        }
    }
    format!("100 models, {random} random terms ({unguarded} unguarded), {compiled} compiled terms")
}

fn c4_termination() -> String {
    let mut worst = Duration::ZERO;
    let mut evaluations = 0;
    let fixtures = [
        ("abp.lcs", false, vec!["INIT", "STALE", "FLIP"]),
        ("sendrecv.lcs", false, vec!["GOAL", "FULL"]),
        ("game.lcs", true, vec!["GOAL", "SAFE"]),
        ("finite.lcs", true, vec!["GOAL", "START"]),
    ];
    for (file, game, targets) in fixtures {
        let m = load(file);
        assert!(m.validate(game).is_empty(), "{file} validates");
        let start = Instant::now();
        for target in targets {
            let alg = ConfigAlgebra::new(&m).with_constant("GOAL", m.region(target).unwrap().clone());
            for (name, t) in compiled_terms(game) {
                assert!(t.is_guarded(), "{name} is guarded");
                let t = resolve(&alg, &t);
                let (_, stats) = evaluate(&t, &Env::new(), &alg, Limits::default()).unwrap();
                for b in t.binders() {
                    assert!(stats.iterations.contains_key(&b), "{file} {name}: no count for {b}");
                }
                evaluations += 1;
            }
        }
        let took = start.elapsed();
        assert!(took < Duration::from_secs(60), "{file} took {took:?}");
        worst = worst.max(took);
    }
    format!("{evaluations} evaluations on 4 models, slowest model {:.2}s", worst.as_secs_f64())
}

fn c5_fixpoints() -> String {
    let mut checked = 0;
    let fixed = |alg: &ConfigAlgebra<'_>, t: &Term| {
        let t = resolve(alg, t);
        let mut cur = &t;
        // Complemented terms: check the binder chain under the complements.
        while let Term::Not(inner) = cur {
            cur = inner;
        }
        check_fixpoints(cur, &Env::new(), alg, Limits::default()).unwrap()
    };
    for (file, game, target) in [
        ("abp.lcs", false, "STALE"),
        ("sendrecv.lcs", false, "GOAL"),
        ("game.lcs", true, "GOAL"),
        ("finite.lcs", true, "GOAL"),
    ] {
        let m = load(file);
        let alg = ConfigAlgebra::new(&m).with_constant("GOAL", m.region(target).unwrap().clone());
        for (name, t) in compiled_terms(game) {
            assert!(fixed(&alg, &t), "{file} {name}");
            checked += 1;
        }
    }
    let shape = ModelShape {
        max_locations: 3,
        max_channels: 1,
        max_rules: 5,
        guards: true,
    };
    let mut rng = rng(5);
    let gen = TermGen {
        constants: &["GOAL"],
        game: false,
    };
    let mut random = 0;
    while random < 100 {
        let m = random_model(&mut rng, &shape);
        let alg = ConfigAlgebra::new(&m);
        let d = rng.gen_range(2..=4);
        let t = gen.term(&mut rng, d).freshen();
        if !t.is_guarded() || t.binder().is_none() {
            continue;
        }
        assert!(fixed(&alg, &t), "{t}");
        random += 1;
    }
    let al = ab();
    let re = |p: &str| compile_regex(p, &al).unwrap();
    let alg = WordAlgebra::new(&al)
        .with_constant("R1", re("(a|b)*"))
        .with_constant("R2", re("ab*"));
    let t = parse_term(
        "mu X. nu Y. kup(shuffle(R1, star(X) & down(lres(Y, reverse(X)) & lres(X, R2))))",
        &|n| alg.arity(n),
    )
    .unwrap();
    assert!(check_fixpoints(&t, &Env::new(), &alg, Limits::default()).unwrap(), "closing example");
    format!("{checked} compiled terms on 4 models, {random} random terms, the word-level example")
}

fn c6_prestar() -> String {
    let shape = ModelShape {
        max_locations: 3,
        max_channels: 2,
        max_rules: 5,
        guards: true,
    };
    let mut rng = rng(6);
    let (mut reachable, mut total) = (0, 0);
    for i in 0..50 {
        let m = random_model(&mut rng, &shape);
        let alg = ConfigAlgebra::new(&m);
        let v = m.region("GOAL").unwrap();
        let star = eval(&alg, &pre_star(goal()), Limits::default());
        for c in configs_up_to(&m, 3) {
            total += 1;
            if bounded_reach(&m, &c, v, 6) == BoundedReach::Reachable {
                reachable += 1;
                assert!(star.contains(&c).unwrap(), "model {i}: {c:?} reaches GOAL but is not in Pre*");
            }
        }
    }
    format!("50 models, {total} configurations, {reachable} proven reachable, 0 counterexamples")
}

fn c7_unfold() -> String {
    let mut checked = 0;
    let mut rng = rng(7);
    let mut models: Vec<GlcsModel> = vec![load("game.lcs"), load("finite.lcs")];
    models.extend((0..10).map(|_| random_finite_game(&mut rng, 4)));
    for m in &models {
        let alg = ConfigAlgebra::new(m);
        for t in reach_terms() {
            let t = resolve(&alg, &t);
            let x = t.binder().unwrap().1.to_string();
            let u = t.unfold(&x).unwrap();
            let a = evaluate(&t, &Env::new(), &alg, Limits::default()).unwrap().0;
            let b = evaluate(&u, &Env::new(), &alg, Limits::default()).unwrap().0;
            assert!(a.equals(&b).unwrap(), "unfold of {t}");
            checked += 1;
        }
        for p in [Player::A, Player::B] {
            let w = eval(&alg, &game_term(GameGoal::Reach, p, goal()), Limits::default());
            let plain = resolve(&alg, &game_reach_plain(p, goal()));
            let (_, x, body) = plain.binder().unwrap();
            let mut env = Env::new();
            env.insert(x.to_string(), w.clone());
            let again = evaluate(body, &env, &alg, Limits::default()).unwrap().0;
            assert!(again.equals(&w).unwrap(), "plain reach functional at {p}");
            checked += 1;
        }
    }
    format!("{checked} checks on {} game models", models.len())
}

fn wsmc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wsmc")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn c8_refusals() -> String {
    let game = model_file("game.lcs");
    let plain = model_file("sendrecv.lcs");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["check", &plain, "ctl", "--formula", "AF GOAL"], "AF V"),
        (vec!["check", &plain, "ctl", "--formula", "A[all U GOAL]"], "AF V"),
        (vec!["check", &plain, "ctl", "--formula", "EG EF GOAL"], "EG EF V"),
        (vec!["check", &game, "asym-reach-A", "--target", "GOAL"], "reachability game for A"),
        (vec!["check", &game, "asym-inv-B", "--target", "GOAL"], "reachability game for A"),
    ];
    let n = cases.len();
    for (args, msg) in cases {
        let (code, stdout, stderr) = wsmc(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(stdout.is_empty(), "{args:?} printed {stdout}");
        assert!(stderr.contains("refused:") && stderr.contains(msg), "{args:?}: {stderr}");
    }
    format!("{n} refused requests")
}

fn c9_determinism() -> String {
    let abp = model_file("abp.lcs");
    let game = model_file("game.lcs");
    let send = model_file("sendrecv.lcs");
    let finite = model_file("finite.lcs");
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &abp],
        vec!["eval", &abp, "-f", "mu X. STALE | pre(up(X))", "--stats"],
        vec!["check", &abp, "ctl", "--formula", "AG !STALE | EF FLIP", "--json", "--stats"],
        vec!["check", &send, "prestar", "--target", "FULL"],
        vec!["check", &send, "release", "--cond", "GOAL", "--target", "all"],
        vec!["check", &game, "game-buchi", "--player", "B", "--target", "GOAL"],
        vec!["check", &game, "asym-reach-B", "--target", "GOAL", "--json"],
        vec!["check", &game, "prob-reach-pos", "--player", "B", "--target", "GOAL"],
        vec!["check", &finite, "game-reach", "--target", "GOAL", "--member", "s0 :"],
        vec!["oracle", "finite", &finite, "-f", "mu X. GOAL | pre(X)"],
    ];
    for args in &runs {
        let first = wsmc(args);
        assert!(first.0 != 2, "{args:?}: {}", first.2);
        for _ in 0..2 {
            let again = wsmc(args);
            assert_eq!((again.0, &again.1), (first.0, &first.1), "{args:?}");
        }
    }
    format!("{} commands, 3 runs each", runs.len())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> String, u64); 9] = [
        ("1 closures and kernels vs brute force", c1_closures, 60),
        ("2 lossy predecessor identities", c2_lemma, 120),
        ("3 zero-channel oracle equivalence", c3_finite, 0),
        ("4 guardedness and termination", c4_termination, 0),
        ("5 substitution fixpoints", c5_fixpoints, 0),
        ("6 Pre* vs bounded search", c6_prestar, 0),
        ("7 unfolding law", c7_unfold, 0),
        ("8 refusal contract", c8_refusals, 0),
        ("9 determinism", c9_determinism, 0),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run));
        let took = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) if budget == 0 || took < budget as f64 => {
                println!("criterion {name}: PASS ({detail}; {took:.1}s)")
            }
            Ok(detail) => {
                failed += 1;
                println!("criterion {name}: FAIL (over {budget}s budget: {took:.1}s; {detail})")
            }
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {name}: FAIL ({msg})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
