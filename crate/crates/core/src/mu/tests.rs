use super::*;
use crate::automata::{compile_regex, Alphabet, Nfa};

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn re(p: &str) -> Nfa {
    compile_regex(p, &ab()).unwrap()
}

fn algebra() -> WordAlgebra {
    WordAlgebra::new(&ab())
        .with_constant("V", re("ab"))
        .with_constant("R1", re("(a|b)*"))
        .with_constant("R2", re("ab*"))
        .with_constant("pre", re("b"))
}

fn parse(text: &str) -> Result<Term, TermError> {
    let alg = algebra();
    let arity = |n: &str| match n {
        "pre" | "wpre" => Some(1),
        _ => alg.arity(n),
    };
    parse_term(text, &arity)
}

#[test]
fn parses_prestar_shape() {
    let t = parse("mu X. V | pre(up(X))").unwrap();
    let want = Term::mu(
        "X",
        Term::constant("V").or(Term::unary("pre", Term::var("X").up())),
    );
    assert_eq!(t, want);
    assert_eq!(t.to_string(), "mu X. V | pre(up(X))");
}

#[test]
fn parse_errors() {
    assert!(parse("mu X. X").is_ok());
    assert_eq!(parse("mu X. !X"), Err(TermError::Parity("X".into())));
    assert!(parse("mu X. !!X").is_ok());
    assert!(matches!(parse("foo(V)"), Err(TermError::UnknownOperator { .. })));
    assert!(matches!(parse("pre(V, V)"), Err(TermError::Arity { .. })));
    assert!(matches!(parse("pre"), Err(TermError::Arity { .. })));
    assert!(matches!(parse("V |"), Err(TermError::Syntax { .. })));
    assert!(matches!(parse("V $"), Err(TermError::Syntax { pos: 2, .. })));
    assert!(matches!(parse("(V"), Err(TermError::Syntax { .. })));
}

#[test]
fn precedence_and_binder_extent() {
    let t = parse("V | !V & V").unwrap();
    assert_eq!(t, Term::constant("V").or(Term::constant("V").not().and(Term::constant("V"))));
    let t = parse("V | mu X. V | up(X)").unwrap();
    assert_eq!(
        t,
        Term::constant("V").or(Term::mu("X", Term::constant("V").or(Term::var("X").up())))
    );
    assert_eq!(t.to_string(), "V | (mu X. V | up(X))");
    assert_eq!(parse(&t.to_string()).unwrap(), t);
}

#[test]
fn freshening_renames_clashes() {
    let t = parse("(mu X. up(X)) | (mu X. up(X)) | Y").unwrap();
    assert_eq!(t.binders(), vec!["X", "X1"]);
    let t = parse("mu Y. up(Y)").unwrap().or(Term::var("Y")).freshen();
    assert_eq!(t.binders(), vec!["Y1"]);
    assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec!["Y"]);
}

#[test]
fn guardedness_examples() {
    assert!(parse("mu X. V | pre(up(X))").unwrap().is_guarded());
    let bad = parse("mu X. V | pre(X)").unwrap().check_guarded();
    assert_eq!(
        bad,
        vec![Offense {
            binder: "X".into(),
            path: vec![1, 0]
        }]
    );
    assert!(parse("nu X. V & (wpre(kdown(X)) | R1)").unwrap().is_guarded());
    assert!(!parse("nu X. up(X)").unwrap().is_guarded());
    // Under a complement the direction of a guard flips.
    assert!(parse("mu X. !down(!X)").unwrap().is_guarded());
    assert!(!parse("mu X. !up(!X)").unwrap().is_guarded());
    assert!(parse("mu X. nu Y. kup(X & down(Y))").unwrap().is_guarded());
    // An inner binder of the same name shadows.
    let t = Term::mu("X", Term::mu("X", Term::var("X").up()));
    assert!(t.is_guarded());
}

#[test]
fn trivial_evaluations() {
    let alg = algebra();
    let env = Env::new();
    let (v, stats) = evaluate(&parse("mu X. up(X)").unwrap(), &env, &alg, Limits::default()).unwrap();
    assert!(v.is_empty());
    assert_eq!(stats.iterations["X"], 1);
    let (v, _) = evaluate(&parse("nu X. kdown(X)").unwrap(), &env, &alg, Limits::default()).unwrap();
    assert!(v.is_universal());
    let t = parse("mu X. X").unwrap();
    assert_eq!(
        evaluate(&t, &env, &alg, Limits::default()).unwrap_err(),
        EvalError::Unguarded("X".into())
    );
    assert!(evaluate(&t, &env, &alg, Limits::capped(5)).unwrap().0.is_empty());
    assert_eq!(
        evaluate(&parse("up(Z)").unwrap(), &env, &alg, Limits::default()).unwrap_err(),
        EvalError::UnknownVariable("Z".into())
    );
}

#[test]
fn decide_examples() {
    let alg = algebra();
    let l = Limits::default();
    assert!(!decide_query(&Query::Satisfiable, &parse("mu X. up(X)").unwrap(), &alg, l).unwrap());
    assert!(decide_query(&Query::Universal, &parse("nu X. kdown(X)").unwrap(), &alg, l).unwrap());
    let w = ab().parse_word("ab").unwrap();
    assert!(decide_query(&Query::Member(w), &parse("up(V)").unwrap(), &alg, l).unwrap());
}

#[test]
fn iteration_cap_reported() {
    // star(X) | a keeps growing only through unguarded concatenation.
    let alg = WordAlgebra::new(&ab()).with_constant("A", re("a"));
    let arity = |n: &str| alg.arity(n);
    let t = parse_term("mu X. A | concat(A, X)", &arity).unwrap();
    assert!(matches!(
        evaluate(&t, &Env::new(), &alg, Limits::capped(4)),
        Err(EvalError::IterationCap { cap: 4, .. })
    ));
}

#[test]
fn prestar_of_word_prefix_operator() {
    // Least X with X = V ∪ up(X): the upward closure of V after one step.
    let alg = algebra();
    let t = parse("mu X. V | up(X)").unwrap();
    let (v, stats) = evaluate(&t, &Env::new(), &alg, Limits::default()).unwrap();
    assert!(v.equals(&re(".*a.*b.*")).unwrap());
    assert_eq!(stats.iterations["X"], 3);
    assert!(check_fixpoints(&t, &Env::new(), &alg, Limits::default()).unwrap());
}

#[test]
fn closing_example_term() {
    let alg = algebra();
    let arity = |n: &str| alg.arity(n);
    let t = parse_term(
        "mu X. nu Y. kup(shuffle(R1, star(X) & down(lres(Y, reverse(X)) & lres(X, R2))))",
        &arity,
    )
    .unwrap();
    assert!(t.is_guarded());
    let (v, stats) = evaluate(&t, &Env::new(), &alg, Limits::default()).unwrap();
    assert!(stats.iterations.values().all(|&n| n > 0));
    // Upward closed by construction.
    assert!(v.up_closure().equals(&v).unwrap());
    assert!(check_fixpoints(&t, &Env::new(), &alg, Limits::default()).unwrap());
}

#[test]
fn unfold_substitutes_once() {
    let t = parse("mu X. V | pre(X)").unwrap();
    let u = t.unfold("X").unwrap();
    assert_eq!(u.to_string(), "mu X. V | pre(V | pre(X))");
    assert!(t.unfold("Y").is_none());
    let g = parse("mu X. V | up(mu Y. X | up(Y))").unwrap();
    let u = g.unfold("X").unwrap();
    assert_eq!(u.binders(), vec!["X", "Y", "Y1"]);
    let alg = algebra();
    let a = evaluate(&g, &Env::new(), &alg, Limits::default()).unwrap().0;
    let b = evaluate(&u, &Env::new(), &alg, Limits::default()).unwrap().0;
    assert!(a.equals(&b).unwrap());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_term(vars: Vec<&'static str>) -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::constant("V")),
            Just(Term::constant("R2")),
            Just(Term::Empty),
            Just(Term::All),
            prop::sample::select(vars).prop_map(Term::var),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                inner.clone().prop_map(Term::up),
                inner.clone().prop_map(Term::down),
                inner.clone().prop_map(Term::kup),
                inner.clone().prop_map(Term::kdown),
                inner.clone().prop_map(|a| Term::unary("reverse", a)),
                inner.clone().prop_map(|a| Term::mu("X", a)),
                inner.prop_map(|a| Term::nu("Y", a)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn display_round_trips(t in arb_term(vec!["X", "Y", "Z"])) {
            let alg = algebra();
            let arity = |n: &str| alg.arity(n);
            let t = t.freshen();
            prop_assert_eq!(parse_term(&t.to_string(), &arity).unwrap(), t);
        }

        #[test]
        fn guarded_terms_terminate_at_fixpoints(t in arb_term(vec!["X", "Y"])) {
            let t = Term::mu("X", Term::nu("Y", t)).freshen();
            prop_assume!(t.is_guarded());
            let alg = algebra();
            let l = Limits::default();
            let (v, _) = evaluate(&t, &Env::new(), &alg, l).unwrap();
            prop_assert!(check_fixpoints(&t, &Env::new(), &alg, l).unwrap());
            let u = t.unfold("X").unwrap();
            if u.is_guarded() {
                let (w, _) = evaluate(&u, &Env::new(), &alg, l).unwrap();
                prop_assert!(v.equals(&w).unwrap());
            }
        }

        #[test]
        fn environment_monotonicity(t in arb_term(vec!["Z"])) {
            let t = t.freshen();
            prop_assume!(t.is_guarded());
            let alg = algebra();
            let small: Env<Nfa> = [("Z".to_string(), re("a"))].into();
            let big: Env<Nfa> = [("Z".to_string(), re("a|b*"))].into();
            let l = Limits::default();
            let (x, _) = evaluate(&t, &small, &alg, l).unwrap();
            let (y, _) = evaluate(&t, &big, &alg, l).unwrap();
            prop_assert!(x.is_subset(&y).unwrap());
        }
    }
}
