use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gclwb::exec::*;
use gclwb::lang::generate::{random_statement, GenConfig};
use gclwb::lang::{parse_program, Expr, GuardedCommand, Statement};

const EUCLID: &str = "var x,y; do x > y -> x := x - y [] y > x -> y := y - x od";

/// Division-based Euclid, independent of the subtraction loop under test.
fn gcd_oracle(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

fn st(pairs: &[(&str, i64)]) -> State {
    State::from_pairs(pairs.iter().map(|(k, v)| (*k, *v)))
}

fn terminated(pairs: &[(&str, i64)]) -> Outcome {
    Outcome::Terminated(st(pairs))
}

#[test]
fn euclid_from_12_18() {
    let p = parse_program(EUCLID).unwrap();
    let out = run_all(&p, &st(&[("x", 12), ("y", 18)]), 10_000).unwrap();
    assert_eq!(out, BTreeSet::from([terminated(&[("x", 6), ("y", 6)])]));
    assert_eq!(out.iter().next().unwrap().to_string(), "Terminated {x:6, y:6}");
}

#[test]
fn euclid_with_equal_inputs_exits_immediately() {
    let p = parse_program(EUCLID).unwrap();
    let out = run_all(&p, &st(&[("x", 5), ("y", 5)]), 1).unwrap();
    assert_eq!(out, BTreeSet::from([terminated(&[("x", 5), ("y", 5)])]));
}

#[test]
fn euclid_matches_gcd_oracle_on_1_to_30() {
    let p = parse_program(EUCLID).unwrap();
    for x in 1..=30 {
        for y in 1..=30 {
            let out = run_all(&p, &st(&[("x", x), ("y", y)]), 10_000).unwrap();
            let g = gcd_oracle(x, y);
            assert_eq!(out, BTreeSet::from([terminated(&[("x", g), ("y", g)])]), "{x},{y}");
        }
    }
}

#[test]
fn both_guards_true_gives_both_outcomes() {
    let p = parse_program("var x; if true -> x := 0 [] true -> x := 1 fi").unwrap();
    let out = run_all(&p, &st(&[("x", 7)]), 10).unwrap();
    assert_eq!(out, BTreeSet::from([terminated(&[("x", 0)]), terminated(&[("x", 1)])]));

    let picks: BTreeSet<Outcome> =
        [0, 1].iter().map(|&seed| run_one(&p, &st(&[("x", 7)]), seed, 10).unwrap()).collect();
    assert_eq!(picks, out);
    assert_eq!(run_one(&p, &st(&[("x", 7)]), 0, 10).unwrap(), terminated(&[("x", 0)]));
}

#[test]
fn if_without_true_guard_aborts() {
    let p = parse_program("var x; if x > 0 -> skip fi").unwrap();
    let out = run_all(&p, &st(&[("x", 0)]), 10).unwrap();
    assert_eq!(out, BTreeSet::from([Outcome::Aborted(AbortReason::NoTrueGuard)]));
}

#[test]
fn division_by_zero_is_an_outcome() {
    let p = parse_program("var x, y; x := x div y").unwrap();
    let out = run_all(&p, &st(&[("x", 3), ("y", 0)]), 10).unwrap();
    assert_eq!(out, BTreeSet::from([Outcome::Aborted(AbortReason::DivisionByZero)]));
    let p = parse_program("var x, y; if x mod y = 0 -> skip fi").unwrap();
    let out = run_all(&p, &st(&[("x", 3), ("y", 0)]), 10).unwrap();
    assert_eq!(out, BTreeSet::from([Outcome::Aborted(AbortReason::DivisionByZero)]));
}

#[test]
fn infinite_loop_hits_budget() {
    let p = parse_program("var x; do true -> skip od").unwrap();
    assert_eq!(run_one(&p, &st(&[("x", 0)]), 3, 100).unwrap(), Outcome::BudgetExceeded);
    let out = run_all(&p, &st(&[("x", 0)]), 100).unwrap();
    assert_eq!(out, BTreeSet::from([Outcome::BudgetExceeded]));
}

#[test]
fn budget_counts_primitive_statements() {
    let p = parse_program("var x; x := 1; x := 2; x := 3").unwrap();
    assert_eq!(run_all(&p, &st(&[("x", 0)]), 3).unwrap(), BTreeSet::from([terminated(&[("x", 3)])]));
    assert_eq!(run_all(&p, &st(&[("x", 0)]), 2).unwrap(), BTreeSet::from([Outcome::BudgetExceeded]));
}

#[test]
fn unfair_choice_counts_livelock_as_a_path() {
    // The demon may pick the first arm forever.
    let p = parse_program("var x; do x > 0 -> skip [] x > 0 -> x := 0 od").unwrap();
    let out = run_all(&p, &st(&[("x", 1)]), 50).unwrap();
    assert_eq!(out, BTreeSet::from([terminated(&[("x", 0)]), Outcome::BudgetExceeded]));
}

#[test]
fn simultaneous_assignment_swaps() {
    let p = parse_program("var x, y; x, y := y, x").unwrap();
    let out = run_all(&p, &st(&[("x", 1), ("y", 2)]), 10).unwrap();
    assert_eq!(out, BTreeSet::from([terminated(&[("x", 2), ("y", 1)])]));
}

#[test]
fn initial_state_must_match_declarations() {
    let p = parse_program(EUCLID).unwrap();
    assert!(matches!(run_all(&p, &st(&[("x", 1)]), 10), Err(ExecError::StateMismatch { .. })));
    assert!(matches!(run_all(&p, &st(&[("x", 1), ("y", 1), ("z", 0)]), 10), Err(ExecError::StateMismatch { .. })));
    assert_eq!(run_all(&p, &st(&[("x", 1), ("y", 1)]), 0), Err(ExecError::ZeroBudget));
}

#[test]
fn state_parsing() {
    assert_eq!(State::parse("x=12, y=-3").unwrap(), st(&[("x", 12), ("y", -3)]));
    assert!(State::parse("x=1,x=2").is_err());
    assert!(State::parse("x").is_err());
    assert!(State::parse("x=abc").is_err());
}

fn corpus(seed: u64, n: usize) -> Vec<Statement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GenConfig::new(&["x", "y"]);
    (0..n).map(|_| random_statement(&mut rng, &cfg, 3)).collect()
}

fn small_states() -> Vec<State> {
    let mut out = Vec::new();
    for x in -2..=2 {
        for y in -2..=2 {
            out.push(st(&[("x", x), ("y", y)]));
        }
    }
    out
}

#[test]
fn semantic_equations_on_generated_corpus() {
    let stmts = corpus(11, 150);
    for s0 in small_states() {
        assert_eq!(run_statement_all(&Statement::Skip, &s0, 10), BTreeSet::from([Outcome::Terminated(s0.clone())]));
        for pair in stmts.chunks(2) {
            let (s1, s2) = (&pair[0], &pair[1]);
            let composed = run_statement_all(&Statement::seq([s1.clone(), s2.clone()]), &s0, 1000);
            let mut expected = BTreeSet::new();
            for o in run_statement_all(s1, &s0, 1000) {
                match o {
                    Outcome::Terminated(mid) => expected.extend(run_statement_all(s2, &mid, 1000)),
                    other => {
                        expected.insert(other);
                    }
                }
            }
            assert_eq!(composed, expected, "{s1}\n;\n{s2}\nfrom {s0}");
        }
        let dead = Statement::If(vec![GuardedCommand { guard: Expr::Bool(false), body: stmts[0].clone() }]);
        assert_eq!(run_statement_all(&dead, &s0, 10), BTreeSet::from([Outcome::Aborted(AbortReason::NoTrueGuard)]));
        let exit = Statement::Do(gclwb::lang::Loop {
            annotation: None,
            arms: vec![GuardedCommand { guard: Expr::Bool(false), body: stmts[1].clone() }],
        });
        assert_eq!(run_statement_all(&exit, &s0, 10), BTreeSet::from([Outcome::Terminated(s0.clone())]));
    }
}

#[test]
fn memoization_does_not_change_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cfg = GenConfig::new(&["x", "y"]);
    cfg.loops = true;
    for _ in 0..200 {
        let s = random_statement(&mut rng, &cfg, 3);
        for s0 in [st(&[("x", 1), ("y", 2)]), st(&[("x", 0), ("y", -1)])] {
            assert_eq!(run_statement_all(&s, &s0, 10), run_statement_all_unmemoized(&s, &s0, 10), "{s}");
        }
    }
}

proptest! {
    #[test]
    fn run_one_is_a_member_of_run_all(seed in any::<u64>(), pick in any::<u64>(), x in -3i64..4, y in -3i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = GenConfig::new(&["x", "y"]);
        cfg.loops = true;
        let s = random_statement(&mut rng, &cfg, 3);
        let s0 = st(&[("x", x), ("y", y)]);
        let all = run_statement_all(&s, &s0, 40);
        let one = run_statement_one(&s, &s0, pick, 40);
        prop_assert!(all.contains(&one), "{} not in {:?}", one, all);
    }
}
