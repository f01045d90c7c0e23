use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gclwb::calc::poly::{Poly, RatFn};
use gclwb::calc::*;
use gclwb::lang::generate::{random_int_expr, GenConfig};
use gclwb::lang::Expr;
use gclwb::wp::CheckDomain;

const HERON: &str = "let s = (a + b + c)/2
  s*(s-b)*(s-c) + s*(s-c)*(s-a)
=   { algebra }
  s*(s-c)*(2*s - a - b)
=   { definition of s }
  s*(s-c)*c
";

fn expr(s: &str) -> Expr {
    let chain = parse_proof(&format!("{s} = {{algebra}} {s}")).unwrap();
    chain.steps[0].lhs.clone()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn heron_chain_parses_into_two_steps() {
    let chain = parse_proof(HERON).unwrap();
    assert_eq!(chain.steps.len(), 2);
    assert_eq!(chain.definitions, vec![("s".to_string(), expr("(a + b + c) / 2"))]);
    assert_eq!(chain.steps[0].hint, "algebra");
    assert_eq!(chain.steps[1].hint, "definition of s");
    assert_eq!(*chain.first(), expr("s*(s-b)*(s-c) + s*(s-c)*(s-a)"));
    assert_eq!(*chain.last(), expr("s*(s-c)*c"));
    assert_eq!(chain.composed(), Some(Relation::Eq));
}

#[test]
fn heron_chain_checks() {
    let chain = parse_proof(HERON).unwrap();
    let v = check_chain(&chain, None);
    assert_eq!(v.steps[0].status, StepStatus::ValidByNormalization);
    assert_eq!(v.steps[1].status, StepStatus::ValidByNormalization);
    assert_eq!(v.relation, Some(Relation::Eq));
    assert!(v.valid);
}

#[test]
fn definition_turns_the_last_factor_into_c() {
    let chain = parse_proof(HERON).unwrap();
    let def = chain.definition("s").unwrap();
    let sub = expr("2*s - a - b").substitute(&|v| (v == "s").then(|| def.clone()));
    assert_eq!(RatFn::from_expr(&sub).unwrap().num, Poly::var("c"));
}

#[test]
fn heron_without_definition_is_refuted() {
    let text = "  s*(s-b)*(s-c) + s*(s-c)*(s-a)\n= { algebra }\n  s*(s-c)*c\n";
    let chain = parse_proof(text).unwrap();
    let v = check_chain(&chain, None);
    assert!(!v.valid);
    let StepStatus::Invalid { assignment, lhs, rhs } = &v.steps[0].status else { panic!("{:?}", v.steps[0].status) };
    let at: BTreeMap<String, i64> = [("a", 0), ("b", 0), ("c", 0), ("s", 1)].map(|(k, v)| (k.to_string(), v)).into();
    assert_eq!(*assignment, at);
    assert_eq!((lhs, rhs), (&Value::Num(q(2)), &Value::Num(q(0))));

    // The same chain, with the definition step but without the `let`.
    let no_let = HERON.lines().skip(1).collect::<Vec<_>>().join("\n");
    let v = check_chain(&parse_proof(&no_let).unwrap(), None);
    assert_eq!(v.steps[0].status, StepStatus::ValidByNormalization);
    assert!(matches!(v.steps[1].status, StepStatus::Rejected(_)));
    assert!(!v.valid);
}

#[test]
fn single_step_chain() {
    let chain = parse_proof("x+0 = {algebra} x").unwrap();
    assert_eq!(chain.steps.len(), 1);
    assert!(check_chain(&chain, None).valid);
}

#[test]
fn broken_chain_is_a_parse_error() {
    let text = "  x + 0\n= { algebra }\n  x\n  y + 0\n= { algebra }\n  y\n";
    let err = parse_proof(text).unwrap_err();
    assert!(matches!(err, ProofError::BrokenChain { .. }));
    assert!(err.to_string().contains("broken chain"), "{err}");
    // Repeating the shared expression verbatim is fine.
    let text = "  x + 0\n= { algebra }\n  x\n  x\n= { algebra }\n  x * 1\n";
    assert_eq!(parse_proof(text).unwrap().steps.len(), 2);
}

#[test]
fn unknown_relation_is_rejected() {
    for text in ["x != { h } y", "x + { h } y", "{ h } x"] {
        assert!(matches!(parse_proof(text), Err(ProofError::UnknownRelation { .. })), "{text}");
    }
    assert_eq!(parse_proof("x + 1"), Err(ProofError::NoSteps));
}

#[test]
fn relation_types_are_checked() {
    assert!(parse_proof("x > 0 = { h } x").is_err());
    assert!(parse_proof("x < { h } x > 0").is_err());
    assert!(parse_proof("x ==> { h } y").is_err());
    assert!(parse_proof("x > 0 ==> { h } x >= 0").is_ok());
}

#[test]
fn strict_step_makes_the_chain_strict() {
    let chain = parse_proof("x <= {dom} x + 1 < {dom} x + 3").unwrap();
    let dom = CheckDomain::parse("x=-5..5").unwrap();
    let v = check_chain(&chain, Some(&dom));
    assert!(v.steps.iter().all(|s| s.status == StepStatus::ValidOnDomain));
    assert_eq!(v.relation, Some(Relation::Lt));
    assert!(v.valid);
    // Without a domain the free-text hints stay unchecked.
    let v = check_chain(&chain, None);
    assert!(matches!(v.steps[0].status, StepStatus::Unchecked(_)));
    assert!(!v.valid);
}

#[test]
fn one_invalid_step_invalidates_the_chain() {
    let chain = parse_proof("x = {algebra} x + 0 = {algebra} x + 1 = {algebra} 1 + x").unwrap();
    let v = check_chain(&chain, None);
    let valid: Vec<bool> = v.steps.iter().map(|s| s.status.is_valid()).collect();
    assert_eq!(valid, [true, false, true]);
    assert!(!v.valid);
}

#[test]
fn constant_gap_inequalities_normalize() {
    let dom_free = |t: &str| check_chain(&parse_proof(t).unwrap(), None);
    assert!(dom_free("x <= {algebra} x + 1").valid);
    assert!(dom_free("(x+1)*(x+1) > {algebra} x*x + 2*x").valid);
    assert!(!dom_free("x < {algebra} x").valid);
    assert!(matches!(dom_free("x <= {algebra} 2*x").steps[0].status, StepStatus::Unchecked(_)));
}

#[test]
fn non_polynomial_algebra_falls_back_to_domain() {
    let chain = parse_proof("gcd(x, y) = {algebra} gcd(y, x)").unwrap();
    assert!(matches!(check_chain(&chain, None).steps[0].status, StepStatus::Unchecked(_)));
    let dom = CheckDomain::parse("x=-6..6,y=-6..6").unwrap();
    assert_eq!(check_chain(&chain, Some(&dom)).steps[0].status, StepStatus::ValidOnDomain);
}

#[test]
fn logical_chains() {
    let chain = parse_proof("x > 1 ==> {arith} x > 0 <=> {arith} 0 < x").unwrap();
    let dom = CheckDomain::parse("x=-4..4").unwrap();
    let v = check_chain(&chain, Some(&dom));
    assert_eq!(v.relation, Some(Relation::Implies));
    assert!(v.valid);
    let bad = parse_proof("x > 0 ==> {arith} x > 1").unwrap();
    let v = check_chain(&bad, Some(&dom));
    let StepStatus::Invalid { assignment, .. } = &v.steps[0].status else { panic!() };
    assert_eq!(assignment["x"], 1);
}

#[test]
fn mixed_chains_do_not_compose() {
    let chain = parse_proof("x <= {a} x + 1 >= {a} x").unwrap();
    let v = check_chain(&chain, Some(&CheckDomain::parse("x=0..3").unwrap()));
    assert_eq!(v.relation, None);
    assert!(!v.valid);
}

#[test]
fn claims() {
    let claimed = |c: &str| {
        let text = format!("claim {c}\nx = {{algebra}} x + 0 < {{algebra}} x + 1");
        check_chain(&parse_proof(&text).unwrap(), None).valid
    };
    assert!(claimed("<"));
    assert!(claimed("<="));
    assert!(!claimed("="));
    assert!(!claimed(">"));
}

#[test]
fn composition_table_matches_documentation() {
    use Relation::*;
    assert_eq!(Eq.compose(Le), Some(Le));
    assert_eq!(Lt.compose(Le), Some(Lt));
    assert_eq!(Le.compose(Lt), Some(Lt));
    assert_eq!(Implies.compose(Iff), Some(Implies));
    assert_eq!(Iff.compose(Iff), Some(Iff));
    assert_eq!(Le.compose(Ge), None);
    assert_eq!(Le.compose(Implies), None);
    assert_eq!(Iff.compose(Lt), None);
}

#[test]
fn composition_is_associative() {
    for a in Relation::ALL {
        for b in Relation::ALL {
            for c in Relation::ALL {
                let left = a.compose(b).and_then(|ab| ab.compose(c));
                let right = b.compose(c).and_then(|bc| a.compose(bc));
                assert_eq!(left, right, "{a} {b} {c}");
            }
        }
    }
}

#[test]
fn composition_is_sound_on_small_integers() {
    // a R b and b S c imply a (R;S) c, checked by brute force.
    let holds = |r: Relation, x: i64, y: i64| match r {
        Relation::Eq => x == y,
        Relation::Lt => x < y,
        Relation::Le => x <= y,
        Relation::Gt => x > y,
        Relation::Ge => x >= y,
        _ => unreachable!(),
    };
    let arith = [Relation::Eq, Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge];
    for r in arith {
        for s in arith {
            let Some(t) = r.compose(s) else { continue };
            for x in -3..=3 {
                for y in -3..=3 {
                    for z in -3..=3 {
                        if holds(r, x, y) && holds(s, y, z) {
                            assert!(holds(t, x, z));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn pretty_printing_round_trips() {
    for text in [HERON, "claim <=\nx <= {dom} x + 1 < {dom} x + 3", "x > 1 ==> {arith} x > 0 <=> {arith} 0 < x"] {
        let chain = parse_proof(text).unwrap();
        let printed = pretty_proof(&chain);
        assert_eq!(parse_proof(&printed).unwrap(), chain, "{printed}");
    }
    let printed = pretty_proof(&parse_proof(HERON).unwrap());
    assert!(printed.starts_with("let s = (a + b + c) / 2\n  s * (s - b) * (s - c)"), "{printed}");
    assert!(printed.contains("\n=   { algebra }\n"), "{printed}");
}

#[test]
fn polynomial_arithmetic() {
    let x = Poly::var("x");
    let y = Poly::var("y");
    let sq = (&x + &y).pow(2);
    let expanded = &(&(&x * &x) + &(&Poly::int(2) * &(&x * &y))) + &(&y * &y);
    assert_eq!(sq, expanded);
    assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
    assert!((&sq - &expanded).is_zero());
    assert_eq!(RatFn::from_expr(&expr("(x + y) / 2 * 2 - x")).unwrap().num, y);
    assert!(RatFn::from_expr(&expr("x div 2")).is_err());
    assert!(RatFn::from_expr(&expr("x / (y - y)")).is_err());
}

#[test]
fn rational_function_steps() {
    let chain = parse_proof("x / y + 1 = {algebra} (x + y) / y").unwrap();
    assert!(check_chain(&chain, None).valid);
    let chain = parse_proof("x / y = {algebra} y / x").unwrap();
    let StepStatus::Invalid { assignment, lhs, rhs } = &check_chain(&chain, None).steps[0].status else { panic!() };
    assert!(assignment["x"] != 0 && assignment["y"] != 0);
    assert_ne!(lhs, rhs);
}

fn random_q(rng: &mut impl Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.random_range(-50..=50)), BigInt::from(rng.random_range(1..=9)))
}

proptest! {
    #[test]
    fn normalization_is_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = GenConfig::new(&["a", "b", "c"]);
        cfg.faults = false;
        let gen = |rng: &mut ChaCha8Rng| loop {
            let e = random_int_expr(rng, &cfg, 3);
            if RatFn::from_expr(&e).is_ok() {
                return e;
            }
        };
        let lhs = gen(&mut rng);
        // Either the expanded normal form (always equal) or an unrelated
        // expression (rarely equal).
        let rhs = if rng.random_bool(0.5) { RatFn::from_expr(&lhs).unwrap().num.to_expr() } else { gen(&mut rng) };
        let step = Step { lhs: lhs.clone(), relation: Relation::Eq, hint: "algebra".into(), rhs: rhs.clone(), pos: Default::default() };
        let status = check_step(&step, &[], None);
        if status == StepStatus::ValidByNormalization {
            let (a, b) = (RatFn::from_expr(&lhs).unwrap(), RatFn::from_expr(&rhs).unwrap());
            for _ in 0..1000 {
                let env: BTreeMap<String, BigRational> =
                    ["a", "b", "c"].iter().map(|v| (v.to_string(), random_q(&mut rng))).collect();
                prop_assert_eq!(a.num.eval(&env), b.num.eval(&env));
            }
        } else {
            prop_assert!(matches!(status, StepStatus::Invalid { .. }), "{:?}", status);
        }
    }

    #[test]
    fn normal_form_round_trips_through_expressions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cfg = GenConfig::new(&["a", "b"]);
        cfg.faults = false;
        let e = random_int_expr(&mut rng, &cfg, 3);
        if let Ok(r) = RatFn::from_expr(&e) {
            prop_assert_eq!(RatFn::from_expr(&r.num.to_expr()).unwrap().num, r.num);
        }
    }

    #[test]
    fn domain_verdicts_are_reproducible(k in 0i64..5) {
        let text = format!("x * x >= {{dom}} {k} * x - 4");
        let chain = parse_proof(&text).unwrap();
        let dom = CheckDomain::parse("x=-6..6").unwrap();
        prop_assert_eq!(check_chain(&chain, Some(&dom)), check_chain(&chain, Some(&dom)));
    }
}
