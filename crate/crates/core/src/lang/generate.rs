//! Seeded random generation of well-formed expressions and statements.

use rand::Rng;

use super::ast::*;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub vars: Vec<String>,
    /// Maximum nesting depth of statements and expressions.
    pub max_depth: u32,
    /// Emit `do`-loops (with annotations) as well.
    pub loops: bool,
    /// Emit `div`, `mod` and `abort`, which can fault.
    pub faults: bool,
    /// Integer literals are drawn from `0..=max_literal`.
    pub max_literal: u32,
}

impl GenConfig {
    pub fn new(vars: &[&str]) -> Self {
        GenConfig {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            max_depth: 3,
            loops: false,
            faults: true,
            max_literal: 3,
        }
    }
}

fn leaf_int(rng: &mut impl Rng, cfg: &GenConfig) -> Expr {
    if rng.random_bool(0.6) {
        Expr::Var(cfg.vars[rng.random_range(0..cfg.vars.len())].clone())
    } else {
        Expr::int(rng.random_range(0..=cfg.max_literal))
    }
}

pub fn random_int_expr(rng: &mut impl Rng, cfg: &GenConfig, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.35) {
        return leaf_int(rng, cfg);
    }
    let d = depth - 1;
    match rng.random_range(0..10) {
        0..=2 => Expr::arith(ArithOp::Add, random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d)),
        3..=4 => Expr::arith(ArithOp::Sub, random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d)),
        5 => Expr::arith(ArithOp::Mul, random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d)),
        6 => Expr::neg(random_int_expr(rng, cfg, d)),
        7 if cfg.faults => {
            let op = if rng.random_bool(0.5) { ArithOp::Div } else { ArithOp::Mod };
            Expr::arith(op, random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d))
        }
        8 => Expr::Call(Builtin::Abs, vec![random_int_expr(rng, cfg, d)]),
        9 => Expr::Call(Builtin::Gcd, vec![random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d)]),
        _ => leaf_int(rng, cfg),
    }
}

fn comparison(rng: &mut impl Rng, cfg: &GenConfig, depth: u32) -> Expr {
    let op = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge][rng.random_range(0..6)];
    let d = depth.saturating_sub(1).min(2);
    Expr::cmp(op, random_int_expr(rng, cfg, d), random_int_expr(rng, cfg, d))
}

pub fn random_predicate(rng: &mut impl Rng, cfg: &GenConfig, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.4) {
        return match rng.random_range(0..12) {
            0 => Expr::Bool(true),
            1 => Expr::Bool(false),
            _ => comparison(rng, cfg, depth),
        };
    }
    let d = depth - 1;
    match rng.random_range(0..6) {
        0 => Expr::not(random_predicate(rng, cfg, d)),
        1 => Expr::logic(LogicOp::And, random_predicate(rng, cfg, d), random_predicate(rng, cfg, d)),
        2 => Expr::logic(LogicOp::Or, random_predicate(rng, cfg, d), random_predicate(rng, cfg, d)),
        3 => Expr::logic(LogicOp::Implies, random_predicate(rng, cfg, d), random_predicate(rng, cfg, d)),
        4 => Expr::logic(LogicOp::Iff, random_predicate(rng, cfg, d), random_predicate(rng, cfg, d)),
        _ => comparison(rng, cfg, depth),
    }
}

fn random_arms(rng: &mut impl Rng, cfg: &GenConfig, depth: u32) -> Vec<GuardedCommand> {
    let n = rng.random_range(1..=3);
    (0..n)
        .map(|_| GuardedCommand { guard: random_predicate(rng, cfg, 2), body: random_statement(rng, cfg, depth) })
        .collect()
}

fn simple_statement(rng: &mut impl Rng, cfg: &GenConfig) -> Statement {
    match rng.random_range(0..10) {
        0 => Statement::Skip,
        1 if cfg.faults => Statement::Abort,
        2 if cfg.vars.len() >= 2 => {
            let mut targets = cfg.vars.clone();
            let i = rng.random_range(0..targets.len());
            let a = targets.swap_remove(i);
            let b = targets[rng.random_range(0..targets.len())].clone();
            Statement::MultiAssign(vec![a, b], vec![random_int_expr(rng, cfg, 2), random_int_expr(rng, cfg, 2)])
        }
        _ => Statement::Assign(cfg.vars[rng.random_range(0..cfg.vars.len())].clone(), random_int_expr(rng, cfg, 2)),
    }
}

pub fn random_statement(rng: &mut impl Rng, cfg: &GenConfig, depth: u32) -> Statement {
    if depth == 0 || rng.random_bool(0.3) {
        return simple_statement(rng, cfg);
    }
    let d = depth - 1;
    match rng.random_range(0..10) {
        0..=3 => {
            let n = rng.random_range(2..=3);
            Statement::seq((0..n).map(|_| random_statement(rng, cfg, d)))
        }
        4..=6 => Statement::If(random_arms(rng, cfg, d)),
        7 if cfg.loops => {
            let annotation = rng.random_bool(0.5).then(|| LoopAnnotation {
                invariant: random_predicate(rng, cfg, 2),
                bound: random_int_expr(rng, cfg, 2),
            });
            Statement::Do(Loop { annotation, arms: random_arms(rng, cfg, d) })
        }
        _ => simple_statement(rng, cfg),
    }
}

/// A random program over `cfg.vars`, optionally annotated.
pub fn random_program(rng: &mut impl Rng, cfg: &GenConfig) -> Program {
    let annotation = rng
        .random_bool(0.3)
        .then(|| Annotation { pre: random_predicate(rng, cfg, 2), post: random_predicate(rng, cfg, 2) });
    Program { vars: cfg.vars.clone(), annotation, body: random_statement(rng, cfg, cfg.max_depth) }
}
