//! Weakest preconditions of loop-free statements, verification conditions for
//! annotated loops, and a bounded exhaustive validity checker.
//!
//! The transformer follows the standard rules:
//!
//! ```text
//! wp(skip, R)          = R
//! wp(abort, R)         = false
//! wp(x := E, R)        = defined(E) and R[x := E]
//! wp(S1; S2, R)        = wp(S1, wp(S2, R))
//! wp(if gi -> Si fi, R) = defined(g) and (g1 or ... or gn) and (gi ==> wp(Si, R)) for all i
//! ```
//!
//! `defined(E)` conjoins `d != 0` for every divisor `d` of a `div`/`mod` in
//! `E`. Predicates themselves are evaluated totally (see [`crate::exec::Mode`]).

mod check;
mod vc;

pub use check::{check_formula, check_vc, CheckDomain, CheckError, Verdict, DEFAULT_CAP};
pub use vc::{complete_domain, verify_loop, verify_program, VcError, VcKind, VerificationCondition};

use std::collections::HashMap;

use crate::lang::{ArithOp, CmpOp, Expr, GuardedCommand, Statement};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WpError {
    #[error("wp is only defined for loop-free statements; verify loops with their invariant")]
    ContainsLoop,
}

fn collect_divisors(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => {}
        Expr::Neg(a) | Expr::Not(a) => collect_divisors(a, out),
        Expr::Arith(op, l, r) => {
            collect_divisors(l, out);
            collect_divisors(r, out);
            if matches!(op, ArithOp::Div | ArithOp::Mod | ArithOp::Quot) {
                let d = Expr::cmp(CmpOp::Ne, (**r).clone(), Expr::int(0));
                if !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        Expr::Cmp(_, l, r) | Expr::Logic(_, l, r) => {
            collect_divisors(l, out);
            collect_divisors(r, out);
        }
        Expr::Call(_, args) => args.iter().for_each(|a| collect_divisors(a, out)),
    }
}

/// The condition under which evaluating `exprs` does not fault.
pub fn defined<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> Expr {
    let mut divisors = Vec::new();
    for e in exprs {
        collect_divisors(e, &mut divisors);
    }
    Expr::conj(divisors)
}

fn assign(targets: &[String], values: &[Expr], post: &Expr) -> Expr {
    let map: HashMap<&str, &Expr> = targets.iter().map(String::as_str).zip(values).collect();
    let substituted = post.substitute(&|v| map.get(v).map(|e| (*e).clone()));
    Expr::and(defined(values), substituted)
}

fn wp_if(arms: &[GuardedCommand], post: &Expr) -> Result<Expr, WpError> {
    let guards: Vec<&Expr> = arms.iter().map(|gc| &gc.guard).collect();
    let mut parts = vec![defined(guards.iter().copied()), Expr::disj(guards.iter().map(|g| (*g).clone()))];
    for gc in arms {
        parts.push(Expr::implies(gc.guard.clone(), wp(&gc.body, post)?));
    }
    Ok(Expr::conj(parts))
}

/// Weakest precondition of a loop-free statement.
pub fn wp(s: &Statement, post: &Expr) -> Result<Expr, WpError> {
    Ok(match s {
        Statement::Skip => post.clone(),
        Statement::Abort => Expr::Bool(false),
        Statement::Assign(x, e) => assign(std::slice::from_ref(x), std::slice::from_ref(e), post),
        Statement::MultiAssign(xs, es) => assign(xs, es, post),
        Statement::Seq(items) => {
            let mut acc = post.clone();
            for item in items.iter().rev() {
                acc = wp(item, &acc)?;
            }
            acc
        }
        Statement::If(arms) => wp_if(arms, post)?,
        Statement::Do(_) => return Err(WpError::ContainsLoop),
    })
}
