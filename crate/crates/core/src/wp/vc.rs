use std::collections::BTreeSet;
use std::fmt;

use super::check::{int_range, CheckDomain, CheckError};
use super::{defined, wp, WpError};
use crate::lang::{CmpOp, Expr, Loop, Program, Statement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VcKind {
    PreEstablishesInvariant,
    /// Preservation by the guarded command with this (0-based) index.
    InvariantPreserved(usize),
    PostconditionOnExit,
    BoundPositive,
    BoundDecreases,
    /// Some guard holds at every `if` reached: `None` for the
    /// initialization, `Some(i)` for the body of guard `i`.
    IfGuardCoverage(Option<usize>),
    /// `pre ==> wp(body, post)` for a loop-free program.
    Correctness,
}

impl fmt::Display for VcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VcKind::PreEstablishesInvariant => f.write_str("pre-establishes-invariant"),
            VcKind::InvariantPreserved(i) => write!(f, "invariant-preserved[{}]", i + 1),
            VcKind::PostconditionOnExit => f.write_str("postcondition-on-exit"),
            VcKind::BoundPositive => f.write_str("bound-positive"),
            VcKind::BoundDecreases => f.write_str("bound-decreases"),
            VcKind::IfGuardCoverage(None) => f.write_str("if-guard-coverage[init]"),
            VcKind::IfGuardCoverage(Some(i)) => write!(f, "if-guard-coverage[{}]", i + 1),
            VcKind::Correctness => f.write_str("pre-implies-wp"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationCondition {
    pub kind: VcKind,
    pub formula: Expr,
    /// Fresh logical variable standing for the bound's initial value, with
    /// the bound expression it is compared to.
    pub fresh: Option<(String, Expr)>,
}

impl VerificationCondition {
    pub fn label(&self) -> String {
        self.kind.to_string()
    }
}

impl fmt::Display for VerificationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VcError {
    #[error("program has no {{ pre: .. }} / {{ post: .. }} annotation")]
    MissingSpecification,
    #[error("loop has no {{ inv: .., bound: .. }} annotation")]
    MissingLoopAnnotation,
    #[error("nested loops are not supported")]
    NestedLoop,
    #[error("expected loop-free initialization followed by a single loop")]
    Shape,
}

fn fresh_name(taken: &BTreeSet<String>) -> String {
    if !taken.contains("T") {
        return "T".into();
    }
    (1..).map(|i| format!("T{i}")).find(|n| !taken.contains(n)).unwrap()
}

fn split_loop(body: &Statement) -> Result<(Statement, &Loop), VcError> {
    let (init, last) = match body {
        Statement::Seq(items) => (Statement::seq(items[..items.len() - 1].iter().cloned()), items.last().unwrap()),
        other => (Statement::Skip, other),
    };
    let Statement::Do(lp) = last else { return Err(VcError::Shape) };
    if !init.is_loop_free() {
        return Err(VcError::Shape);
    }
    if lp.arms.iter().any(|gc| !gc.body.is_loop_free()) {
        return Err(VcError::NestedLoop);
    }
    Ok((init, lp))
}

fn wp_loop_free(s: &Statement, post: &Expr) -> Expr {
    wp(s, post).unwrap_or_else(|WpError::ContainsLoop| unreachable!("checked loop-free"))
}

/// Proof obligations for `init; do .. od` with invariant and bound.
///
/// Emits one `invariant-preserved` per guard and single `bound-positive` /
/// `bound-decreases` conditions that quantify over all guards, followed by
/// `if-guard-coverage` conditions when the initialization or a loop body
/// contains an `if`.
pub fn verify_loop(p: &Program) -> Result<Vec<VerificationCondition>, VcError> {
    let spec = p.annotation.as_ref().ok_or(VcError::MissingSpecification)?;
    let (init, lp) = split_loop(&p.body)?;
    let ann = lp.annotation.as_ref().ok_or(VcError::MissingLoopAnnotation)?;
    let (inv, bound) = (&ann.invariant, &ann.bound);
    let guards: Vec<Expr> = lp.arms.iter().map(|gc| gc.guard.clone()).collect();
    let any_guard = Expr::disj(guards.iter().cloned());
    // The invariant must also make the guards evaluable.
    let inv_ok = Expr::and(inv.clone(), defined(&guards));

    let mut vcs = vec![VerificationCondition {
        kind: VcKind::PreEstablishesInvariant,
        formula: Expr::implies(spec.pre.clone(), wp_loop_free(&init, &inv_ok)),
        fresh: None,
    }];
    for (i, gc) in lp.arms.iter().enumerate() {
        vcs.push(VerificationCondition {
            kind: VcKind::InvariantPreserved(i),
            formula: Expr::implies(Expr::and(inv.clone(), gc.guard.clone()), wp_loop_free(&gc.body, &inv_ok)),
            fresh: None,
        });
    }
    vcs.push(VerificationCondition {
        kind: VcKind::PostconditionOnExit,
        formula: Expr::implies(Expr::and(inv.clone(), Expr::not(any_guard.clone())), spec.post.clone()),
        fresh: None,
    });
    vcs.push(VerificationCondition {
        kind: VcKind::BoundPositive,
        formula: Expr::implies(Expr::and(inv.clone(), any_guard), Expr::cmp(CmpOp::Gt, bound.clone(), Expr::int(0))),
        fresh: None,
    });

    let mut taken: BTreeSet<String> = p.vars.iter().cloned().collect();
    for e in [&spec.pre, &spec.post, inv, bound] {
        taken.extend(e.free_vars());
    }
    let t = fresh_name(&taken);
    let decreased = Expr::cmp(CmpOp::Lt, bound.clone(), Expr::var(t.clone()));
    let steps = lp.arms.iter().map(|gc| Expr::implies(gc.guard.clone(), wp_loop_free(&gc.body, &decreased)));
    vcs.push(VerificationCondition {
        kind: VcKind::BoundDecreases,
        formula: Expr::implies(
            Expr::and(inv.clone(), Expr::cmp(CmpOp::Eq, bound.clone(), Expr::var(t.clone()))),
            Expr::conj(steps),
        ),
        fresh: Some((t, bound.clone())),
    });

    if init.contains_if() {
        vcs.push(VerificationCondition {
            kind: VcKind::IfGuardCoverage(None),
            formula: Expr::implies(spec.pre.clone(), wp_loop_free(&init, &Expr::Bool(true))),
            fresh: None,
        });
    }
    for (i, gc) in lp.arms.iter().enumerate().filter(|(_, gc)| gc.body.contains_if()) {
        vcs.push(VerificationCondition {
            kind: VcKind::IfGuardCoverage(Some(i)),
            formula: Expr::implies(Expr::and(inv.clone(), gc.guard.clone()), wp_loop_free(&gc.body, &Expr::Bool(true))),
            fresh: None,
        });
    }
    Ok(vcs)
}

/// Proof obligations for an annotated program: a single `pre ==> wp(body,
/// post)` when the body is loop-free, otherwise those of [`verify_loop`].
pub fn verify_program(p: &Program) -> Result<Vec<VerificationCondition>, VcError> {
    if !p.body.is_loop_free() {
        return verify_loop(p);
    }
    let spec = p.annotation.as_ref().ok_or(VcError::MissingSpecification)?;
    Ok(vec![VerificationCondition {
        kind: VcKind::Correctness,
        formula: Expr::implies(spec.pre.clone(), wp_loop_free(&p.body, &spec.post)),
        fresh: None,
    }])
}

/// Extend `dom` with ranges for the variables the user does not name: a
/// logical `X` takes the range of `x`, and a bound's fresh variable takes the
/// range of the bound over `dom`.
pub fn complete_domain(vcs: &[VerificationCondition], dom: &CheckDomain) -> Result<CheckDomain, CheckError> {
    let mut out = dom.clone();
    for v in vcs.iter().flat_map(|vc| vc.formula.free_vars()) {
        if out.range(&v).is_none() && crate::lang::is_logical_name(&v) {
            if let Some((lo, hi)) = dom.range(&v.to_lowercase()) {
                out.insert(v, lo, hi)?;
            }
        }
    }
    for (t, bound) in vcs.iter().filter_map(|vc| vc.fresh.as_ref()) {
        if dom.range(t).is_none() {
            let (lo, hi) = int_range(bound, &out)?;
            out.insert(t.clone(), lo, hi)?;
        }
    }
    Ok(out)
}
