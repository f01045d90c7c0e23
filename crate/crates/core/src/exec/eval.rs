use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lang::{ArithOp, Builtin, Expr};

/// Program expressions fault on division by zero. Predicates (wp results,
/// verification conditions) are total: `e div 0 = 0` and `e mod 0 = e`,
/// which keeps `e = (e div d) * d + e mod d` valid for every `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Total,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("ill-typed expression")]
    IllTyped,
}

/// Variable lookup used by the evaluator.
pub trait Env {
    fn get(&self, name: &str) -> Option<&BigInt>;
}

impl Env for std::collections::BTreeMap<String, BigInt> {
    fn get(&self, name: &str) -> Option<&BigInt> {
        std::collections::BTreeMap::get(self, name)
    }
}

impl Env for std::collections::HashMap<String, BigInt> {
    fn get(&self, name: &str) -> Option<&BigInt> {
        std::collections::HashMap::get(self, name)
    }
}

/// Euclidean quotient and remainder: `a = q*d + r` with `0 <= r < |d|`.
pub fn div_mod_euclid(a: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let r = a.mod_floor(&d.abs());
    let q = (a - &r) / d;
    (q, r)
}

pub fn eval_int(e: &Expr, env: &dyn Env, mode: Mode) -> Result<BigInt, EvalError> {
    match e {
        Expr::Int(v) => Ok(v.clone()),
        Expr::Var(name) => env.get(name).cloned().ok_or_else(|| EvalError::Unbound(name.clone())),
        Expr::Neg(inner) => Ok(-eval_int(inner, env, mode)?),
        Expr::Arith(op, l, r) => {
            // Both operands are evaluated; there is no short-circuiting, so
            // definedness is the conjunction over all divisors.
            let a = eval_int(l, env, mode)?;
            let b = eval_int(r, env, mode)?;
            match op {
                ArithOp::Add => Ok(a + b),
                ArithOp::Sub => Ok(a - b),
                ArithOp::Mul => Ok(a * b),
                ArithOp::Div | ArithOp::Mod if b.is_zero() => match (mode, op) {
                    (Mode::Strict, _) => Err(EvalError::DivisionByZero),
                    (Mode::Total, ArithOp::Div) => Ok(BigInt::zero()),
                    (Mode::Total, _) => Ok(a),
                },
                ArithOp::Div => Ok(div_mod_euclid(&a, &b).0),
                ArithOp::Mod => Ok(div_mod_euclid(&a, &b).1),
                ArithOp::Quot => Err(EvalError::IllTyped),
            }
        }
        Expr::Call(Builtin::Gcd, args) => {
            let a = eval_int(&args[0], env, mode)?;
            let b = eval_int(&args[1], env, mode)?;
            Ok(a.gcd(&b))
        }
        Expr::Call(Builtin::Abs, args) => Ok(eval_int(&args[0], env, mode)?.abs()),
        Expr::Bool(_) | Expr::Not(_) | Expr::Cmp(..) | Expr::Logic(..) => Err(EvalError::IllTyped),
    }
}

pub fn eval_bool(e: &Expr, env: &dyn Env, mode: Mode) -> Result<bool, EvalError> {
    match e {
        Expr::Bool(b) => Ok(*b),
        Expr::Not(inner) => Ok(!eval_bool(inner, env, mode)?),
        Expr::Cmp(op, l, r) => {
            let a = eval_int(l, env, mode)?;
            let b = eval_int(r, env, mode)?;
            Ok(op.holds(&a, &b))
        }
        Expr::Logic(op, l, r) => {
            let a = eval_bool(l, env, mode)?;
            let b = eval_bool(r, env, mode)?;
            Ok(op.apply(a, b))
        }
        _ => Err(EvalError::IllTyped),
    }
}
