use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{Poly, RatFn};
use super::proof::{ProofChain, Step};
use super::Relation;
use crate::lang::{ArithOp, Builtin, Expr};
use crate::wp::CheckDomain;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Num(BigRational),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(q) => write!(f, "{q}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepStatus {
    ValidByNormalization,
    ValidOnDomain,
    Invalid {
        assignment: BTreeMap<String, i64>,
        lhs: Value,
        rhs: Value,
    },
    /// The hint is not mechanized and no domain was given, or the step is
    /// outside what normalization decides.
    Unchecked(String),
    /// The step cannot be checked as written, e.g. the hint names a missing
    /// definition.
    Rejected(String),
}

impl StepStatus {
    pub fn is_valid(&self) -> bool {
        matches!(self, StepStatus::ValidByNormalization | StepStatus::ValidOnDomain)
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepStatus::ValidByNormalization => f.write_str("valid-by-normalization"),
            StepStatus::ValidOnDomain => f.write_str("valid-on-domain"),
            StepStatus::Invalid { assignment, lhs, rhs } => {
                let at: Vec<String> = assignment.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "invalid at {{{}}}: lhs {lhs}, rhs {rhs}", at.join(", "))
            }
            StepStatus::Unchecked(why) => write!(f, "unchecked ({why})"),
            StepStatus::Rejected(why) => write!(f, "rejected ({why})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepVerdict {
    pub index: usize,
    pub status: StepStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVerdict {
    pub steps: Vec<StepVerdict>,
    /// Composition of the step relations, `None` if they do not compose.
    pub relation: Option<Relation>,
    pub valid: bool,
}

enum Hint<'h> {
    Algebra,
    Definition(&'h str),
    Other,
}

fn classify(hint: &str) -> Hint<'_> {
    let h = hint.trim();
    if h.to_ascii_lowercase().starts_with("algebra") {
        Hint::Algebra
    } else if let Some(rest) = h.strip_prefix("definition of ") {
        Hint::Definition(rest.trim())
    } else {
        Hint::Other
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn as_int(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Exact evaluation over the rationals; `None` where the expression is
/// undefined (a zero divisor, or `div`/`mod`/`gcd` of a non-integer).
fn eval(e: &Expr, env: &BTreeMap<String, BigRational>) -> Option<Value> {
    let num = |e: &Expr| match eval(e, env)? {
        Value::Num(q) => Some(q),
        Value::Bool(_) => None,
    };
    let boolean = |e: &Expr| match eval(e, env)? {
        Value::Bool(b) => Some(b),
        Value::Num(_) => None,
    };
    Some(match e {
        Expr::Int(v) => Value::Num(BigRational::from_integer(v.clone())),
        Expr::Bool(b) => Value::Bool(*b),
        Expr::Var(v) => Value::Num(env.get(v)?.clone()),
        Expr::Neg(a) => Value::Num(-num(a)?),
        Expr::Not(a) => Value::Bool(!boolean(a)?),
        Expr::Arith(op, l, r) => {
            let (a, b) = (num(l)?, num(r)?);
            Value::Num(match op {
                ArithOp::Add => a + b,
                ArithOp::Sub => a - b,
                ArithOp::Mul => a * b,
                ArithOp::Quot if b.is_zero() => return None,
                ArithOp::Quot => a / b,
                ArithOp::Div | ArithOp::Mod => {
                    let (a, b) = (as_int(&a)?, as_int(&b)?);
                    if b.is_zero() {
                        return None;
                    }
                    let (q, m) = crate::exec::div_mod_euclid(&a, &b);
                    BigRational::from_integer(if *op == ArithOp::Div { q } else { m })
                }
            })
        }
        Expr::Cmp(op, l, r) => Value::Bool(op.holds(&num(l)?, &num(r)?)),
        Expr::Logic(op, l, r) => Value::Bool(op.apply(boolean(l)?, boolean(r)?)),
        Expr::Call(Builtin::Gcd, args) => {
            let (a, b) = (as_int(&num(&args[0])?)?, as_int(&num(&args[1])?)?);
            Value::Num(BigRational::from_integer(a.gcd(&b)))
        }
        Expr::Call(Builtin::Abs, args) => Value::Num(num(&args[0])?.abs()),
    })
}

fn relates(rel: Relation, lhs: &Value, rhs: &Value) -> bool {
    match (lhs, rhs) {
        (Value::Num(a), Value::Num(b)) => match rel {
            Relation::Eq => a == b,
            Relation::Lt => a < b,
            Relation::Le => a <= b,
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Implies | Relation::Iff => false,
        },
        (Value::Bool(a), Value::Bool(b)) => match rel {
            Relation::Eq | Relation::Iff => a == b,
            Relation::Implies => !a || *b,
            _ => false,
        },
        _ => false,
    }
}

fn substitute(e: &Expr, name: &str, def: &Expr) -> Expr {
    e.substitute(&|v| (v == name).then(|| def.clone()))
}

/// Replace variables the domain does not cover by their definitions.
fn expand_for_domain(e: &Expr, defs: &[(String, Expr)], dom: &CheckDomain) -> Expr {
    let mut out = e.clone();
    for _ in 0..=defs.len() {
        let next = out.substitute(&|v| {
            if dom.range(v).is_some() {
                return None;
            }
            defs.iter().find(|(n, _)| n == v).map(|(_, d)| d.clone())
        });
        if next == out {
            break;
        }
        out = next;
    }
    out
}

fn check_on_domain(lhs: &Expr, rel: Relation, rhs: &Expr, defs: &[(String, Expr)], dom: &CheckDomain) -> StepStatus {
    let (lhs, rhs) = (expand_for_domain(lhs, defs, dom), expand_for_domain(rhs, defs, dom));
    let mut vars = lhs.free_vars();
    vars.extend(rhs.free_vars());
    let vars: Vec<String> = vars.into_iter().collect();
    let mut failure = None;
    let walked = dom.enumerate(&vars, |vals| {
        let env: BTreeMap<String, BigRational> = vars.iter().cloned().zip(vals.iter().map(|v| rat(*v))).collect();
        // Points where either side is undefined are outside the claim.
        if let (Some(a), Some(b)) = (eval(&lhs, &env), eval(&rhs, &env)) {
            if !relates(rel, &a, &b) {
                let assignment = vars.iter().cloned().zip(vals.iter().copied()).collect();
                failure = Some(StepStatus::Invalid { assignment, lhs: a, rhs: b });
                return false;
            }
        }
        true
    });
    match (walked, failure) {
        (Err(e), _) => StepStatus::Rejected(e.to_string()),
        (Ok(_), Some(f)) => f,
        (Ok(_), None) => StepStatus::ValidOnDomain,
    }
}

/// Least point of the grid `0..=deg(v)` per variable where `witness` is
/// nonzero; one exists for every nonzero polynomial.
fn least_nonzero_point(witness: &Poly) -> BTreeMap<String, i64> {
    let vars: Vec<String> = witness.vars().into_iter().collect();
    let mut dom = CheckDomain::new().with_cap(u64::MAX);
    for v in &vars {
        dom.insert(v.clone(), 0, witness.degree_in(v) as i64).expect("nonempty range");
    }
    let mut found = None;
    dom.enumerate(&vars, |vals| {
        let env = vars.iter().cloned().zip(vals.iter().map(|v| rat(*v))).collect();
        if witness.eval(&env).is_some_and(|q| !q.is_zero()) {
            found = Some(vars.iter().cloned().zip(vals.iter().copied()).collect());
            return false;
        }
        true
    })
    .expect("grid is within the cap");
    found.expect("a nonzero polynomial has a non-root on its degree grid")
}

/// Product of every divisor in `e` (numerators and denominators), nonzero
/// exactly where evaluating `e` divides by nothing that vanishes.
fn divisor_product(e: &Expr) -> Poly {
    let mut acc = Poly::int(1);
    let mut stack = vec![e];
    while let Some(e) = stack.pop() {
        match e {
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => {}
            Expr::Neg(a) | Expr::Not(a) => stack.push(a),
            Expr::Arith(op, l, r) => {
                if *op == ArithOp::Quot {
                    if let Ok(d) = RatFn::from_expr(r) {
                        acc = &(&acc * &d.num) * &d.den;
                    }
                }
                stack.extend([&**l, &**r]);
            }
            Expr::Cmp(_, l, r) | Expr::Logic(_, l, r) => stack.extend([&**l, &**r]),
            Expr::Call(_, args) => stack.extend(args),
        }
    }
    acc
}

fn counterexample(lhs: &Expr, rhs: &Expr, witness: &Poly) -> StepStatus {
    let witness = &(witness * &divisor_product(lhs)) * &divisor_product(rhs);
    let mut assignment = least_nonzero_point(&witness);
    for v in lhs.free_vars().into_iter().chain(rhs.free_vars()) {
        assignment.entry(v).or_insert(0);
    }
    let env = assignment.iter().map(|(k, v)| (k.clone(), rat(*v))).collect();
    let value = |e: &Expr| eval(e, &env).expect("denominators are nonzero at the witness point");
    StepStatus::Invalid { lhs: value(lhs), rhs: value(rhs), assignment }
}

/// Decide `lhs rel rhs` by normalization, if it is in scope.
fn normalize(lhs: &Expr, rel: Relation, rhs: &Expr) -> Result<StepStatus, String> {
    if lhs == rhs && matches!(rel, Relation::Eq | Relation::Le | Relation::Ge | Relation::Implies | Relation::Iff) {
        return Ok(StepStatus::ValidByNormalization);
    }
    let (a, b) = match (RatFn::from_expr(lhs), RatFn::from_expr(rhs)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
    };
    let diff = b.difference(&a);
    let dens = &a.den * &b.den;
    if rel == Relation::Eq {
        if diff.is_zero() {
            return Ok(StepStatus::ValidByNormalization);
        }
        return Ok(counterexample(lhs, rhs, &(&diff * &dens)));
    }
    // rhs - lhs = diff / dens; decided only when that is a constant.
    let (Some(d), Some(q)) = (diff.as_constant(), dens.as_constant()) else {
        return Err("the difference of the two sides is not constant".into());
    };
    let (zero, gap) = (Value::Num(BigRational::zero()), Value::Num(d / q));
    if relates(rel, &zero, &gap) {
        Ok(StepStatus::ValidByNormalization)
    } else {
        Ok(counterexample(lhs, rhs, &dens))
    }
}

/// Check one step. `definitions` are the chain's `let` bindings; `dom`
/// enables checking of steps whose hint is not mechanized.
pub fn check_step(step: &Step, definitions: &[(String, Expr)], dom: Option<&CheckDomain>) -> StepStatus {
    let (lhs, rhs) = match classify(&step.hint) {
        Hint::Algebra => (step.lhs.clone(), step.rhs.clone()),
        Hint::Definition(name) => match definitions.iter().find(|(n, _)| n == name) {
            Some((_, def)) => (substitute(&step.lhs, name, def), substitute(&step.rhs, name, def)),
            None => return StepStatus::Rejected(format!("no definition of `{name}`")),
        },
        Hint::Other => {
            return match dom {
                Some(dom) => check_on_domain(&step.lhs, step.relation, &step.rhs, definitions, dom),
                None => StepStatus::Unchecked(format!("hint `{}` is not mechanized", step.hint)),
            }
        }
    };
    match normalize(&lhs, step.relation, &rhs) {
        Ok(status) => status,
        Err(why) => match dom {
            Some(dom) => check_on_domain(&lhs, step.relation, &rhs, definitions, dom),
            None => StepStatus::Unchecked(why),
        },
    }
}

/// Check every step and the composed relation against the claim.
pub fn check_chain(chain: &ProofChain, dom: Option<&CheckDomain>) -> ChainVerdict {
    let steps: Vec<StepVerdict> = chain
        .steps
        .iter()
        .enumerate()
        .map(|(index, s)| StepVerdict { index, status: check_step(s, &chain.definitions, dom) })
        .collect();
    let relation = chain.composed();
    let claim_ok = match (relation, chain.claim) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(r), Some(c)) => r == c || is_weakening(r, c),
    };
    let valid = claim_ok && steps.iter().all(|s| s.status.is_valid());
    ChainVerdict { steps, relation, valid }
}

/// A chain establishing `proved` also establishes the weaker `claimed`.
fn is_weakening(proved: Relation, claimed: Relation) -> bool {
    use Relation::*;
    matches!((proved, claimed), (Eq, Le | Ge) | (Lt, Le) | (Gt, Ge) | (Iff, Implies))
}
