use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::vc::VerificationCondition;
use crate::exec::{eval_bool, eval_int, Mode};
use crate::lang::{ArithOp, Builtin, CmpOp, Expr, LogicOp};

/// Default limit on the number of assignments a single check may enumerate.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Inclusive integer interval per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDomain {
    ranges: BTreeMap<String, (i64, i64)>,
    cap: u64,
}

impl Default for CheckDomain {
    fn default() -> Self {
        CheckDomain { ranges: BTreeMap::new(), cap: DEFAULT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("variable `{0}` has no range in the check domain")]
    MissingVariable(String),
    #[error("empty range {lo}..{hi} for `{name}`")]
    EmptyRange { name: String, lo: i64, hi: i64 },
    #[error("check domain has {size} assignments, over the cap of {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("bad domain specification `{0}`; expected name=lo..hi")]
    Syntax(String),
}

impl CheckDomain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn insert(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<(), CheckError> {
        let name = name.into();
        if lo > hi {
            return Err(CheckError::EmptyRange { name, lo, hi });
        }
        self.ranges.insert(name, (lo, hi));
        Ok(())
    }

    pub fn with(mut self, name: &str, lo: i64, hi: i64) -> Result<Self, CheckError> {
        self.insert(name, lo, hi)?;
        Ok(self)
    }

    /// Parse `x=1..20,y=-3..3`.
    pub fn parse(text: &str) -> Result<Self, CheckError> {
        let mut dom = CheckDomain::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || CheckError::Syntax(part.to_string());
            let (name, range) = part.split_once('=').ok_or_else(bad)?;
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            dom.insert(name.trim(), lo, hi)?;
        }
        Ok(dom)
    }

    pub fn range(&self, name: &str) -> Option<(i64, i64)> {
        self.ranges.get(name).copied()
    }

    pub fn ranges(&self) -> impl Iterator<Item = (&str, (i64, i64))> {
        self.ranges.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Enumerate every assignment to `vars` (in the given order, last variable
    /// fastest) until `visit` returns `false`. Returns the number visited.
    pub(crate) fn enumerate(&self, vars: &[String], mut visit: impl FnMut(&[i64]) -> bool) -> Result<u64, CheckError> {
        let mut bounds = Vec::with_capacity(vars.len());
        let mut size: u128 = 1;
        for v in vars {
            let (lo, hi) = self.range(v).ok_or_else(|| CheckError::MissingVariable(v.clone()))?;
            size = size.saturating_mul((hi as i128 - lo as i128 + 1) as u128);
            bounds.push((lo, hi));
        }
        if size > self.cap as u128 {
            return Err(CheckError::CapExceeded { size, cap: self.cap });
        }
        let mut vals: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        let mut count = 0;
        loop {
            count += 1;
            if !visit(&vals) {
                return Ok(count);
            }
            let mut i = vals.len();
            loop {
                if i == 0 {
                    return Ok(count);
                }
                i -= 1;
                if vals[i] < bounds[i].1 {
                    vals[i] += 1;
                    break;
                }
                vals[i] = bounds[i].0;
            }
        }
    }
}

impl fmt::Display for CheckDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ranges.iter().map(|(k, (lo, hi))| format!("{k}={lo}..{hi}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// The lexicographically least falsifying assignment, variables in name
    /// order.
    Counterexample(BTreeMap<String, i64>),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Counterexample(cex) => {
                let parts: Vec<String> = cex.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

// Slot-indexed form of a predicate evaluated in machine integers; any
// overflow yields `None` and the caller falls back to exact arithmetic.
enum INode {
    Const(i64),
    Slot(usize),
    Neg(Box<INode>),
    Arith(ArithOp, Box<INode>, Box<INode>),
    Gcd(Box<INode>, Box<INode>),
    Abs(Box<INode>),
}

enum BNode {
    Const(bool),
    Not(Box<BNode>),
    Cmp(CmpOp, INode, INode),
    Logic(LogicOp, Box<BNode>, Box<BNode>),
}

fn compile_int(e: &Expr, slots: &[String]) -> Option<INode> {
    Some(match e {
        Expr::Int(v) => INode::Const(v.to_i64()?),
        Expr::Var(name) => INode::Slot(slots.iter().position(|s| s == name)?),
        Expr::Neg(a) => INode::Neg(Box::new(compile_int(a, slots)?)),
        Expr::Arith(ArithOp::Quot, ..) => return None,
        Expr::Arith(op, l, r) => INode::Arith(*op, Box::new(compile_int(l, slots)?), Box::new(compile_int(r, slots)?)),
        Expr::Call(Builtin::Gcd, args) => {
            INode::Gcd(Box::new(compile_int(&args[0], slots)?), Box::new(compile_int(&args[1], slots)?))
        }
        Expr::Call(Builtin::Abs, args) => INode::Abs(Box::new(compile_int(&args[0], slots)?)),
        _ => return None,
    })
}

fn compile_bool(e: &Expr, slots: &[String]) -> Option<BNode> {
    Some(match e {
        Expr::Bool(b) => BNode::Const(*b),
        Expr::Not(a) => BNode::Not(Box::new(compile_bool(a, slots)?)),
        Expr::Cmp(op, l, r) => BNode::Cmp(*op, compile_int(l, slots)?, compile_int(r, slots)?),
        Expr::Logic(op, l, r) => {
            BNode::Logic(*op, Box::new(compile_bool(l, slots)?), Box::new(compile_bool(r, slots)?))
        }
        _ => return None,
    })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl INode {
    fn eval(&self, v: &[i64]) -> Option<i64> {
        match self {
            INode::Const(c) => Some(*c),
            INode::Slot(i) => Some(v[*i]),
            INode::Neg(a) => a.eval(v)?.checked_neg(),
            INode::Arith(op, l, r) => {
                let (a, b) = (l.eval(v)?, r.eval(v)?);
                match op {
                    ArithOp::Add => a.checked_add(b),
                    ArithOp::Sub => a.checked_sub(b),
                    ArithOp::Mul => a.checked_mul(b),
                    ArithOp::Div if b == 0 => Some(0),
                    ArithOp::Mod if b == 0 => Some(a),
                    ArithOp::Div => a.checked_div_euclid(b),
                    ArithOp::Mod => a.checked_rem_euclid(b),
                    ArithOp::Quot => None,
                }
            }
            INode::Gcd(l, r) => {
                let g = gcd_u64(l.eval(v)?.unsigned_abs(), r.eval(v)?.unsigned_abs());
                i64::try_from(g).ok()
            }
            INode::Abs(a) => a.eval(v)?.checked_abs(),
        }
    }
}

impl BNode {
    fn eval(&self, v: &[i64]) -> Option<bool> {
        match self {
            BNode::Const(b) => Some(*b),
            BNode::Not(a) => Some(!a.eval(v)?),
            BNode::Cmp(op, l, r) => Some(op.holds(&l.eval(v)?, &r.eval(v)?)),
            BNode::Logic(op, l, r) => {
                let a = l.eval(v)?;
                match (op, a) {
                    (LogicOp::And, false) => Some(false),
                    (LogicOp::Or, true) | (LogicOp::Implies, false) => Some(true),
                    _ => Some(op.apply(a, r.eval(v)?)),
                }
            }
        }
    }
}

/// Evaluator for one formula over a fixed variable order.
pub(crate) struct Compiled<'e> {
    expr: &'e Expr,
    slots: Vec<String>,
    fast: Option<BNode>,
}

impl<'e> Compiled<'e> {
    pub(crate) fn new(expr: &'e Expr, slots: Vec<String>) -> Self {
        let fast = compile_bool(expr, &slots);
        Compiled { expr, slots, fast }
    }

    pub(crate) fn holds(&self, vals: &[i64]) -> bool {
        if let Some(b) = self.fast.as_ref().and_then(|n| n.eval(vals)) {
            return b;
        }
        eval_bool(self.expr, &self.env(vals), Mode::Total).expect("formula checked against domain")
    }

    fn env(&self, vals: &[i64]) -> BTreeMap<String, BigInt> {
        self.slots.iter().cloned().zip(vals.iter().map(|v| BigInt::from(*v))).collect()
    }
}

/// Range of an integer expression over every assignment in the domain.
pub(crate) fn int_range(e: &Expr, dom: &CheckDomain) -> Result<(i64, i64), CheckError> {
    let vars: Vec<String> = e.free_vars().into_iter().collect();
    let fast = compile_int(e, &vars);
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    dom.enumerate(&vars, |vals| {
        let v = fast.as_ref().and_then(|n| n.eval(vals)).unwrap_or_else(|| {
            let env: BTreeMap<String, BigInt> =
                vars.iter().cloned().zip(vals.iter().map(|v| BigInt::from(*v))).collect();
            let big = eval_int(e, &env, Mode::Total).expect("expression checked against domain");
            big.to_i64().unwrap_or(if big.sign() == num_bigint::Sign::Minus { i64::MIN } else { i64::MAX })
        });
        lo = lo.min(v);
        hi = hi.max(v);
        true
    })?;
    Ok((lo, hi))
}

/// Decide a closed boolean formula over a bounded domain.
pub fn check_formula(formula: &Expr, dom: &CheckDomain) -> Result<Verdict, CheckError> {
    let vars: Vec<String> = formula.free_vars().into_iter().collect();
    let compiled = Compiled::new(formula, vars.clone());
    let mut failure = None;
    dom.enumerate(&vars, |vals| {
        if compiled.holds(vals) {
            true
        } else {
            failure = Some(vals.to_vec());
            false
        }
    })?;
    Ok(match failure {
        None => Verdict::Valid,
        Some(vals) => Verdict::Counterexample(vars.into_iter().zip(vals).collect()),
    })
}

/// Decide a verification condition over a bounded domain.
pub fn check_vc(vc: &VerificationCondition, dom: &CheckDomain) -> Result<Verdict, CheckError> {
    check_formula(&vc.formula, dom)
}
