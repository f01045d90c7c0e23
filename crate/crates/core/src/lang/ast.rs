use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

/// Static type of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Int,
    Bool,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Int => f.write_str("int"),
            Type::Bool => f.write_str("bool"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    /// Euclidean integer division.
    Div,
    /// Euclidean remainder, always in `[0, |divisor|)`.
    Mod,
    /// Exact rational division. Only accepted in proof expressions.
    Quot,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "div",
            ArithOp::Mod => "mod",
            ArithOp::Quot => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ne => lhs != rhs,
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicOp {
    And,
    Or,
    Implies,
    Iff,
}

impl LogicOp {
    pub fn symbol(self) -> &'static str {
        match self {
            LogicOp::And => "and",
            LogicOp::Or => "or",
            LogicOp::Implies => "==>",
            LogicOp::Iff => "<=>",
        }
    }

    pub fn apply(self, lhs: bool, rhs: bool) -> bool {
        match self {
            LogicOp::And => lhs && rhs,
            LogicOp::Or => lhs || rhs,
            LogicOp::Implies => !lhs || rhs,
            LogicOp::Iff => lhs == rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Gcd,
    Abs,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Gcd => "gcd",
            Builtin::Abs => "abs",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Gcd => 2,
            Builtin::Abs => 1,
        }
    }
}

/// Integer and boolean expressions shared by programs, predicates and proofs.
///
/// Integer literals produced by the parser are always nonnegative; a leading
/// minus sign is a [`Expr::Neg`] node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Int(BigInt),
    Bool(bool),
    Var(String),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Logic(LogicOp, Box<Expr>, Box<Expr>),
    Call(Builtin, Vec<Expr>),
}

impl Expr {
    pub fn int(v: impl Into<BigInt>) -> Expr {
        Expr::Int(v.into())
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn arith(op: ArithOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Arith(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn cmp(op: CmpOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Cmp(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn logic(op: LogicOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Logic(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn implies(lhs: Expr, rhs: Expr) -> Expr {
        Expr::logic(LogicOp::Implies, lhs, rhs)
    }

    /// Conjunction that drops literal `true` operands.
    pub fn and(lhs: Expr, rhs: Expr) -> Expr {
        match (lhs, rhs) {
            (Expr::Bool(true), e) | (e, Expr::Bool(true)) => e,
            (l, r) => Expr::logic(LogicOp::And, l, r),
        }
    }

    /// Left-nested conjunction of all operands; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().fold(Expr::Bool(true), Expr::and)
    }

    /// Left-nested disjunction of all operands; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Expr::Bool(false),
            Some(first) => iter.fold(first, |acc, e| Expr::logic(LogicOp::Or, acc, e)),
        }
    }

    /// Free variables, in name order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Int(_) | Expr::Bool(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Neg(e) | Expr::Not(e) => e.collect_vars(out),
            Expr::Arith(_, l, r) | Expr::Cmp(_, l, r) | Expr::Logic(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Replace every occurrence of a variable by an expression, simultaneously.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Int(_) | Expr::Bool(_) => self.clone(),
            Expr::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            Expr::Neg(e) => Expr::neg(e.substitute(map)),
            Expr::Not(e) => Expr::not(e.substitute(map)),
            Expr::Arith(op, l, r) => Expr::arith(*op, l.substitute(map), r.substitute(map)),
            Expr::Cmp(op, l, r) => Expr::cmp(*op, l.substitute(map), r.substitute(map)),
            Expr::Logic(op, l, r) => Expr::logic(*op, l.substitute(map), r.substitute(map)),
            Expr::Call(b, args) => Expr::Call(*b, args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    pub fn contains_division(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Not(e) => e.contains_division(),
            Expr::Arith(op, l, r) => {
                matches!(op, ArithOp::Div | ArithOp::Mod | ArithOp::Quot)
                    || l.contains_division()
                    || r.contains_division()
            }
            Expr::Cmp(_, l, r) | Expr::Logic(_, l, r) => l.contains_division() || r.contains_division(),
            Expr::Call(_, args) => args.iter().any(Expr::contains_division),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GuardedCommand {
    pub guard: Expr,
    pub body: Statement,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopAnnotation {
    pub invariant: Expr,
    pub bound: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Loop {
    pub annotation: Option<LoopAnnotation>,
    pub arms: Vec<GuardedCommand>,
}

/// Statements of the guarded-command language.
///
/// `Seq` holds at least two statements, none of which is itself a `Seq`;
/// use [`Statement::seq`] to build one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Skip,
    Abort,
    Assign(String, Expr),
    /// `x, y := e1, e2`, with pairwise distinct targets.
    MultiAssign(Vec<String>, Vec<Expr>),
    Seq(Vec<Statement>),
    If(Vec<GuardedCommand>),
    Do(Loop),
}

impl Statement {
    /// Flattening sequence constructor.
    pub fn seq(items: impl IntoIterator<Item = Statement>) -> Statement {
        let mut flat = Vec::new();
        for s in items {
            match s {
                Statement::Seq(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Statement::Skip,
            1 => flat.pop().unwrap(),
            _ => Statement::Seq(flat),
        }
    }

    pub fn is_loop_free(&self) -> bool {
        match self {
            Statement::Skip | Statement::Abort | Statement::Assign(..) | Statement::MultiAssign(..) => true,
            Statement::Seq(items) => items.iter().all(Statement::is_loop_free),
            Statement::If(arms) => arms.iter().all(|gc| gc.body.is_loop_free()),
            Statement::Do(_) => false,
        }
    }

    pub fn contains_if(&self) -> bool {
        match self {
            Statement::Skip | Statement::Abort | Statement::Assign(..) | Statement::MultiAssign(..) => false,
            Statement::Seq(items) => items.iter().any(Statement::contains_if),
            Statement::If(_) => true,
            Statement::Do(lp) => lp.arms.iter().any(|gc| gc.body.contains_if()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Annotation {
    pub pre: Expr,
    pub post: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub vars: Vec<String>,
    pub annotation: Option<Annotation>,
    pub body: Statement,
}

/// Logical (auxiliary) variables are spelled with a leading capital letter.
pub fn is_logical_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}
