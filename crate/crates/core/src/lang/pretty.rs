use std::fmt::{self, Write as _};

use super::ast::*;

// Binding strength, loosest first.
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const CMP: u8 = 6;
const ADD: u8 = 7;
const MUL: u8 = 8;
const ATOM: u8 = 10;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Logic(LogicOp::Iff, ..) => IFF,
        Expr::Logic(LogicOp::Implies, ..) => IMPLIES,
        Expr::Logic(LogicOp::Or, ..) => OR,
        Expr::Logic(LogicOp::And, ..) => AND,
        Expr::Not(_) => NOT,
        Expr::Cmp(..) => CMP,
        Expr::Arith(ArithOp::Add | ArithOp::Sub, ..) => ADD,
        Expr::Arith(..) => MUL,
        // Unary minus sits between multiplication and atoms; its operand is
        // always printed at atom level.
        Expr::Neg(_) => 9,
        Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) | Expr::Call(..) => ATOM,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let p = precedence(e);
    let paren = p < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Int(v) => write!(out, "{v}").unwrap(),
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Var(v) => out.push_str(v),
        Expr::Neg(inner) => {
            out.push('-');
            write_expr(out, inner, ATOM);
        }
        Expr::Not(inner) => {
            out.push_str("not ");
            write_expr(out, inner, NOT);
        }
        Expr::Arith(op, l, r) => {
            write_expr(out, l, p);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, r, p + 1);
        }
        Expr::Cmp(op, l, r) => {
            write_expr(out, l, ADD);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, r, ADD);
        }
        Expr::Logic(op, l, r) => {
            let (lmin, rmin) = if *op == LogicOp::Implies { (p + 1, p) } else { (p, p + 1) };
            write_expr(out, l, lmin);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, r, rmin);
        }
        Expr::Call(b, args) => {
            out.push_str(b.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a, 0);
            }
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self, 0);
        f.write_str(&s)
    }
}

fn statement_lines(s: &Statement) -> Vec<String> {
    match s {
        Statement::Skip => vec!["skip".into()],
        Statement::Abort => vec!["abort".into()],
        Statement::Assign(x, e) => vec![format!("{x} := {e}")],
        Statement::MultiAssign(xs, es) => {
            let rhs: Vec<String> = es.iter().map(|e| e.to_string()).collect();
            vec![format!("{} := {}", xs.join(", "), rhs.join(", "))]
        }
        Statement::Seq(items) => {
            let mut lines = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let mut sub = statement_lines(item);
                if i + 1 < items.len() {
                    sub.last_mut().unwrap().push(';');
                }
                lines.extend(sub);
            }
            lines
        }
        Statement::If(arms) => alternatives("if", None, arms, "fi"),
        Statement::Do(lp) => {
            let header = lp.annotation.as_ref().map(|a| format!("do {{ inv: {}, bound: {} }}", a.invariant, a.bound));
            alternatives("do", header, &lp.arms, "od")
        }
    }
}

fn alternatives(keyword: &str, header: Option<String>, arms: &[GuardedCommand], close: &str) -> Vec<String> {
    let mut lines = Vec::new();
    let first_prefix = match header {
        Some(h) => {
            lines.push(h);
            "   ".to_string()
        }
        None => format!("{keyword} "),
    };
    for (i, gc) in arms.iter().enumerate() {
        let prefix = if i == 0 { first_prefix.as_str() } else { "[] " };
        let body = statement_lines(&gc.body);
        if body.len() == 1 {
            lines.push(format!("{prefix}{} -> {}", gc.guard, body[0]));
        } else {
            lines.push(format!("{prefix}{} ->", gc.guard));
            lines.extend(body.into_iter().map(|l| format!("      {l}")));
        }
    }
    lines.push(close.to_string());
    lines
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&statement_lines(self).join("\n"))
    }
}

/// Canonical source rendering of a program. Parsing the result yields a
/// structurally equal program.
pub fn pretty_print(p: &Program) -> String {
    let mut out = format!("var {};\n", p.vars.join(", "));
    if let Some(a) = &p.annotation {
        writeln!(out, "{{ pre: {} }}", a.pre).unwrap();
        writeln!(out, "{{ post: {} }}", a.post).unwrap();
    }
    for line in statement_lines(&p.body) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}
