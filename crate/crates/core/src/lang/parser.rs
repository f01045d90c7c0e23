use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;

/// How identifiers in expressions are resolved.
#[derive(Clone, Debug)]
pub(crate) enum Scope {
    /// Program context: identifiers must be declared, except capitalized
    /// logical variables when `logical` is set.
    Program { declared: HashSet<String>, logical: bool },
    /// Proof context: every identifier is an integer variable and exact
    /// division `/` is allowed.
    Free,
}

struct Typed {
    expr: Expr,
    ty: Type,
    pos: Pos,
}

pub(crate) struct Parser<'t> {
    toks: &'t [Token],
    i: usize,
    scope: Scope,
}

impl<'t> Parser<'t> {
    pub(crate) fn new(toks: &'t [Token], scope: Scope) -> Self {
        debug_assert!(matches!(toks.last(), Some(Token { tok: Tok::Eof, .. })));
        Parser { toks, i: 0, scope }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::syntax(self.pos(), format!("expected {what}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Pos, ParseError> {
        if self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(what))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                Ok((name, pos))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    /// Contextual keyword such as `pre` or `inv`.
    fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(w) if w == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(word)),
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ---- programs ----

    pub(crate) fn program(&mut self) -> Result<Program, ParseError> {
        self.expect(&Tok::Var, "var")?;
        let mut vars = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let (name, pos) = self.ident()?;
            if !seen.insert(name.clone()) {
                return Err(ParseError::syntax(pos, format!("variable `{name}` declared twice")));
            }
            vars.push(name);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Semi, ";")?;
        self.scope = Scope::Program { declared: seen, logical: false };

        let annotation = if self.peek() == &Tok::LBrace {
            let pre = self.annotation_clause("pre")?;
            let post = self.annotation_clause("post")?;
            Some(Annotation { pre, post })
        } else {
            None
        };
        let body = self.statement_seq()?;
        self.finish()?;
        Ok(Program { vars, annotation, body })
    }

    fn annotation_clause(&mut self, word: &str) -> Result<Expr, ParseError> {
        self.expect(&Tok::LBrace, "{")?;
        self.expect_word(word)?;
        self.expect(&Tok::Colon, ":")?;
        let pred = self.with_logical(|p| p.bool_expr())?;
        self.expect(&Tok::RBrace, "}")?;
        Ok(pred)
    }

    fn with_logical<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T, ParseError>) -> Result<T, ParseError> {
        let saved = match &mut self.scope {
            Scope::Program { logical, .. } => Some(std::mem::replace(logical, true)),
            Scope::Free => None,
        };
        let out = f(self);
        if let (Some(old), Scope::Program { logical, .. }) = (saved, &mut self.scope) {
            *logical = old;
        }
        out
    }

    pub(crate) fn statement_seq(&mut self) -> Result<Statement, ParseError> {
        let mut items = vec![self.statement()?];
        while self.eat(&Tok::Semi) {
            items.push(self.statement()?);
        }
        Ok(Statement::seq(items))
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        match self.peek().clone() {
            Tok::Skip => {
                self.bump();
                Ok(Statement::Skip)
            }
            Tok::Abort => {
                self.bump();
                Ok(Statement::Abort)
            }
            Tok::If => {
                self.bump();
                let arms = self.guarded_commands()?;
                self.expect(&Tok::Fi, "fi")?;
                Ok(Statement::If(arms))
            }
            Tok::Do => {
                self.bump();
                let annotation = if self.peek() == &Tok::LBrace { Some(self.loop_annotation()?) } else { None };
                let arms = self.guarded_commands()?;
                self.expect(&Tok::Od, "od")?;
                Ok(Statement::Do(Loop { annotation, arms }))
            }
            Tok::Ident(_) => self.assignment(),
            _ => Err(self.unexpected("statement")),
        }
    }

    fn target(&mut self) -> Result<(String, Pos), ParseError> {
        let (name, pos) = self.ident()?;
        if let Scope::Program { declared, .. } = &self.scope {
            if !declared.contains(&name) {
                return Err(ParseError::Undeclared { pos, name });
            }
        }
        Ok((name, pos))
    }

    fn assignment(&mut self) -> Result<Statement, ParseError> {
        let (first, _) = self.target()?;
        let mut targets = vec![first];
        while self.eat(&Tok::Comma) {
            let (name, pos) = self.target()?;
            if targets.contains(&name) {
                return Err(ParseError::syntax(pos, format!("`{name}` assigned twice in one simultaneous assignment")));
            }
            targets.push(name);
        }
        let assign_pos = self.expect(&Tok::Assign, ":=")?;
        let mut values = vec![self.int_expr()?];
        while self.eat(&Tok::Comma) {
            values.push(self.int_expr()?);
        }
        if values.len() != targets.len() {
            return Err(ParseError::syntax(
                assign_pos,
                format!("{} targets but {} expressions", targets.len(), values.len()),
            ));
        }
        if targets.len() == 1 {
            Ok(Statement::Assign(targets.pop().unwrap(), values.pop().unwrap()))
        } else {
            Ok(Statement::MultiAssign(targets, values))
        }
    }

    fn guarded_commands(&mut self) -> Result<Vec<GuardedCommand>, ParseError> {
        let mut arms = vec![self.guarded_command()?];
        while self.eat(&Tok::Box) {
            arms.push(self.guarded_command()?);
        }
        Ok(arms)
    }

    fn guarded_command(&mut self) -> Result<GuardedCommand, ParseError> {
        let guard = self.bool_expr()?;
        self.expect(&Tok::Arrow, "->")?;
        let body = self.statement_seq()?;
        Ok(GuardedCommand { guard, body })
    }

    fn loop_annotation(&mut self) -> Result<LoopAnnotation, ParseError> {
        self.expect(&Tok::LBrace, "{")?;
        self.expect_word("inv")?;
        self.expect(&Tok::Colon, ":")?;
        let invariant = self.with_logical(|p| p.bool_expr())?;
        self.expect(&Tok::Comma, ",")?;
        self.expect_word("bound")?;
        self.expect(&Tok::Colon, ":")?;
        let bound = self.with_logical(|p| p.int_expr())?;
        self.expect(&Tok::RBrace, "}")?;
        Ok(LoopAnnotation { invariant, bound })
    }

    // ---- expressions ----

    pub(crate) fn bool_expr(&mut self) -> Result<Expr, ParseError> {
        let t = self.expr()?;
        require(&t, Type::Bool, "a boolean expression")?;
        Ok(t.expr)
    }

    pub(crate) fn int_expr(&mut self) -> Result<Expr, ParseError> {
        let t = self.expr()?;
        require(&t, Type::Int, "an integer expression")?;
        Ok(t.expr)
    }

    pub(crate) fn any_expr(&mut self) -> Result<(Expr, Type), ParseError> {
        let t = self.expr()?;
        Ok((t.expr, t.ty))
    }

    fn expr(&mut self) -> Result<Typed, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Typed, ParseError> {
        let mut lhs = self.implies()?;
        while self.peek() == &Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = logic(LogicOp::Iff, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Typed, ParseError> {
        let lhs = self.or()?;
        if self.peek() == &Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return logic(LogicOp::Implies, lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Typed, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == &Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = logic(LogicOp::Or, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Typed, ParseError> {
        let mut lhs = self.not()?;
        while self.peek() == &Tok::And {
            self.bump();
            let rhs = self.not()?;
            lhs = logic(LogicOp::And, lhs, rhs)?;
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Typed, ParseError> {
        if self.peek() == &Tok::Not {
            let pos = self.bump().pos;
            let operand = self.not()?;
            require(&operand, Type::Bool, "a boolean operand of `not`")?;
            return Ok(Typed { expr: Expr::not(operand.expr), ty: Type::Bool, pos });
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Typed, ParseError> {
        let lhs = self.additive()?;
        let Some(op) = cmp_op(self.peek()) else {
            return Ok(lhs);
        };
        self.bump();
        let rhs = self.additive()?;
        require(&lhs, Type::Int, "an integer operand of a comparison")?;
        require(&rhs, Type::Int, "an integer operand of a comparison")?;
        if cmp_op(self.peek()).is_some() {
            return Err(ParseError::syntax(self.pos(), "comparisons do not chain; use `and`"));
        }
        Ok(Typed { expr: Expr::cmp(op, lhs.expr, rhs.expr), ty: Type::Bool, pos: lhs.pos })
    }

    fn additive(&mut self) -> Result<Typed, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.multiplicative()?;
            lhs = arith(op, lhs, rhs)?;
        }
    }

    fn multiplicative(&mut self) -> Result<Typed, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Div => ArithOp::Div,
                Tok::Mod => ArithOp::Mod,
                Tok::Slash => ArithOp::Quot,
                _ => return Ok(lhs),
            };
            let op_pos = self.bump().pos;
            if op == ArithOp::Quot && !matches!(self.scope, Scope::Free) {
                return Err(ParseError::Type {
                    pos: op_pos,
                    msg: "`/` is exact division and only allowed in proofs; use `div`".into(),
                });
            }
            let rhs = self.unary()?;
            lhs = arith(op, lhs, rhs)?;
        }
    }

    fn unary(&mut self) -> Result<Typed, ParseError> {
        if self.peek() == &Tok::Minus {
            let pos = self.bump().pos;
            let operand = self.unary()?;
            require(&operand, Type::Int, "an integer operand of unary minus")?;
            return Ok(Typed { expr: Expr::neg(operand.expr), ty: Type::Int, pos });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Typed, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Typed { expr: Expr::Int(v), ty: Type::Int, pos })
            }
            Tok::True | Tok::False => {
                let b = self.bump().tok == Tok::True;
                Ok(Typed { expr: Expr::Bool(b), ty: Type::Bool, pos })
            }
            Tok::Ident(name) => {
                self.bump();
                if let Scope::Program { declared, logical } = &self.scope {
                    let ok = declared.contains(&name) || (*logical && is_logical_name(&name));
                    if !ok {
                        return Err(ParseError::Undeclared { pos, name });
                    }
                }
                Ok(Typed { expr: Expr::Var(name), ty: Type::Int, pos })
            }
            Tok::Gcd | Tok::Abs => {
                let builtin = if self.bump().tok == Tok::Gcd { Builtin::Gcd } else { Builtin::Abs };
                self.expect(&Tok::LParen, "(")?;
                let mut args = vec![self.int_expr()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.int_expr()?);
                }
                self.expect(&Tok::RParen, ")")?;
                if args.len() != builtin.arity() {
                    return Err(ParseError::Type {
                        pos,
                        msg: format!("`{}` takes {} argument(s), got {}", builtin.name(), builtin.arity(), args.len()),
                    });
                }
                Ok(Typed { expr: Expr::Call(builtin, args), ty: Type::Int, pos })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(&Tok::RParen, ")")?;
                Ok(Typed { pos, ..inner })
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

fn cmp_op(tok: &Tok) -> Option<CmpOp> {
    Some(match tok {
        Tok::Eq => CmpOp::Eq,
        Tok::Ne => CmpOp::Ne,
        Tok::Lt => CmpOp::Lt,
        Tok::Le => CmpOp::Le,
        Tok::Gt => CmpOp::Gt,
        Tok::Ge => CmpOp::Ge,
        _ => return None,
    })
}

fn require(t: &Typed, ty: Type, what: &str) -> Result<(), ParseError> {
    if t.ty == ty {
        Ok(())
    } else {
        Err(ParseError::Type { pos: t.pos, msg: format!("expected {what}, found {}", t.ty) })
    }
}

fn logic(op: LogicOp, lhs: Typed, rhs: Typed) -> Result<Typed, ParseError> {
    let what = format!("a boolean operand of `{}`", op.symbol());
    require(&lhs, Type::Bool, &what)?;
    require(&rhs, Type::Bool, &what)?;
    Ok(Typed { expr: Expr::logic(op, lhs.expr, rhs.expr), ty: Type::Bool, pos: lhs.pos })
}

fn arith(op: ArithOp, lhs: Typed, rhs: Typed) -> Result<Typed, ParseError> {
    let what = format!("an integer operand of `{}`", op.symbol());
    require(&lhs, Type::Int, &what)?;
    require(&rhs, Type::Int, &what)?;
    Ok(Typed { expr: Expr::arith(op, lhs.expr, rhs.expr), ty: Type::Int, pos: lhs.pos })
}

/// Parse a complete `.gcl` program.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = tokenize(text, false)?;
    Parser::new(&toks, Scope::Free).program()
}

/// Parse a boolean predicate over the given program variables. Capitalized
/// logical variables are accepted without declaration.
pub fn parse_predicate(text: &str, vars: &[String]) -> Result<Expr, ParseError> {
    let toks = tokenize(text, false)?;
    let scope = Scope::Program { declared: vars.iter().cloned().collect(), logical: true };
    let mut p = Parser::new(&toks, scope);
    let e = p.bool_expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse an integer expression over the given program variables.
pub fn parse_int_expr(text: &str, vars: &[String]) -> Result<Expr, ParseError> {
    let toks = tokenize(text, false)?;
    let scope = Scope::Program { declared: vars.iter().cloned().collect(), logical: true };
    let mut p = Parser::new(&toks, scope);
    let e = p.int_expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse a statement over the given program variables.
pub fn parse_statement(text: &str, vars: &[String]) -> Result<Statement, ParseError> {
    let toks = tokenize(text, false)?;
    let scope = Scope::Program { declared: vars.iter().cloned().collect(), logical: false };
    let mut p = Parser::new(&toks, scope);
    let s = p.statement_seq()?;
    p.finish()?;
    Ok(s)
}
