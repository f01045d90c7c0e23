use std::fmt::Write as _;

use super::Relation;
use crate::lang::lexer::{tokenize, Pos, Tok, Token};
use crate::lang::{Expr, ParseError, Parser, Scope, Type};

/// One `lhs rel { hint } rhs` step.
#[derive(Clone, Debug)]
pub struct Step {
    pub lhs: Expr,
    pub relation: Relation,
    pub hint: String,
    pub rhs: Expr,
    /// Position of the relation symbol.
    pub pos: Pos,
}

// Positions are not part of a step's identity.
impl PartialEq for Step {
    fn eq(&self, other: &Step) -> bool {
        (&self.lhs, self.relation, &self.hint, &self.rhs) == (&other.lhs, other.relation, &other.hint, &other.rhs)
    }
}

impl Eq for Step {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofChain {
    /// `let name = expr` definitions in source order.
    pub definitions: Vec<(String, Expr)>,
    pub steps: Vec<Step>,
    /// Relation the author claims between the first and last expression;
    /// defaults to the composition of the steps.
    pub claim: Option<Relation>,
}

impl ProofChain {
    pub fn definition(&self, name: &str) -> Option<&Expr> {
        self.definitions.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn first(&self) -> &Expr {
        &self.steps[0].lhs
    }

    pub fn last(&self) -> &Expr {
        &self.steps[self.steps.len() - 1].rhs
    }

    pub fn composed(&self) -> Option<Relation> {
        Relation::compose_all(self.steps.iter().map(|s| s.relation))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{pos}: unknown relation {found} before hint")]
    UnknownRelation { pos: Pos, found: String },
    #[error("{pos}: broken chain: step ends with `{left}` but the next starts with `{right}`")]
    BrokenChain { pos: Pos, left: String, right: String },
    #[error("{pos}: `{name}` is defined twice")]
    DuplicateDefinition { pos: Pos, name: String },
    #[error("proof has no steps")]
    NoSteps,
}

fn relation(tok: &Tok) -> Option<Relation> {
    Some(match tok {
        Tok::Eq => Relation::Eq,
        Tok::Lt => Relation::Lt,
        Tok::Le => Relation::Le,
        Tok::Gt => Relation::Gt,
        Tok::Ge => Relation::Ge,
        Tok::Implies => Relation::Implies,
        Tok::Iff => Relation::Iff,
        _ => return None,
    })
}

fn with_eof(toks: &[Token], end: Pos) -> Vec<Token> {
    let mut v = toks.to_vec();
    v.push(Token { tok: Tok::Eof, pos: end });
    v
}

fn parse_expr(toks: &[Token], end: Pos) -> Result<(Expr, Type), ParseError> {
    let toks = with_eof(toks, end);
    let mut p = Parser::new(&toks, Scope::Free);
    let e = p.any_expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse the expression between two relations. A chain may repeat the
/// shared expression (one copy per line group); the copies must agree.
fn parse_segment(toks: &[Token], end: Pos) -> Result<(Expr, Type), ProofError> {
    if toks.is_empty() {
        return Err(ParseError::syntax(end, "expected expression").into());
    }
    let whole = parse_expr(toks, end);
    if whole.is_ok() {
        return Ok(whole?);
    }
    for k in 1..toks.len() {
        if toks[k].pos.line == toks[k - 1].pos.line {
            continue;
        }
        if let (Ok(left), Ok(right)) = (parse_expr(&toks[..k], toks[k].pos), parse_expr(&toks[k..], end)) {
            if left != right {
                return Err(ProofError::BrokenChain {
                    pos: toks[k].pos,
                    left: left.0.to_string(),
                    right: right.0.to_string(),
                });
            }
            return Ok(left);
        }
    }
    Ok(whole?)
}

fn check_types(lhs: &(Expr, Type), rel: Relation, rhs: &(Expr, Type), pos: Pos) -> Result<(), ParseError> {
    let want = if rel.is_arithmetic() {
        Some(Type::Int)
    } else if rel.is_logical() {
        Some(Type::Bool)
    } else {
        None
    };
    let ok = match want {
        Some(t) => lhs.1 == t && rhs.1 == t,
        None => lhs.1 == rhs.1,
    };
    if ok {
        Ok(())
    } else {
        Err(ParseError::Type { pos, msg: format!("`{rel}` cannot relate `{}` and `{}`", lhs.0, rhs.0) })
    }
}

/// Parse a `.proof` text.
pub fn parse_proof(text: &str) -> Result<ProofChain, ProofError> {
    let toks = tokenize(text, true)?;
    let end = toks.last().expect("tokenize ends with Eof").pos;
    let toks = &toks[..toks.len() - 1];
    let mut i = 0;
    let mut definitions: Vec<(String, Expr)> = Vec::new();
    let mut claim = None;

    // Header directives, each on a single line.
    loop {
        let line_end = |start: usize| {
            let line = toks[start].pos.line;
            (start..toks.len()).find(|&j| toks[j].pos.line != line).unwrap_or(toks.len())
        };
        match toks.get(i).map(|t| &t.tok) {
            Some(Tok::Let) => {
                let stop = line_end(i);
                let (name, pos) = match toks.get(i + 1) {
                    Some(Token { tok: Tok::Ident(n), pos }) if i + 1 < stop => (n.clone(), *pos),
                    _ => return Err(ParseError::syntax(toks[i].pos, "expected `let name = expression`").into()),
                };
                if !matches!(toks.get(i + 2), Some(Token { tok: Tok::Eq, .. })) || i + 2 >= stop {
                    return Err(ParseError::syntax(pos, "expected `=` after the defined name").into());
                }
                let next = toks.get(stop).map_or(end, |t| t.pos);
                let (e, ty) = parse_expr(&toks[i + 3..stop], next)?;
                if ty != Type::Int {
                    return Err(ParseError::Type { pos, msg: "definitions must be integer expressions".into() }.into());
                }
                if definitions.iter().any(|(n, _)| *n == name) {
                    return Err(ProofError::DuplicateDefinition { pos, name });
                }
                definitions.push((name, e));
                i = stop;
            }
            Some(Tok::Ident(w)) if w == "claim" && line_end(i) == i + 2 => {
                let Some(rel) = relation(&toks[i + 1].tok) else {
                    return Err(ProofError::UnknownRelation {
                        pos: toks[i + 1].pos,
                        found: toks[i + 1].tok.to_string(),
                    });
                };
                claim = Some(rel);
                i += 2;
            }
            _ => break,
        }
    }

    let body = &toks[i..];
    let hints: Vec<usize> = (0..body.len()).filter(|&j| matches!(body[j].tok, Tok::Hint(_))).collect();
    if hints.is_empty() {
        return Err(ProofError::NoSteps);
    }
    for &h in &hints {
        if h == 0 || relation(&body[h - 1].tok).is_none() {
            let (pos, found) = match h {
                0 => (body[0].pos, "nothing".to_string()),
                _ => (body[h - 1].pos, body[h - 1].tok.to_string()),
            };
            return Err(ProofError::UnknownRelation { pos, found });
        }
    }

    let mut steps = Vec::new();
    let mut lhs = parse_segment(&body[..hints[0] - 1], body[hints[0] - 1].pos)?;
    for (k, &h) in hints.iter().enumerate() {
        let rel_tok = &body[h - 1];
        let Tok::Hint(hint) = &body[h].tok else { unreachable!() };
        let (stop, stop_pos) = match hints.get(k + 1) {
            Some(&next) => (next - 1, body[next - 1].pos),
            None => (body.len(), end),
        };
        let rhs = parse_segment(&body[h + 1..stop], stop_pos)?;
        let rel = relation(&rel_tok.tok).expect("checked above");
        check_types(&lhs, rel, &rhs, rel_tok.pos)?;
        steps.push(Step { lhs: lhs.0, relation: rel, hint: hint.clone(), rhs: rhs.0.clone(), pos: rel_tok.pos });
        lhs = rhs;
    }
    Ok(ProofChain { definitions, steps, claim })
}

/// Render a chain in the stacked hint format accepted by [`parse_proof`].
pub fn pretty_proof(chain: &ProofChain) -> String {
    let mut out = String::new();
    for (name, e) in &chain.definitions {
        writeln!(out, "let {name} = {e}").unwrap();
    }
    if let Some(rel) = chain.claim {
        writeln!(out, "claim {rel}").unwrap();
    }
    if let Some(first) = chain.steps.first() {
        writeln!(out, "  {}", first.lhs).unwrap();
    }
    for step in &chain.steps {
        writeln!(out, "{:<4}{{ {} }}", step.relation.symbol(), step.hint).unwrap();
        writeln!(out, "  {}", step.rhs).unwrap();
    }
    out
}
