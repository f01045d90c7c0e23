//! Concrete syntax, AST and pretty-printer for the guarded-command language.
//!
//! ```text
//! program  := "var" ident ("," ident)* ";" [annot] stmt
//! annot    := "{" "pre:" pred "}" "{" "post:" pred "}"
//! stmt     := "skip" | "abort" | ident ("," ident)* ":=" expr ("," expr)*
//!           | stmt ";" stmt
//!           | "if" gc ("[]" gc)* "fi"
//!           | "do" [loopannot] gc ("[]" gc)* "od"
//! gc       := pred "->" stmt
//! loopannot:= "{" "inv:" pred "," "bound:" expr "}"
//! ```
//!
//! Operator binding, loosest first: `<=>`, `==>` (right associative), `or`,
//! `and`, `not`, comparisons (non-associative), `+ -`, `* div mod /`, unary
//! minus. `→`, `□`, `≤`, `≥`, `≠`, `⇒`, `⇔`, `∧`, `∨`, `¬` are accepted as
//! aliases of their ASCII spellings.

mod ast;
pub mod generate;
pub mod lexer;
mod parser;
mod pretty;

pub use ast::*;
pub use lexer::Pos;
pub use parser::{parse_int_expr, parse_predicate, parse_program, parse_statement};
#[allow(unused_imports)]
pub(crate) use parser::{Parser, Scope};
pub use pretty::pretty_print;

/// A positioned diagnostic.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: undeclared variable `{name}`")]
    Undeclared { pos: Pos, name: String },
    #[error("{pos}: type error: {msg}")]
    Type { pos: Pos, msg: String },
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError::Syntax { pos, msg: msg.into() }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Undeclared { pos, .. } | ParseError::Type { pos, .. } => *pos,
        }
    }
}
