//! Calculational proofs: chains of expressions joined by relations, each step
//! justified by a hint.
//!
//! ```text
//! let s = (a + b + c) / 2
//!   s * (s - b) * (s - c) + s * (s - c) * (s - a)
//! =   { algebra }
//!   s * (s - c) * (2 * s - a - b)
//! =   { definition of s }
//!   s * (s - c) * c
//! ```
//!
//! Hints starting with `algebra` are decided by exact polynomial
//! normalization over the rationals; `definition of v` substitutes the `let`
//! definition of `v` first. Any other hint is checked over a bounded domain
//! when one is given and is otherwise left unchecked.
//!
//! Relations compose as follows (`-` is a chain error):
//!
//! ```text
//!        =    <    <=   >    >=   ==>  <=>
//!  =     =    <    <=   >    >=   ==>  <=>
//!  <     <    <    <    -    -    -    -
//!  <=    <=   <    <=   -    -    -    -
//!  >     >    -    -    >    >    -    -
//!  >=    >=   -    -    >    >=   -    -
//!  ==>   ==>  -    -    -    -    ==>  ==>
//!  <=>   <=>  -    -    -    -    ==>  <=>
//! ```

mod check;
pub mod poly;
mod proof;

use std::fmt;

pub use check::{check_chain, check_step, ChainVerdict, StepStatus, StepVerdict, Value};
pub use proof::{parse_proof, pretty_proof, ProofChain, ProofError, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
    Implies,
    Iff,
}

impl Relation {
    pub const ALL: [Relation; 7] =
        [Relation::Eq, Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge, Relation::Implies, Relation::Iff];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Implies => "==>",
            Relation::Iff => "<=>",
        }
    }

    /// Relation between integers (as opposed to booleans); `=` is both.
    pub fn is_arithmetic(self) -> bool {
        matches!(self, Relation::Lt | Relation::Le | Relation::Gt | Relation::Ge)
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Relation::Implies | Relation::Iff)
    }

    /// `a self b` and `b other c` give `a (self.compose(other)) c`.
    pub fn compose(self, other: Relation) -> Option<Relation> {
        use Relation::*;
        match (self, other) {
            (Eq, r) | (r, Eq) => Some(r),
            (Iff, Iff) => Some(Iff),
            (Implies | Iff, Implies | Iff) => Some(Implies),
            (Le, Le) => Some(Le),
            (Lt | Le, Lt | Le) => Some(Lt),
            (Ge, Ge) => Some(Ge),
            (Gt | Ge, Gt | Ge) => Some(Gt),
            _ => None,
        }
    }

    /// Composition of a whole chain; `None` for an empty or ill-mixed chain.
    pub fn compose_all(rels: impl IntoIterator<Item = Relation>) -> Option<Relation> {
        let mut iter = rels.into_iter();
        let first = iter.next()?;
        iter.try_fold(first, Relation::compose)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
