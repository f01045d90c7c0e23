//! A workbench for programming as mathematics: guarded commands with demonic
//! nondeterminism, weakest preconditions, calculational proofs, explicit-state
//! exploration of the synchronization classics, and reference implementations
//! of a handful of classic algorithms.

pub mod calc;
pub mod classics;
pub mod exec;
pub mod lang;
pub mod sync;
pub mod wp;
