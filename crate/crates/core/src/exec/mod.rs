//! Demonic all-paths evaluation and single-path execution of programs.
//!
//! `if` aborts when no guard holds; `do` exits when no guard holds. Every
//! primitive statement (skip, abort, assignment) and every loop iteration
//! costs one step of the budget; a path that would exceed the budget ends in
//! [`Outcome::BudgetExceeded`].

mod eval;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;

pub use eval::{div_mod_euclid, eval_bool, eval_int, Env, EvalError, Mode};

use crate::lang::{Expr, GuardedCommand, Program, Statement};

/// Values of program variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(BTreeMap<String, BigInt>);

impl State {
    pub fn new() -> Self {
        State::default()
    }

    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<BigInt>,
    {
        State(pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }

    /// Parse `x=12,y=-3`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| format!("expected name=value, got `{part}`"))?;
            let value: BigInt = value.trim().parse().map_err(|_| format!("bad integer in `{part}`"))?;
            if out.insert(name.trim().to_string(), value).is_some() {
                return Err(format!("`{}` given twice", name.trim()));
            }
        }
        Ok(State(out))
    }

    pub fn get(&self, name: &str) -> Option<&BigInt> {
        self.0.get(name)
    }

    pub fn set(&mut self, name: impl Into<String>, value: impl Into<BigInt>) {
        self.0.insert(name.into(), value.into());
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn as_map(&self) -> &BTreeMap<String, BigInt> {
        &self.0
    }
}

impl Env for State {
    fn get(&self, name: &str) -> Option<&BigInt> {
        self.0.get(name)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AbortReason {
    NoTrueGuard,
    DivisionByZero,
    /// An `abort` statement was executed.
    Explicit,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbortReason::NoTrueGuard => "no-true-guard",
            AbortReason::DivisionByZero => "division-by-zero",
            AbortReason::Explicit => "abort",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Terminated(State),
    Aborted(AbortReason),
    BudgetExceeded,
}

impl Outcome {
    pub fn is_terminated(&self) -> bool {
        matches!(self, Outcome::Terminated(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Terminated(s) => write!(f, "Terminated {s}"),
            Outcome::Aborted(r) => write!(f, "Aborted({r})"),
            Outcome::BudgetExceeded => f.write_str("BudgetExceeded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("initial state must assign exactly {expected:?}, got {found:?}")]
    StateMismatch { expected: Vec<String>, found: Vec<String> },
    #[error("step budget must be at least 1")]
    ZeroBudget,
}

/// Reproducible choice among enabled guards.
///
/// The first pick is `seed mod n`; the state then advances by a fixed 64-bit
/// linear-congruential step.
#[derive(Clone, Debug)]
pub struct Chooser {
    state: u64,
}

impl Chooser {
    pub fn new(seed: u64) -> Self {
        Chooser { state: seed }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        let r = self.state;
        self.state = r.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((r ^ (r >> 32)) % n as u64) as usize
    }
}

#[derive(Clone)]
struct Config<'a> {
    stack: Vec<&'a Statement>,
    state: State,
    used: u64,
}

impl Config<'_> {
    fn key(&self) -> (Vec<usize>, State, u64) {
        let frames = self.stack.iter().map(|s| *s as *const Statement as usize).collect();
        (frames, self.state.clone(), self.used)
    }
}

enum Step<'a> {
    Done(Outcome),
    Next(Vec<Config<'a>>),
}

fn enabled<'a>(arms: &'a [GuardedCommand], state: &State) -> Result<Vec<&'a Statement>, AbortReason> {
    let mut out = Vec::new();
    for gc in arms {
        match eval_bool(&gc.guard, state, Mode::Strict) {
            Ok(true) => out.push(&gc.body),
            Ok(false) => {}
            Err(_) => return Err(AbortReason::DivisionByZero),
        }
    }
    Ok(out)
}

fn assign(state: &mut State, targets: &[String], values: &[Expr]) -> Result<(), AbortReason> {
    let mut computed = Vec::with_capacity(values.len());
    for e in values {
        computed.push(eval_int(e, state, Mode::Strict).map_err(|_| AbortReason::DivisionByZero)?);
    }
    for (x, v) in targets.iter().zip(computed) {
        state.set(x.clone(), v);
    }
    Ok(())
}

/// Run a configuration until it finishes or reaches a choice point.
fn step(mut cfg: Config<'_>, budget: u64) -> Step<'_> {
    loop {
        let Some(stmt) = cfg.stack.pop() else {
            return Step::Done(Outcome::Terminated(cfg.state));
        };
        match stmt {
            Statement::Skip | Statement::Abort | Statement::Assign(..) | Statement::MultiAssign(..) => {
                if cfg.used >= budget {
                    return Step::Done(Outcome::BudgetExceeded);
                }
                cfg.used += 1;
                let result = match stmt {
                    Statement::Skip => Ok(()),
                    Statement::Abort => Err(AbortReason::Explicit),
                    Statement::Assign(x, e) => assign(&mut cfg.state, std::slice::from_ref(x), std::slice::from_ref(e)),
                    Statement::MultiAssign(xs, es) => assign(&mut cfg.state, xs, es),
                    _ => unreachable!(),
                };
                if let Err(reason) = result {
                    return Step::Done(Outcome::Aborted(reason));
                }
                return Step::Next(vec![cfg]);
            }
            Statement::Seq(items) => cfg.stack.extend(items.iter().rev()),
            Statement::If(arms) => {
                let bodies = match enabled(arms, &cfg.state) {
                    Ok(b) if b.is_empty() => return Step::Done(Outcome::Aborted(AbortReason::NoTrueGuard)),
                    Ok(b) => b,
                    Err(reason) => return Step::Done(Outcome::Aborted(reason)),
                };
                return Step::Next(branch(&cfg, None, bodies));
            }
            Statement::Do(lp) => {
                let bodies = match enabled(&lp.arms, &cfg.state) {
                    Ok(b) => b,
                    Err(reason) => return Step::Done(Outcome::Aborted(reason)),
                };
                if bodies.is_empty() {
                    continue;
                }
                // An iteration is charged like a primitive statement, so a
                // loop whose body only runs exhausted inner loops still ends.
                if cfg.used >= budget {
                    return Step::Done(Outcome::BudgetExceeded);
                }
                cfg.used += 1;
                return Step::Next(branch(&cfg, Some(stmt), bodies));
            }
        }
    }
}

fn branch<'a>(cfg: &Config<'a>, resume: Option<&'a Statement>, bodies: Vec<&'a Statement>) -> Vec<Config<'a>> {
    bodies
        .into_iter()
        .map(|body| {
            let mut next = cfg.clone();
            next.stack.extend(resume);
            next.stack.push(body);
            next
        })
        .collect()
}

fn check_state(p: &Program, s0: &State, budget: u64) -> Result<(), ExecError> {
    if budget == 0 {
        return Err(ExecError::ZeroBudget);
    }
    let mut expected = p.vars.clone();
    expected.sort();
    let found: Vec<String> = s0.vars().map(String::from).collect();
    if expected != found {
        return Err(ExecError::StateMismatch { expected, found });
    }
    Ok(())
}

fn explore(stmt: &Statement, s0: &State, budget: u64, memo: bool) -> BTreeSet<Outcome> {
    let mut outcomes = BTreeSet::new();
    let mut seen = HashSet::new();
    let mut work = vec![Config { stack: vec![stmt], state: s0.clone(), used: 0 }];
    while let Some(cfg) = work.pop() {
        match step(cfg, budget) {
            Step::Done(o) => {
                outcomes.insert(o);
            }
            Step::Next(nexts) => {
                for n in nexts.into_iter().rev() {
                    if !memo || seen.insert(n.key()) {
                        work.push(n);
                    }
                }
            }
        }
    }
    outcomes
}

/// Every outcome of every resolution of nondeterministic choice.
pub fn run_all(p: &Program, s0: &State, budget: u64) -> Result<BTreeSet<Outcome>, ExecError> {
    check_state(p, s0, budget)?;
    Ok(explore(&p.body, s0, budget, true))
}

/// [`run_all`] for a bare statement; `s0` must bind its free variables.
pub fn run_statement_all(stmt: &Statement, s0: &State, budget: u64) -> BTreeSet<Outcome> {
    explore(stmt, s0, budget.max(1), true)
}

/// Reference exploration that revisits shared configurations; exponential on
/// diamond-shaped choice, used to cross-check the memoized explorer.
pub fn run_statement_all_unmemoized(stmt: &Statement, s0: &State, budget: u64) -> BTreeSet<Outcome> {
    explore(stmt, s0, budget.max(1), false)
}

/// One resolution of choice, picked by a [`Chooser`] seeded with `seed`.
pub fn run_one(p: &Program, s0: &State, seed: u64, budget: u64) -> Result<Outcome, ExecError> {
    check_state(p, s0, budget)?;
    Ok(run_statement_one(&p.body, s0, seed, budget))
}

pub fn run_statement_one(stmt: &Statement, s0: &State, seed: u64, budget: u64) -> Outcome {
    let mut chooser = Chooser::new(seed);
    let mut cfg = Config { stack: vec![stmt], state: s0.clone(), used: 0 };
    loop {
        match step(cfg, budget.max(1)) {
            Step::Done(o) => return o,
            Step::Next(mut nexts) => {
                let i = if nexts.len() > 1 { chooser.pick(nexts.len()) } else { 0 };
                cfg = nexts.swap_remove(i);
            }
        }
    }
}
