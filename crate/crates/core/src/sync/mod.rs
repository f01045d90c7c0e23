//! Guarded transition systems over small bounded integer variables and an
//! exhaustive breadth-first explorer.
//!
//! A configuration assigns a value to every declared variable; control
//! locations of processes are ordinary variables. One enabled transition
//! fires at a time (interleaving semantics, adversarial scheduler).

mod models;

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::ops::{Index, IndexMut};
use std::sync::Arc;

pub use models::{
    binary_semaphore_model, dekker_model, dining_philosophers_model, minimal_stabilizing_k, naive_flags_model,
    ring_analysis, stabilizing_ring_model, Model, ModelSpec, NaiveVariant, Predicate, RingModel, RingReport, Semaphore,
    Strategy,
};

pub const DEFAULT_CAP: usize = 1_000_000;

/// Handle of a declared variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config(pub Vec<i64>);

impl Index<Var> for Config {
    type Output = i64;
    fn index(&self, v: Var) -> &i64 {
        &self.0[v.0]
    }
}

impl IndexMut<Var> for Config {
    fn index_mut(&mut self, v: Var) -> &mut i64 {
        &mut self.0[v.0]
    }
}

pub type Guard = Arc<dyn Fn(&Config) -> bool + Send + Sync>;
pub type Update = Arc<dyn Fn(&mut Config) + Send + Sync>;

#[derive(Clone)]
pub struct Transition {
    pub process: usize,
    pub label: String,
    pub guard: Guard,
    pub update: Update,
}

impl fmt::Debug for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Transition({}, {})", self.process, self.label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("variable `{name}` declared with empty range {lo}..{hi}")]
    EmptyRange { name: String, lo: i64, hi: i64 },
    #[error("initial value {value} of `{name}` is outside {lo}..{hi}")]
    InitialOutOfBounds { name: String, value: i64, lo: i64, hi: i64 },
    #[error("transition `{label}` sets `{name}` to {value}, outside {lo}..{hi}, from {from}")]
    OutOfBounds { label: String, name: String, value: i64, lo: i64, hi: i64, from: String },
    #[error("state space exceeds the cap of {cap} configurations ({frontier} still unexplored)")]
    CapExceeded { cap: usize, frontier: usize },
    #[error("{0}")]
    Invalid(String),
}

/// Variables, processes, transitions and initial configurations.
#[derive(Clone, Debug, Default)]
pub struct System {
    pub vars: Vec<VarDecl>,
    pub processes: Vec<String>,
    pub transitions: Vec<Transition>,
    pub initial: Vec<Config>,
}

impl System {
    pub fn new() -> Self {
        System::default()
    }

    pub fn var(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<Var, ModelError> {
        let name = name.into();
        if lo > hi {
            return Err(ModelError::EmptyRange { name, lo, hi });
        }
        self.vars.push(VarDecl { name, lo, hi });
        Ok(Var(self.vars.len() - 1))
    }

    pub fn process(&mut self, name: impl Into<String>) -> usize {
        self.processes.push(name.into());
        self.processes.len() - 1
    }

    pub fn transition(
        &mut self,
        process: usize,
        label: impl Into<String>,
        guard: impl Fn(&Config) -> bool + Send + Sync + 'static,
        update: impl Fn(&mut Config) + Send + Sync + 'static,
    ) {
        self.transitions.push(Transition {
            process,
            label: label.into(),
            guard: Arc::new(guard),
            update: Arc::new(update),
        });
    }

    pub fn initial(&mut self, config: Config) -> Result<(), ModelError> {
        for (d, &value) in self.vars.iter().zip(&config.0) {
            if value < d.lo || value > d.hi {
                return Err(ModelError::InitialOutOfBounds { name: d.name.clone(), value, lo: d.lo, hi: d.hi });
            }
        }
        if config.0.len() != self.vars.len() {
            return Err(ModelError::Invalid(format!(
                "initial configuration has {} values for {} variables",
                config.0.len(),
                self.vars.len()
            )));
        }
        self.initial.push(config);
        Ok(())
    }

    /// A configuration with every variable at its lower bound.
    pub fn zero_config(&self) -> Config {
        Config(self.vars.iter().map(|d| d.lo).collect())
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|d| d.name == name).map(Var)
    }

    pub fn show(&self, c: &Config) -> String {
        let parts: Vec<String> = self.vars.iter().zip(&c.0).map(|(d, v)| format!("{}={v}", d.name)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn edge_label(&self, transition: usize) -> String {
        let t = &self.transitions[transition];
        format!("{}.{}", self.processes[t.process], t.label)
    }

    fn fire(&self, t: usize, c: &Config) -> Result<Config, ModelError> {
        let tr = &self.transitions[t];
        let mut next = c.clone();
        (tr.update)(&mut next);
        for (d, &value) in self.vars.iter().zip(&next.0) {
            if value < d.lo || value > d.hi {
                return Err(ModelError::OutOfBounds {
                    label: self.edge_label(t),
                    name: d.name.clone(),
                    value,
                    lo: d.lo,
                    hi: d.hi,
                    from: self.show(c),
                });
            }
        }
        Ok(next)
    }

    /// Enabled transitions and their targets, in declaration order.
    pub fn successors(&self, c: &Config) -> Result<Vec<(usize, Config)>, ModelError> {
        let mut out = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            if (t.guard)(c) {
                out.push((i, self.fire(i, c)?));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub transition: usize,
}

/// Reachable configurations in breadth-first discovery order.
#[derive(Clone, Debug)]
pub struct StateGraph {
    pub vertices: Vec<Config>,
    pub edges: Vec<Edge>,
    pub initial: Vec<usize>,
    index: HashMap<Config, usize>,
    out: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl StateGraph {
    pub fn vertex(&self, c: &Config) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Outgoing edges of a vertex.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out[v].iter().map(|&e| &self.edges[e])
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges(v).map(|e| e.to)
    }

    /// Shortest path from an initial vertex, as the edges taken.
    pub fn path_to(&self, v: usize) -> Vec<Edge> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(e) = self.parent[cur] {
            path.push(self.edges[e]);
            cur = self.edges[e].from;
        }
        path.reverse();
        path
    }

    pub fn to_dot(&self, sys: &System) -> String {
        let mut out = String::from("digraph states {\n  node [shape=box, fontname=monospace];\n");
        for (i, c) in self.vertices.iter().enumerate() {
            let style = if self.initial.contains(&i) { ", peripheries=2" } else { "" };
            writeln!(out, "  s{i} [label=\"{}\"{style}];", sys.show(c)).unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  s{} -> s{} [label=\"{}\"];", e.from, e.to, sys.edge_label(e.transition)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first closure of the initial configurations.
pub fn explore(sys: &System, cap: usize) -> Result<StateGraph, ModelError> {
    explore_ordered(sys, cap, |_, _| {})
}

/// [`explore`] with a hook that may reorder each vertex's successors before
/// they are queued; the resulting vertex and edge sets do not depend on it.
pub fn explore_ordered(
    sys: &System,
    cap: usize,
    mut reorder: impl FnMut(usize, &mut Vec<(usize, Config)>),
) -> Result<StateGraph, ModelError> {
    let mut g = StateGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
        initial: Vec::new(),
        index: HashMap::new(),
        out: Vec::new(),
        parent: Vec::new(),
    };
    let mut queue = VecDeque::new();
    let add = |g: &mut StateGraph, c: Config, parent: Option<usize>| -> Result<(usize, bool), ModelError> {
        if let Some(&i) = g.index.get(&c) {
            return Ok((i, false));
        }
        if g.vertices.len() >= cap {
            return Err(ModelError::CapExceeded { cap, frontier: 0 });
        }
        let i = g.vertices.len();
        g.index.insert(c.clone(), i);
        g.vertices.push(c);
        g.out.push(Vec::new());
        g.parent.push(parent);
        Ok((i, true))
    };
    let with_frontier = |e: ModelError, frontier: usize| match e {
        ModelError::CapExceeded { cap, .. } => ModelError::CapExceeded { cap, frontier },
        other => other,
    };
    for c in &sys.initial {
        let (i, fresh) = add(&mut g, c.clone(), None).map_err(|e| with_frontier(e, queue.len()))?;
        if fresh {
            g.initial.push(i);
            queue.push_back(i);
        }
    }
    while let Some(v) = queue.pop_front() {
        let mut succ = sys.successors(&g.vertices[v])?;
        reorder(v, &mut succ);
        for (t, c) in succ {
            let e = g.edges.len();
            let (to, fresh) = add(&mut g, c, Some(e)).map_err(|err| with_frontier(err, queue.len() + 1))?;
            g.edges.push(Edge { from: v, to, transition: t });
            g.out[v].push(e);
            if fresh {
                queue.push_back(to);
            }
        }
    }
    Ok(g)
}

/// A labeled run from an initial configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub configs: Vec<Config>,
    pub labels: Vec<String>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn render(&self, sys: &System) -> String {
        let mut out = format!("   {}\n", sys.show(&self.configs[0]));
        for (label, c) in self.labels.iter().zip(&self.configs[1..]) {
            writeln!(out, "-> {label}\n   {}", sys.show(c)).unwrap();
        }
        out
    }
}

fn trace_to(g: &StateGraph, sys: &System, v: usize) -> Trace {
    let path = g.path_to(v);
    let start = path.first().map_or(v, |e| e.from);
    let mut configs = vec![g.vertices[start].clone()];
    let mut labels = Vec::new();
    for e in path {
        configs.push(g.vertices[e.to].clone());
        labels.push(sys.edge_label(e.transition));
    }
    Trace { configs, labels }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Safety {
    NoViolation,
    Violation(Trace),
}

/// Shortest trace to a configuration satisfying `bad`, if any.
pub fn check_safety(g: &StateGraph, sys: &System, bad: impl Fn(&Config) -> bool) -> Safety {
    // Vertices are numbered in BFS order, so the first bad one is nearest.
    match g.vertices.iter().position(bad) {
        None => Safety::NoViolation,
        Some(v) => Safety::Violation(trace_to(g, sys, v)),
    }
}

/// Non-final vertices without outgoing edges, in discovery order.
pub fn find_deadlocks(g: &StateGraph, is_final: impl Fn(&Config) -> bool) -> Vec<usize> {
    (0..g.vertices.len()).filter(|&v| g.out[v].is_empty() && !is_final(&g.vertices[v])).collect()
}

/// Shortest trace into a deadlock, if any.
pub fn deadlock_trace(g: &StateGraph, sys: &System, is_final: impl Fn(&Config) -> bool) -> Option<Trace> {
    find_deadlocks(g, is_final).first().map(|&v| trace_to(g, sys, v))
}
