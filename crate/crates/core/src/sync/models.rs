use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{explore, Config, ModelError, StateGraph, System, Var, DEFAULT_CAP};

pub type Predicate = Arc<dyn Fn(&Config) -> bool + Send + Sync>;

/// A system together with the properties it is meant to have.
#[derive(Clone)]
pub struct Model {
    pub name: String,
    pub system: System,
    /// Both processes in their critical sections.
    pub mutex_violation: Option<Predicate>,
    /// Configurations where having no move is not a deadlock.
    pub is_final: Predicate,
    pub ring: Option<RingModel>,
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Model").field("name", &self.name).field("system", &self.system).finish()
    }
}

fn never() -> Predicate {
    Arc::new(|_| false)
}

/// A counting semaphore stored in a bounded variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Semaphore {
    pub var: Var,
    pub initial: i64,
    pub max: i64,
}

impl Semaphore {
    pub fn declare(sys: &mut System, name: &str, initial: i64, max: i64) -> Result<Semaphore, ModelError> {
        if initial < 0 || initial > max {
            return Err(ModelError::Invalid(format!("semaphore `{name}` starts at {initial}, outside 0..{max}")));
        }
        Ok(Semaphore { var: sys.var(name, 0, max)?, initial, max })
    }

    /// Guard of P.
    pub fn can_p(&self, c: &Config) -> bool {
        c[self.var] > 0
    }

    pub fn p(&self, c: &mut Config) {
        c[self.var] -= 1;
    }

    /// V is always enabled; firing it at `max` is a modeling error reported by
    /// the explorer.
    pub fn v(&self, c: &mut Config) {
        c[self.var] += 1;
    }
}

/// `n` processes cycling through noncritical (0) and critical (1) sections,
/// guarded by a binary semaphore `s`.
pub fn binary_semaphore_model(n: usize) -> Result<Model, ModelError> {
    let mut sys = System::new();
    let s = Semaphore::declare(&mut sys, "s", 1, 1)?;
    let pcs: Vec<Var> = (0..n).map(|i| sys.var(format!("pc{i}"), 0, 1)).collect::<Result<_, _>>()?;
    for (i, &pc) in pcs.iter().enumerate() {
        let p = sys.process(format!("P{i}"));
        sys.transition(
            p,
            "P(s)",
            move |c| c[pc] == 0 && s.can_p(c),
            move |c| {
                s.p(c);
                c[pc] = 1;
            },
        );
        sys.transition(
            p,
            "V(s)",
            move |c| c[pc] == 1,
            move |c| {
                s.v(c);
                c[pc] = 0;
            },
        );
    }
    let mut init = sys.zero_config();
    init[s.var] = s.initial;
    sys.initial(init)?;
    let in_cs = pcs.clone();
    Ok(Model {
        name: format!("semaphore:n={n}"),
        system: sys,
        mutex_violation: Some(Arc::new(move |c| in_cs.iter().filter(|&&pc| c[pc] == 1).count() > 1)),
        is_final: never(),
        ring: None,
    })
}

/// Dekker's two-process mutual exclusion. Process `i` (other process `j`):
///
/// ```text
/// pc 0  noncritical            flag[i] := 1                 -> 1
/// pc 1  flag[j] = 1 ?          yes -> 2, no -> 6
/// pc 2  turn = j ?             yes -> 3, no -> 1
/// pc 3                         flag[i] := 0                 -> 4
/// pc 4  await turn = i                                      -> 5
/// pc 5                         flag[i] := 1                 -> 1
/// pc 6  critical section       turn := j                    -> 7
/// pc 7                         flag[i] := 0                 -> 0
/// ```
///
/// Both values of `turn` are initial, so the model is symmetric in the two
/// process ids.
pub fn dekker_model() -> Result<Model, ModelError> {
    let mut sys = System::new();
    let flag = [sys.var("flag0", 0, 1)?, sys.var("flag1", 0, 1)?];
    let turn = sys.var("turn", 0, 1)?;
    let pc = [sys.var("pc0", 0, 7)?, sys.var("pc1", 0, 7)?];
    for i in 0..2 {
        let j = 1 - i;
        let (me, fi, fj) = (pc[i], flag[i], flag[j]);
        let (iv, jv) = (i as i64, j as i64);
        let p = sys.process(format!("P{i}"));
        let at = move |l: i64| move |c: &Config| c[me] == l;
        sys.transition(p, "want", at(0), move |c| {
            c[fi] = 1;
            c[me] = 1;
        });
        sys.transition(p, "other-wants", move |c| c[me] == 1 && c[fj] == 1, move |c| c[me] = 2);
        sys.transition(p, "enter", move |c| c[me] == 1 && c[fj] == 0, move |c| c[me] = 6);
        sys.transition(p, "not-my-turn", move |c| c[me] == 2 && c[turn] == jv, move |c| c[me] = 3);
        sys.transition(p, "my-turn", move |c| c[me] == 2 && c[turn] == iv, move |c| c[me] = 1);
        sys.transition(p, "back-off", at(3), move |c| {
            c[fi] = 0;
            c[me] = 4;
        });
        sys.transition(p, "turn-is-mine", move |c| c[me] == 4 && c[turn] == iv, move |c| c[me] = 5);
        sys.transition(p, "retry", at(5), move |c| {
            c[fi] = 1;
            c[me] = 1;
        });
        sys.transition(p, "leave", at(6), move |c| {
            c[turn] = jv;
            c[me] = 7;
        });
        sys.transition(p, "lower-flag", at(7), move |c| {
            c[fi] = 0;
            c[me] = 0;
        });
    }
    for t in 0..2 {
        let mut init = sys.zero_config();
        init[turn] = t;
        sys.initial(init)?;
    }
    Ok(Model {
        name: "dekker".into(),
        system: sys,
        mutex_violation: Some(Arc::new(move |c| c[pc[0]] == 6 && c[pc[1]] == 6)),
        is_final: never(),
        ring: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NaiveVariant {
    /// Raise the flag, then wait for the other flag to drop: safe but can
    /// deadlock with both flags raised.
    SetThenTest,
    /// Wait for the other flag to drop, then raise one's own: both
    /// processes can pass the test before either flag goes up.
    TestThenSet,
}

/// Two processes using only their flags (no turn variable); pc 2 is the
/// critical section.
pub fn naive_flags_model(variant: NaiveVariant) -> Result<Model, ModelError> {
    let mut sys = System::new();
    let flag = [sys.var("flag0", 0, 1)?, sys.var("flag1", 0, 1)?];
    let pc = [sys.var("pc0", 0, 2)?, sys.var("pc1", 0, 2)?];
    for i in 0..2 {
        let (me, fi, fj) = (pc[i], flag[i], flag[1 - i]);
        let p = sys.process(format!("P{i}"));
        match variant {
            NaiveVariant::SetThenTest => {
                sys.transition(
                    p,
                    "raise",
                    move |c| c[me] == 0,
                    move |c| {
                        c[fi] = 1;
                        c[me] = 1;
                    },
                );
                sys.transition(p, "enter", move |c| c[me] == 1 && c[fj] == 0, move |c| c[me] = 2);
            }
            NaiveVariant::TestThenSet => {
                sys.transition(p, "see-clear", move |c| c[me] == 0 && c[fj] == 0, move |c| c[me] = 1);
                sys.transition(
                    p,
                    "raise-enter",
                    move |c| c[me] == 1,
                    move |c| {
                        c[fi] = 1;
                        c[me] = 2;
                    },
                );
            }
        }
        sys.transition(
            p,
            "leave",
            move |c| c[me] == 2,
            move |c| {
                c[fi] = 0;
                c[me] = 0;
            },
        );
    }
    sys.initial(sys.zero_config())?;
    let name = match variant {
        NaiveVariant::SetThenTest => "naive:variant=set-then-test",
        NaiveVariant::TestThenSet => "naive:variant=test-then-set",
    };
    Ok(Model {
        name: name.into(),
        system: sys,
        mutex_violation: Some(Arc::new(move |c| c[pc[0]] == 2 && c[pc[1]] == 2)),
        is_final: never(),
        ring: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Everyone takes the left fork first.
    Symmetric,
    /// Philosopher 0 takes the right fork first.
    Asymmetric,
}

/// Philosopher `i` sits between fork `i` (left) and fork `i+1 mod n`
/// (right). pc 0 thinking, 1 holding the first fork, 2 eating; finishing
/// puts both forks down at once.
pub fn dining_philosophers_model(n: usize, strategy: Strategy) -> Result<Model, ModelError> {
    if n < 2 {
        return Err(ModelError::Invalid("need at least two philosophers".into()));
    }
    let mut sys = System::new();
    let forks: Vec<Var> = (0..n).map(|i| sys.var(format!("fork{i}"), 0, 1)).collect::<Result<_, _>>()?;
    let pcs: Vec<Var> = (0..n).map(|i| sys.var(format!("pc{i}"), 0, 2)).collect::<Result<_, _>>()?;
    for i in 0..n {
        let (left, right) = (forks[i], forks[(i + 1) % n]);
        let (first, second) = match strategy {
            Strategy::Asymmetric if i == 0 => (right, left),
            _ => (left, right),
        };
        let pc = pcs[i];
        let p = sys.process(format!("phil{i}"));
        sys.transition(
            p,
            "take-first",
            move |c| c[pc] == 0 && c[first] == 0,
            move |c| {
                c[first] = 1;
                c[pc] = 1;
            },
        );
        sys.transition(
            p,
            "take-second",
            move |c| c[pc] == 1 && c[second] == 0,
            move |c| {
                c[second] = 1;
                c[pc] = 2;
            },
        );
        sys.transition(
            p,
            "put-down",
            move |c| c[pc] == 2,
            move |c| {
                c[first] = 0;
                c[second] = 0;
                c[pc] = 0;
            },
        );
    }
    sys.initial(sys.zero_config())?;
    let tag = match strategy {
        Strategy::Symmetric => "symmetric",
        Strategy::Asymmetric => "asymmetric",
    };
    Ok(Model {
        name: format!("philosophers:n={n},strategy={tag}"),
        system: sys,
        mutex_violation: None,
        is_final: never(),
        ring: None,
    })
}

/// Dijkstra's K-state token ring over machines `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingModel {
    pub n: usize,
    pub k: i64,
    pub vars: Vec<Var>,
}

impl RingModel {
    /// Machine 0 is privileged iff `S[0] = S[n-1]`; machine `i > 0` iff
    /// `S[i] != S[i-1]`.
    pub fn privileges(&self, c: &Config) -> Vec<usize> {
        let s = |i: usize| c[self.vars[i]];
        (0..self.n).filter(|&i| if i == 0 { s(0) == s(self.n - 1) } else { s(i) != s(i - 1) }).collect()
    }

    pub fn is_legitimate(&self, c: &Config) -> bool {
        self.privileges(c).len() == 1
    }
}

/// Every one of the `k^n` configurations is initial.
pub fn stabilizing_ring_model(n: usize, k: usize) -> Result<Model, ModelError> {
    if n < 2 || k < 2 {
        return Err(ModelError::Invalid(format!("ring needs n >= 2 and K >= 2, got n={n}, K={k}")));
    }
    let mut sys = System::new();
    let kk = k as i64;
    let vars: Vec<Var> = (0..n).map(|i| sys.var(format!("S{i}"), 0, kk - 1)).collect::<Result<_, _>>()?;
    for i in 0..n {
        let p = sys.process(format!("m{i}"));
        let me = vars[i];
        if i == 0 {
            let last = vars[n - 1];
            sys.transition(p, "advance", move |c| c[me] == c[last], move |c| c[me] = (c[me] + 1) % kk);
        } else {
            let prev = vars[i - 1];
            sys.transition(p, "copy", move |c| c[me] != c[prev], move |c| c[me] = c[prev]);
        }
    }
    let total = k
        .checked_pow(n as u32)
        .filter(|&t| t <= DEFAULT_CAP)
        .ok_or(ModelError::CapExceeded { cap: DEFAULT_CAP, frontier: 0 })?;
    for mut code in 0..total {
        let mut c = sys.zero_config();
        for &v in &vars {
            c[v] = (code % k) as i64;
            code /= k;
        }
        sys.initial(c)?;
    }
    let ring = RingModel { n, k: kk, vars };
    Ok(Model {
        name: format!("ring:n={n},k={k}"),
        system: sys,
        mutex_violation: None,
        is_final: never(),
        ring: Some(ring),
    })
}

/// Structural stabilization facts for one ring size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingReport {
    pub n: usize,
    pub k: usize,
    pub configs: usize,
    pub legitimate: usize,
    /// (a) every configuration has a privilege.
    pub always_privileged: bool,
    /// (b) legitimate configurations only step to legitimate ones.
    pub closed: bool,
    /// (c) no cycle among illegitimate configurations.
    pub illegitimate_acyclic: bool,
    /// (d) every cycle of legitimate configurations moves every machine.
    pub privilege_circulates: bool,
}

impl RingReport {
    pub fn stabilizes(&self) -> bool {
        self.always_privileged && self.closed && self.illegitimate_acyclic && self.privilege_circulates
    }
}

fn acyclic_within(g: &StateGraph, inside: &[bool]) -> bool {
    // Kahn's algorithm on the induced subgraph.
    let mut indegree = vec![0usize; g.vertices.len()];
    for e in &g.edges {
        if inside[e.from] && inside[e.to] {
            indegree[e.to] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..g.vertices.len()).filter(|&v| inside[v] && indegree[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = ready.pop() {
        removed += 1;
        for w in g.successors(v) {
            if inside[w] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
    }
    removed == inside.iter().filter(|&&b| b).count()
}

fn cycles_move_everyone(g: &StateGraph, sys: &System, legit: &[bool], n: usize) -> bool {
    // Each legitimate vertex has exactly one successor, so following it from
    // any vertex ends in a cycle; every cycle must involve all machines.
    let mut on_checked_cycle = vec![false; g.vertices.len()];
    for start in (0..g.vertices.len()).filter(|&v| legit[v]) {
        let mut seen = Vec::new();
        let mut pos = std::collections::HashMap::new();
        let mut v = start;
        while !pos.contains_key(&v) && !on_checked_cycle[v] {
            pos.insert(v, seen.len());
            seen.push(v);
            let mut out = g.out_edges(v);
            let Some(e) = out.next() else { return false };
            if out.next().is_some() {
                return false;
            }
            v = e.to;
        }
        if on_checked_cycle[v] {
            continue;
        }
        let cycle = &seen[pos[&v]..];
        let movers: BTreeSet<usize> =
            cycle.iter().map(|&u| sys.transitions[g.out_edges(u).next().unwrap().transition].process).collect();
        if movers.len() != n {
            return false;
        }
        for &u in cycle {
            on_checked_cycle[u] = true;
        }
    }
    true
}

pub fn ring_analysis(n: usize, k: usize) -> Result<RingReport, ModelError> {
    let model = stabilizing_ring_model(n, k)?;
    let ring = model.ring.as_ref().expect("ring model");
    let g = explore(&model.system, DEFAULT_CAP)?;
    let legit: Vec<bool> = g.vertices.iter().map(|c| ring.is_legitimate(c)).collect();
    let always_privileged = g.vertices.iter().all(|c| !ring.privileges(c).is_empty());
    let closed = g.edges.iter().all(|e| !legit[e.from] || legit[e.to]);
    let illegit: Vec<bool> = legit.iter().map(|b| !b).collect();
    Ok(RingReport {
        n,
        k,
        configs: g.vertices.len(),
        legitimate: legit.iter().filter(|&&b| b).count(),
        always_privileged,
        closed,
        illegitimate_acyclic: acyclic_within(&g, &illegit),
        privilege_circulates: closed && cycles_move_everyone(&g, &model.system, &legit, n),
    })
}

/// Smallest `K` in `2..=max_k` for which the `n`-machine ring stabilizes.
pub fn minimal_stabilizing_k(n: usize, max_k: usize) -> Result<Option<usize>, ModelError> {
    for k in 2..=max_k {
        if ring_analysis(n, k)?.stabilizes() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Textual model selector: `dekker`, `naive[:variant=set-then-test|test-then-set]`,
/// `semaphore[:n=N]`, `philosophers:n=N,strategy=symmetric|asymmetric`,
/// `ring:n=N,k=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Dekker,
    Naive(NaiveVariant),
    Semaphore(usize),
    Philosophers(usize, Strategy),
    Ring(usize, usize),
}

impl ModelSpec {
    pub fn parse(text: &str) -> Result<ModelSpec, ModelError> {
        let (name, params) = text.split_once(':').unwrap_or((text, ""));
        let mut kv = std::collections::BTreeMap::new();
        for part in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) =
                part.split_once('=').ok_or_else(|| ModelError::Invalid(format!("expected key=value, got `{part}`")))?;
            kv.insert(k.trim(), v.trim());
        }
        let bad = |msg: String| ModelError::Invalid(msg);
        let num = |key: &str, default: Option<usize>| -> Result<usize, ModelError> {
            match kv.get(key) {
                Some(v) => v.parse().map_err(|_| bad(format!("`{key}` must be a positive integer, got `{v}`"))),
                None => default.ok_or_else(|| bad(format!("model `{name}` needs `{key}=`"))),
            }
        };
        let allowed: &[&str] = match name {
            "dekker" => &[],
            "naive" => &["variant"],
            "semaphore" => &["n"],
            "philosophers" => &["n", "strategy"],
            "ring" => &["n", "k"],
            _ => return Err(bad(format!("unknown model `{name}`"))),
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(k)) {
            return Err(bad(format!("model `{name}` has no parameter `{k}`")));
        }
        Ok(match name {
            "dekker" => ModelSpec::Dekker,
            "naive" => ModelSpec::Naive(match kv.get("variant").copied().unwrap_or("test-then-set") {
                "test-then-set" => NaiveVariant::TestThenSet,
                "set-then-test" => NaiveVariant::SetThenTest,
                other => return Err(bad(format!("unknown naive variant `{other}`"))),
            }),
            "semaphore" => ModelSpec::Semaphore(num("n", Some(2))?),
            "philosophers" => ModelSpec::Philosophers(
                num("n", None)?,
                match kv.get("strategy").copied().unwrap_or("symmetric") {
                    "symmetric" => Strategy::Symmetric,
                    "asymmetric" => Strategy::Asymmetric,
                    other => return Err(bad(format!("unknown strategy `{other}`"))),
                },
            ),
            _ => ModelSpec::Ring(num("n", None)?, num("k", None)?),
        })
    }

    pub fn build(&self) -> Result<Model, ModelError> {
        match *self {
            ModelSpec::Dekker => dekker_model(),
            ModelSpec::Naive(v) => naive_flags_model(v),
            ModelSpec::Semaphore(n) => binary_semaphore_model(n),
            ModelSpec::Philosophers(n, s) => dining_philosophers_model(n, s),
            ModelSpec::Ring(n, k) => stabilizing_ring_model(n, k),
        }
    }
}
