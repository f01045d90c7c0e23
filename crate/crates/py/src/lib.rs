//! Python bindings: programs, verification, proofs, state exploration and
//! the classic algorithms.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use gclwb::calc::{check_chain, parse_proof, StepStatus};
use gclwb::classics::{
    self, fair_bit, fair_roulette, BankerState, BankerVerdict, BiasedCoin, Graph, KnightTour, Point, SylvesterLine,
    Triangle,
};
use gclwb::exec::{self, State};
use gclwb::lang::{self, parse_predicate, parse_program, parse_statement};
use gclwb::sync::{self, check_safety, find_deadlocks, ModelSpec, Safety, DEFAULT_CAP};
use gclwb::wp::{self as wpc, check_vc, complete_domain, verify_program, CheckDomain, Verdict};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state_map(s: &State) -> BTreeMap<String, BigInt> {
    s.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Result of one execution: `kind` is "terminated", "aborted" or
/// "budget-exceeded".
#[pyclass(frozen, get_all, module = "gclwb")]
struct Outcome {
    kind: String,
    state: Option<BTreeMap<String, BigInt>>,
    reason: Option<String>,
}

impl From<exec::Outcome> for Outcome {
    fn from(o: exec::Outcome) -> Self {
        match o {
            exec::Outcome::Terminated(s) => {
                Outcome { kind: "terminated".into(), state: Some(state_map(&s)), reason: None }
            }
            exec::Outcome::Aborted(r) => Outcome { kind: "aborted".into(), state: None, reason: Some(r.to_string()) },
            exec::Outcome::BudgetExceeded => Outcome { kind: "budget-exceeded".into(), state: None, reason: None },
        }
    }
}

#[pymethods]
impl Outcome {
    fn __repr__(&self) -> String {
        match (&self.state, &self.reason) {
            (Some(s), _) => format!("Outcome(terminated, {s:?})"),
            (_, Some(r)) => format!("Outcome(aborted, {r:?})"),
            _ => format!("Outcome({})", self.kind),
        }
    }
}

#[pyclass(frozen, get_all, module = "gclwb")]
struct VerificationCondition {
    label: String,
    formula: String,
    valid: bool,
    counterexample: Option<BTreeMap<String, i64>>,
}

#[pymethods]
impl VerificationCondition {
    fn __repr__(&self) -> String {
        format!("VerificationCondition({}, valid={})", self.label, self.valid)
    }
}

#[pyclass(frozen, module = "gclwb")]
struct Program {
    inner: lang::Program,
}

fn initial_state(init: Option<BTreeMap<String, BigInt>>) -> State {
    State::from_pairs(init.unwrap_or_default())
}

#[pymethods]
impl Program {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        parse_program(source).map(|inner| Program { inner }).map_err(err)
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars.clone()
    }

    /// Every outcome the nondeterministic choices allow.
    #[pyo3(signature = (init = None, budget = 10_000))]
    fn run_all(&self, init: Option<BTreeMap<String, BigInt>>, budget: u64) -> PyResult<Vec<Outcome>> {
        let outs = exec::run_all(&self.inner, &initial_state(init), budget).map_err(err)?;
        Ok(outs.into_iter().map(Outcome::from).collect())
    }

    /// One execution, choosing among open guards with a seeded generator.
    #[pyo3(signature = (init = None, seed = 0, budget = 10_000))]
    fn run_one(&self, init: Option<BTreeMap<String, BigInt>>, seed: u64, budget: u64) -> PyResult<Outcome> {
        exec::run_one(&self.inner, &initial_state(init), seed, budget).map(Outcome::from).map_err(err)
    }

    /// Checks the annotation's verification conditions on a bounded domain
    /// such as `"x=1..20,y=1..20"`.
    fn verify(&self, domain: &str) -> PyResult<Vec<VerificationCondition>> {
        let vcs = verify_program(&self.inner).map_err(err)?;
        let dom = complete_domain(&vcs, &CheckDomain::parse(domain).map_err(err)?).map_err(err)?;
        vcs.iter()
            .map(|vc| {
                let verdict = check_vc(vc, &dom).map_err(err)?;
                Ok(VerificationCondition {
                    label: vc.label(),
                    formula: vc.formula.to_string(),
                    valid: verdict.is_valid(),
                    counterexample: match verdict {
                        Verdict::Valid => None,
                        Verdict::Counterexample(m) => Some(m),
                    },
                })
            })
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Weakest precondition of `statement` with respect to `post`.
fn wp(statement: &str, post: &str, vars: Vec<String>) -> PyResult<String> {
    let s = parse_statement(statement, &vars).map_err(err)?;
    let r = parse_predicate(post, &vars).map_err(err)?;
    wpc::wp(&s, &r).map(|e| e.to_string()).map_err(err)
}

#[pyclass(frozen, get_all, module = "gclwb")]
struct Proof {
    valid: bool,
    relation: Option<String>,
    steps: Vec<String>,
}

#[pymethods]
impl Proof {
    fn __repr__(&self) -> String {
        format!("Proof(valid={}, relation={:?})", self.valid, self.relation)
    }
}

#[pyfunction]
#[pyo3(signature = (source, domain = None))]
fn prove(source: &str, domain: Option<&str>) -> PyResult<Proof> {
    let chain = parse_proof(source).map_err(err)?;
    let dom = domain.map(CheckDomain::parse).transpose().map_err(err)?;
    let v = check_chain(&chain, dom.as_ref());
    Ok(Proof {
        valid: v.valid,
        relation: v.relation.map(|r| r.symbol().to_string()),
        steps: v
            .steps
            .iter()
            .map(|s| match &s.status {
                StepStatus::ValidByNormalization => "valid-by-normalization".into(),
                StepStatus::ValidOnDomain => "valid-on-domain".into(),
                other => other.to_string(),
            })
            .collect(),
    })
}

#[pyclass(frozen, get_all, module = "gclwb")]
struct Exploration {
    model: String,
    configurations: usize,
    transitions: usize,
    mutual_exclusion: Option<bool>,
    deadlock_free: bool,
}

#[pymethods]
impl Exploration {
    fn __repr__(&self) -> String {
        format!("Exploration({}, configurations={})", self.model, self.configurations)
    }
}

/// Explores a model named as on the command line, e.g. `"dekker"` or
/// `"philosophers:n=3,strategy=symmetric"`.
#[pyfunction]
#[pyo3(signature = (model, cap = DEFAULT_CAP))]
fn explore(model: &str, cap: usize) -> PyResult<Exploration> {
    let m = ModelSpec::parse(model).and_then(|s| s.build()).map_err(err)?;
    let g = sync::explore(&m.system, cap).map_err(err)?;
    Ok(Exploration {
        model: m.name.clone(),
        configurations: g.vertices.len(),
        transitions: g.edges.len(),
        mutual_exclusion: m
            .mutex_violation
            .as_ref()
            .map(|bad| check_safety(&g, &m.system, &**bad) == Safety::NoViolation),
        deadlock_free: find_deadlocks(&g, &*m.is_final).is_empty(),
    })
}

#[pyfunction]
fn ring_analysis<'py>(py: Python<'py>, n: usize, k: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = sync::ring_analysis(n, k).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("configurations", r.configs)?;
    d.set_item("legitimate", r.legitimate)?;
    d.set_item("always_privileged", r.always_privileged)?;
    d.set_item("closed", r.closed)?;
    d.set_item("illegitimate_acyclic", r.illegitimate_acyclic)?;
    d.set_item("privilege_circulates", r.privilege_circulates)?;
    d.set_item("stabilizes", r.stabilizes())?;
    Ok(d)
}

/// Distances from `source` as `fractions.Fraction`, `None` if unreachable.
#[pyfunction]
fn shortest_paths<'py>(py: Python<'py>, graph: &str, source: &str) -> PyResult<Bound<'py, PyDict>> {
    let g = Graph::parse_tsv(graph).map_err(err)?;
    let sp = classics::shortest_paths_from(&g, source).map_err(err)?;
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    let d = PyDict::new(py);
    for (name, dist) in g.names.iter().zip(&sp.dist) {
        match dist {
            Some(r) => d.set_item(name, fraction.call1((r.numer().clone(), r.denom().clone()))?)?,
            None => d.set_item(name, py.None())?,
        }
    }
    Ok(d)
}

/// An order in which every customer can be served, or `None` if unsafe.
#[pyfunction]
fn banker_safe_order(capital: u64, loans: Vec<u64>, claims: Vec<u64>) -> PyResult<Option<Vec<usize>>> {
    Ok(match BankerState::new(capital, loans, claims).map_err(err)?.is_safe() {
        BankerVerdict::Safe(order) => Some(order),
        BankerVerdict::Unsafe => None,
    })
}

#[pyfunction]
#[pyo3(signature = (count, bias = 0.5, seed = 0))]
fn fair_bits(count: usize, bias: f64, seed: u64) -> PyResult<Vec<usize>> {
    let mut coin = BiasedCoin::seeded(bias, seed).map_err(err)?;
    (0..count).map(|_| fair_bit(&mut coin).map(|d| d.value).map_err(err)).collect()
}

#[pyfunction]
#[pyo3(signature = (n, count, bias = 0.5, seed = 0))]
fn roulette(n: usize, count: usize, bias: f64, seed: u64) -> PyResult<Vec<usize>> {
    let mut coin = BiasedCoin::seeded(bias, seed).map_err(err)?;
    (0..count).map(|_| fair_roulette(n, &mut coin).map(|d| d.value).map_err(err)).collect()
}

/// Signs of a² + b² - c² and of α + β - γ, each -1, 0 or 1.
#[pyfunction]
fn pythagoras_signs(a: f64, b: f64, c: f64) -> PyResult<(i8, i8)> {
    let t = Triangle::new(a, b, c).map_err(err)?;
    let sign = |o: Ordering| o as i8;
    let (side, angle) = classics::pythagoras_signs(&t);
    Ok((sign(side), sign(angle)))
}

/// Two points whose line contains no other point, or `None` if all are
/// collinear.
#[pyfunction]
fn sylvester_line(points: Vec<(i64, i64)>) -> PyResult<Option<((i64, i64), (i64, i64))>> {
    let ps: Vec<Point> = points.into_iter().map(|(x, y)| Point::new(x, y)).collect();
    Ok(match classics::sylvester_line(&ps).map_err(err)? {
        SylvesterLine::Collinear => None,
        SylvesterLine::Ordinary(p, q) => Some(((p.x, p.y), (q.x, q.y))),
    })
}

#[pyfunction]
fn knight_tour(n: usize) -> PyResult<Option<Vec<(usize, usize)>>> {
    Ok(match classics::knight_tour(n).map_err(err)? {
        KnightTour::Tour(t) => Some(t),
        KnightTour::NoTour => None,
    })
}

/// Cargo of each crossing; `None` when the farmer rows alone.
#[pyfunction]
fn river_crossing() -> Vec<Option<String>> {
    classics::river_crossing().into_iter().map(|m| m.map(|i| format!("{i:?}").to_lowercase())).collect()
}

#[pymodule]
#[pyo3(name = "gclwb")]
fn gclwb_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Program>()?;
    m.add_class::<Outcome>()?;
    m.add_class::<VerificationCondition>()?;
    m.add_class::<Proof>()?;
    m.add_class::<Exploration>()?;
    m.add_function(wrap_pyfunction!(wp_py, m)?)?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    m.add_function(wrap_pyfunction!(ring_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(shortest_paths, m)?)?;
    m.add_function(wrap_pyfunction!(banker_safe_order, m)?)?;
    m.add_function(wrap_pyfunction!(fair_bits, m)?)?;
    m.add_function(wrap_pyfunction!(roulette, m)?)?;
    m.add_function(wrap_pyfunction!(pythagoras_signs, m)?)?;
    m.add_function(wrap_pyfunction!(sylvester_line, m)?)?;
    m.add_function(wrap_pyfunction!(knight_tour, m)?)?;
    m.add_function(wrap_pyfunction!(river_crossing, m)?)?;
    Ok(())
}

#[pyfunction(name = "wp")]
fn wp_py(statement: &str, post: &str, vars: Vec<String>) -> PyResult<String> {
    wp(statement, post, vars)
}
