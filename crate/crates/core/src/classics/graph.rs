use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {from} -> {to} has negative weight {weight}")]
    NegativeWeight { from: String, to: String, weight: BigRational },
    #[error("vertex {0} out of range")]
    NoSuchVertex(usize),
    #[error("unknown vertex `{0}`")]
    UnknownName(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: BigRational,
}

/// Weighted graph with named vertices. Undirected edges are stored once and
/// traversed both ways.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    pub names: Vec<String>,
    pub edges: Vec<Edge>,
    pub directed: bool,
}

impl Graph {
    pub fn new(directed: bool) -> Self {
        Graph { directed, ..Graph::default() }
    }

    /// Graph on vertices named `0..n`.
    pub fn with_vertices(n: usize, directed: bool) -> Self {
        Graph { names: (0..n).map(|i| i.to_string()).collect(), edges: Vec::new(), directed }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `name`, adding it if new.
    pub fn intern(&mut self, name: &str) -> usize {
        self.vertex(name).unwrap_or_else(|| {
            self.names.push(name.to_string());
            self.names.len() - 1
        })
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: BigRational) -> Result<(), GraphError> {
        for v in [from, to] {
            if v >= self.len() {
                return Err(GraphError::NoSuchVertex(v));
            }
        }
        if weight.is_negative() {
            return Err(GraphError::NegativeWeight {
                from: self.names[from].clone(),
                to: self.names[to].clone(),
                weight,
            });
        }
        self.edges.push(Edge { from, to, weight });
        Ok(())
    }

    /// `(neighbour, weight)` lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, &BigRational)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.from].push((e.to, &e.weight));
            if !self.directed {
                adj[e.to].push((e.from, &e.weight));
            }
        }
        adj
    }

    /// Parse a TSV edge list: a `directed: true|false` header, then
    /// `u<TAB>v<TAB>w` lines. Weights may be integers or fractions `p/q`;
    /// blank lines and `#` comments are ignored.
    pub fn parse_tsv(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (line, header) = lines.next().ok_or(GraphError::Syntax { line: 1, msg: "missing header".into() })?;
        let directed = match header.split_once(':').map(|(k, v)| (k.trim(), v.trim())) {
            Some(("directed", "true")) => true,
            Some(("directed", "false")) => false,
            _ => return Err(GraphError::Syntax { line, msg: "expected `directed: true` or `directed: false`".into() }),
        };
        let mut g = Graph::new(directed);
        for (line, l) in lines {
            let fields: Vec<&str> = l.split('\t').map(str::trim).collect();
            let [u, v, w] = fields[..] else {
                return Err(GraphError::Syntax {
                    line,
                    msg: format!("expected 3 tab-separated fields, got {}", fields.len()),
                });
            };
            let weight =
                parse_weight(w).ok_or_else(|| GraphError::Syntax { line, msg: format!("bad weight `{w}`") })?;
            let (a, b) = (g.intern(u), g.intern(v));
            g.add_edge(a, b, weight)?;
        }
        Ok(g)
    }
}

fn parse_weight(w: &str) -> Option<BigRational> {
    match w.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(w.parse().ok()?)),
    }
}

/// Distance (`None` when unreachable) and predecessor of every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<Option<BigRational>>,
    pub pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    /// Vertices from the source to `target`, if reachable.
    pub fn path(&self, target: usize) -> Option<Vec<usize>> {
        self.dist[target].as_ref()?;
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = self.pred[v] {
            path.push(p);
            v = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Dijkstra's algorithm with a lazy-deletion binary heap.
pub fn shortest_paths(g: &Graph, source: usize) -> Result<ShortestPaths, GraphError> {
    if source >= g.len() {
        return Err(GraphError::NoSuchVertex(source));
    }
    let adj = g.adjacency();
    let mut dist: Vec<Option<BigRational>> = vec![None; g.len()];
    let mut pred = vec![None; g.len()];
    let mut done = vec![false; g.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(BigRational::zero());
    heap.push(Reverse((BigRational::zero(), source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &(w, weight) in &adj[v] {
            let nd = &d + weight;
            if dist[w].as_ref().is_none_or(|old| nd < *old) {
                dist[w] = Some(nd.clone());
                pred[w] = Some(v);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    Ok(ShortestPaths { source, dist, pred })
}

/// Shortest paths by name, for callers working with parsed graphs.
pub fn shortest_paths_from(g: &Graph, source: &str) -> Result<ShortestPaths, GraphError> {
    let s = g.vertex(source).ok_or_else(|| GraphError::UnknownName(source.to_string()))?;
    shortest_paths(g, s)
}
