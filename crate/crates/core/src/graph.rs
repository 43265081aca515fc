//! Weighted undirected graphs, their Laplacians, twin vertices, and edge
//! perturbations.
//!
//! Graphs are simple (no self-loops, at most one edge per pair) with real
//! edge weights; a weight of exactly zero is represented as edge absence,
//! so `G + alpha{a,b}` with `alpha = -w(a,b)` deletes the edge. Vertices are
//! dense integers `0..n`. Values are immutable after construction and all
//! operations are pure.

use std::collections::BTreeMap;

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Weighted undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    // key is the canonical (min, max) pair; stored weights are never zero
    edges: BTreeMap<(usize, usize), f64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order as `(u, v, w)` with `u < v` and `w != 0`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Inserts an edge. Rejects self-loops, out-of-range endpoints, and
    /// pairs that already carry an edge. A zero weight is a no-op (absence).
    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let key = (u.min(v), u.max(v));
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        if w != 0.0 {
            self.edges.insert(key, w);
        }
        Ok(())
    }

    /// Builder-style [`add_edge`](Self::add_edge).
    pub fn with_edge(mut self, u: usize, v: usize, w: f64) -> Result<Self> {
        self.add_edge(u, v, w)?;
        Ok(self)
    }

    /// Weight of the edge `{u,v}`, zero when absent.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        self.edges
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(0.0)
    }

    /// Weighted degree: sum of incident edge weights.
    pub fn degree(&self, v: usize) -> f64 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &w)| w)
            .sum()
    }

    /// Neighbours of `v` with their weights, in vertex order.
    pub fn neighbors(&self, v: usize) -> Result<Vec<(usize, f64)>> {
        self.check_vertex(v)?;
        let mut out = Vec::new();
        for (&(a, b), &w) in &self.edges {
            if a == v {
                out.push((b, w));
            } else if b == v {
                out.push((a, w));
            }
        }
        out.sort_by_key(|&(u, _)| u);
        Ok(out)
    }

    /// Laplacian `L = D - A`: `L[u][u] = sum_v w(u,v)`, `L[u][v] = -w(u,v)`.
    pub fn laplacian(&self) -> Matrix {
        let mut l = Matrix::zeros(self.n);
        for (&(u, v), &w) in &self.edges {
            l.set(u, u, l.get(u, u) + w);
            l.set(v, v, l.get(v, v) + w);
            l.set(u, v, -w);
            l.set(v, u, -w);
        }
        l
    }

    /// Twin test: `a` and `b` are twins when every vertex outside `{a,b}`
    /// sees them with identical weight (`w(a,v) = w(b,v)` exactly; whether
    /// `a` and `b` are themselves adjacent is irrelevant). Exact comparison
    /// is deliberate: graphs are constructed, not measured.
    pub fn are_twins(&self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        for v in 0..self.n {
            if v == a || v == b {
                continue;
            }
            if self.weight(a, v) != self.weight(b, v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All twin pairs, sorted lexicographically.
    pub fn all_twin_pairs(&self) -> Vec<PairState> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.are_twins(a, b).expect("vertices in range") {
                    out.push(PairState::new(a, b).expect("a < b"));
                }
            }
        }
        out
    }

    /// Edge perturbation `G + alpha{a,b}`: adds `alpha` to the weight of the
    /// (possibly absent) edge; a resulting weight of exactly zero removes it.
    pub fn perturb(&self, p: &Perturbation) -> Result<Graph> {
        let (a, b) = (p.pair.a(), p.pair.b());
        self.check_vertex(b)?;
        let mut g = self.clone();
        let key = (a, b);
        let w = g.weight(a, b) + p.alpha;
        if w == 0.0 {
            g.edges.remove(&key);
        } else {
            g.edges.insert(key, w);
        }
        Ok(g)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange(v, self.n));
        }
        Ok(())
    }
}

/// An unordered vertex pair `{a,b}` standing for the vector `e_a - e_b`.
///
/// Stored in canonical orientation `a < b`; transfer fidelity is
/// orientation-independent while the reported phase flips sign under a
/// swap, so all phases in this crate refer to the canonical orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairState {
    a: usize,
    b: usize,
}

impl PairState {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        Ok(PairState {
            a: a.min(b),
            b: a.max(b),
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    /// Number of vertices shared with `{a,b}` of `other` (0, 1, or 2).
    pub fn overlap(&self, other: &PairState) -> usize {
        [self.a, self.b]
            .iter()
            .filter(|&&v| other.contains(v))
            .count()
    }

    /// The vector `e_a - e_b` in dimension `n`.
    pub fn vector(&self, n: usize) -> Result<Vec<f64>> {
        if self.b >= n {
            return Err(Error::VertexOutOfRange(self.b, n));
        }
        let mut x = vec![0.0; n];
        x[self.a] = 1.0;
        x[self.b] = -1.0;
        Ok(x)
    }
}

impl std::fmt::Display for PairState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// A pair plus a weight increment `alpha`; encodes the rank-1 Laplacian
/// update `alpha * (e_a - e_b)(e_a - e_b)^T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub pair: PairState,
    pub alpha: f64,
}

impl Perturbation {
    pub fn new(a: usize, b: usize, alpha: f64) -> Result<Self> {
        Ok(Perturbation {
            pair: PairState::new(a, b)?,
            alpha,
        })
    }
}
