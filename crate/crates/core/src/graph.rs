//! Undirected weighted graphs and their graph-shift operators.

use std::collections::VecDeque;

use ndarray::{Array1, Array2, Axis};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Default number of draws [`erdos_renyi_connected`] makes before giving up.
pub const DEFAULT_RETRY_CAP: u32 = 1000;

/// Which matrix plays the role of the graph-shift operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GsoKind {
    Laplacian,
    Adjacency,
}

/// An undirected graph stored as a dense symmetric non-negative weight
/// matrix with a zero diagonal. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    weights: Array2<f64>,
}

impl Graph {
    /// Validates and wraps a weight matrix.
    pub fn from_weights(weights: Array2<f64>) -> Result<Self> {
        let (rows, cols) = weights.dim();
        if rows == 0 || rows != cols {
            return Err(Error::invalid(format!(
                "weight matrix must be square and non-empty, got {rows}x{cols}"
            )));
        }
        for i in 0..rows {
            if weights[[i, i]] != 0.0 {
                return Err(Error::invalid(format!("self-loop at node {i}")));
            }
            for j in 0..rows {
                let w = weights[[i, j]];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::invalid(format!("weight ({i},{j}) = {w} is not a finite non-negative value")));
                }
                if w != weights[[j, i]] {
                    return Err(Error::invalid(format!("weights not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { weights })
    }

    /// Builds a graph on `n` nodes from undirected weighted edges.
    ///
    /// Repeated edges overwrite earlier ones; zero weights are allowed and
    /// mean "no edge".
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("graph needs at least one node"));
        }
        let mut w = Array2::zeros((n, n));
        for &(i, j, weight) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("edge ({i},{j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop at node {i}")));
            }
            w[[i, j]] = weight;
            w[[j, i]] = weight;
        }
        Self::from_weights(w)
    }

    /// Path graph 0 - 1 - ... - (n-1) with unit weights.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    /// Complete graph with unit weights.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j, 1.0));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Star with node 0 at the centre.
    pub fn star(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (0, i, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    /// Undirected edges `(i, j, w)` with `i < j` and `w > 0`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let w = self.weights[[i, j]];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Array1<f64> {
        self.weights.sum_axis(Axis(1))
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees().iter().copied().fold(0.0, f64::max)
    }

    /// `Diag(A·1) - A`.
    pub fn laplacian(&self) -> Array2<f64> {
        let mut l = -&self.weights;
        for (i, d) in self.degrees().iter().enumerate() {
            l[[i, i]] = *d;
        }
        l
    }

    pub fn adjacency(&self) -> Array2<f64> {
        self.weights.clone()
    }

    pub fn gso(&self, kind: GsoKind) -> Array2<f64> {
        match kind {
            GsoKind::Laplacian => self.laplacian(),
            GsoKind::Adjacency => self.adjacency(),
        }
    }

    /// Breadth-first search from node 0 through positive weights.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && self.weights[[u, v]] > 0.0 {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }
}

/// Connection probability `2 ln(n) / n`, clipped to 1.
pub fn er_connection_probability(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n.ln() / n).min(1.0)
}

/// Erdős–Rényi G(n, p) with unit weights.
///
/// Pairs are visited in row-major order `(0,1), (0,2), ..., (n-2,n-1)` and
/// each consumes exactly one uniform draw, so the output is a pure function
/// of `(n, p, seed)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid(format!("Erdős–Rényi graph needs n >= 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng::seeded(seed);
    let mut w = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let u: f64 = rng.random();
            if u < p {
                w[[i, j]] = 1.0;
                w[[j, i]] = 1.0;
            }
        }
    }
    Ok(Graph { weights: w })
}

/// A connected Erdős–Rényi draw together with the number of draws it took.
#[derive(Debug, Clone)]
pub struct ConnectedDraw {
    pub graph: Graph,
    pub attempts: u32,
}

/// Resamples G(n, p) until the draw is connected.
///
/// Attempt `k` (0-based) uses seed `derive_seed(seed, [TAG_RESAMPLE, k])`.
pub fn erdos_renyi_connected_with_cap(n: usize, p: f64, seed: u64, cap: u32) -> Result<ConnectedDraw> {
    for attempt in 0..cap {
        let sub = rng::derive_seed(seed, &[rng::TAG_RESAMPLE, attempt as u64]);
        let g = erdos_renyi(n, p, sub)?;
        if g.is_connected() {
            return Ok(ConnectedDraw { graph: g, attempts: attempt + 1 });
        }
    }
    Err(Error::GenerationFailed(format!(
        "no connected G({n}, {p}) draw in {cap} attempts; p is likely too small for connectivity"
    )))
}

pub fn erdos_renyi_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    erdos_renyi_connected_with_cap(n, p, seed, DEFAULT_RETRY_CAP).map(|d| d.graph)
}
