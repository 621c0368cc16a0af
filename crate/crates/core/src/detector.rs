//! Sample covariance, sign scores and the first-order lowpass decision rule.
//!
//! The score of a vector is the smaller of the norms of its negative and
//! positive parts, so it vanishes exactly when the vector does not change
//! sign. The detector declares first-order lowpass (`T0`) when the top
//! covariance eigenvector scores no worse than every other eigenvector.

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{eig_sym, Eigendecomposition};

/// Eigenvalues down to `-PSD_TOL·β₁` are clamped to zero.
pub const PSD_TOL: f64 = 1e-8;
/// Eigenvectors scoring within this of the minimum count as near-positive
/// candidates when flagging an ambiguous argmin.
pub const AMBIGUITY_MARGIN: f64 = 0.05;

/// `n × m` observations, one graph signal per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalMatrix {
    data: Array2<f64>,
}

impl SignalMatrix {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        let (n, m) = data.dim();
        if n == 0 || m == 0 {
            return Err(Error::invalid(format!("signal matrix must be non-empty, got {n}x{m}")));
        }
        if let Some(((i, j), x)) = data.indexed_iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::invalid(format!("non-finite entry {x} at ({i},{j})")));
        }
        Ok(Self { data })
    }

    /// Node count.
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    /// Sample count.
    pub fn m(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.data
    }
}

/// `(1/m)·Y·Yᵀ`, after removing each row's mean when `center` is set.
pub fn sample_covariance(y: &SignalMatrix, center: bool) -> Array2<f64> {
    let m = y.m() as f64;
    let c = if center {
        let mean = y.data.mean_axis(Axis(1)).expect("m >= 1");
        let centered = &y.data - &mean.insert_axis(Axis(1));
        centered.dot(&centered.t())
    } else {
        y.data.dot(&y.data.t())
    };
    let mut c = c / m;
    // the product is symmetric up to summation order; make it exact
    let n = c.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (c[[i, j]] + c[[j, i]]);
            c[[i, j]] = avg;
            c[[j, i]] = avg;
        }
    }
    c
}

fn part_norms_l2(v: ArrayView1<f64>) -> (f64, f64) {
    let (neg, pos) = v.iter().fold((0.0, 0.0), |(n, p), &x| {
        if x < 0.0 {
            (n + x * x, p)
        } else {
            (n, p + x * x)
        }
    });
    (neg.sqrt(), pos.sqrt())
}

/// `min{‖v - (v)₊‖₂, ‖v + (-v)₊‖₂}`.
pub fn score_l2(v: ArrayView1<f64>) -> f64 {
    let (neg, pos) = part_norms_l2(v);
    neg.min(pos)
}

/// The same score measured with `‖·‖∞`.
pub fn score_linf(v: ArrayView1<f64>) -> f64 {
    let (neg, pos) = v.iter().fold((0.0f64, 0.0f64), |(n, p), &x| {
        if x < 0.0 {
            (n.max(-x), p)
        } else {
            (n, p.max(x))
        }
    });
    neg.min(pos)
}

/// Detector outcome: `T0` is "first-order lowpass".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    T0,
    T1,
}

impl Hypothesis {
    pub fn tag(self) -> u64 {
        match self {
            Hypothesis::T0 => 0,
            Hypothesis::T1 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub decision: Hypothesis,
    /// Decision of the same rule driven by [`score_linf`].
    pub decision_inf: Hypothesis,
    /// 1-based position of the smallest score (first on ties).
    pub argmin_index: usize,
    pub argmin_index_inf: usize,
    /// `Γ(v̂ᵢ)` in descending-eigenvalue order.
    pub scores: Vec<f64>,
    pub scores_inf: Vec<f64>,
    /// Covariance eigenvalues, descending, near-zero negatives clamped.
    pub eigenvalues: Vec<f64>,
    /// `β̂₁ - β̂₂`; zero flags a degenerate top eigenspace.
    pub top_gap: f64,
    /// `Tr(C)/‖C‖₂`, absent for the zero matrix.
    pub eff_rank: Option<f64>,
    /// 1-based indices whose score is within [`AMBIGUITY_MARGIN`] of the minimum.
    pub near_positive: Vec<usize>,
    /// More than one eigenvector is a near-positive candidate.
    pub ambiguous: bool,
    /// Number of eigenvectors scored; exceeds `scores.len()` after truncation.
    pub total_modes: usize,
}

impl DetectionReport {
    /// Keeps only the first `keep` entries of the per-mode arrays. The
    /// decision fields were computed on the full set and are unaffected.
    pub fn truncate_scores(&mut self, keep: usize) {
        self.scores.truncate(keep);
        self.scores_inf.truncate(keep);
        self.eigenvalues.truncate(keep);
    }
}

/// Eigenvalues (descending, clamped) and matching eigenvector columns.
fn descending(c: &Array2<f64>) -> Result<(Vec<f64>, Eigendecomposition)> {
    let eig = eig_sym(c)?;
    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.values[j].total_cmp(&eig.values[i]));
    let top = eig.values[order[0]];
    let floor = -PSD_TOL * top.abs().max(f64::MIN_POSITIVE);
    let mut values = Vec::with_capacity(n);
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut b = eig.values[src];
        if b < 0.0 {
            if b < floor && top > 0.0 {
                return Err(Error::invalid(format!(
                    "matrix is not positive semidefinite: eigenvalue {b:e} against top {top:e}"
                )));
            }
            b = 0.0;
        }
        values.push(b);
        vectors.column_mut(col).assign(&eig.vectors.column(src));
    }
    let sorted = Eigendecomposition { values: values.clone().into(), vectors };
    Ok((values, sorted))
}

fn first_argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

fn decide(scores: &[f64]) -> Hypothesis {
    let rest = scores[1..].iter().copied().fold(f64::INFINITY, f64::min);
    if scores[0] <= rest {
        Hypothesis::T0
    } else {
        Hypothesis::T1
    }
}

/// Per-mode scores `(Γ, Γ∞)` in descending-eigenvalue order.
pub fn score_profile(c: &Array2<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, eig) = descending(c)?;
    Ok(scores_of(&eig))
}

fn scores_of(eig: &Eigendecomposition) -> (Vec<f64>, Vec<f64>) {
    eig.vectors
        .columns()
        .into_iter()
        .map(|v| (score_l2(v), score_linf(v)))
        .unzip()
}

/// Runs the decision rule on a covariance matrix.
pub fn detect(c: &Array2<f64>) -> Result<DetectionReport> {
    let (eigenvalues, eig) = descending(c)?;
    let (scores, scores_inf) = scores_of(&eig);
    let n = scores.len();

    let argmin = first_argmin(&scores);
    let argmin_inf = first_argmin(&scores_inf);
    let min_score = scores[argmin];
    let near_positive: Vec<usize> = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= min_score + AMBIGUITY_MARGIN)
        .map(|(i, _)| i + 1)
        .collect();

    let top = eigenvalues[0];
    let top_gap = if n > 1 { top - eigenvalues[1] } else { 0.0 };
    let eff_rank = if top > 0.0 {
        Some((eigenvalues.iter().sum::<f64>() / top).max(1.0))
    } else {
        None
    };

    Ok(DetectionReport {
        decision: decide(&scores),
        decision_inf: decide(&scores_inf),
        argmin_index: argmin + 1,
        argmin_index_inf: argmin_inf + 1,
        ambiguous: near_positive.len() > 1,
        near_positive,
        scores,
        scores_inf,
        eigenvalues,
        top_gap,
        eff_rank,
        total_modes: n,
    })
}
