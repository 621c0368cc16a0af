//! Blind detection of first-order lowpass graph filters.
//!
//! Given only graph signals (no topology), decide whether the filter that
//! produced them passes exactly the lowest graph frequency. The test rests on
//! the sign structure of sample-covariance eigenvectors: under a first-order
//! lowpass filter on a connected graph, the top eigenvector is the only one
//! whose entries share a sign.
//!
//! Modules:
//! - [`graph`]: graphs, Laplacian/adjacency shift operators, Erdős–Rényi draws.
//! - [`spectral`]: symmetric eigensolvers, frequency ordering, perturbation diagnostics.
//! - [`filters`]: frequency responses, spectral filter synthesis, lowpass ground truth.
//! - [`detector`]: sample covariance, sign scores and the decision rule.
//! - [`simulate`]: signal generation and Monte-Carlo sweeps.
//! - [`io`]: CSV/JSON/SVG formats and run manifests.
//! - [`cli`]: command-line entry points.

pub mod cli;
pub mod detector;
pub mod error;
pub mod filters;
pub mod graph;
pub mod io;
pub mod rng;
pub mod simulate;
pub mod spectral;

pub use detector::{detect, sample_covariance, score_l2, score_linf, DetectionReport, Hypothesis, SignalMatrix};
pub use error::{Error, Result};
pub use filters::{FilterMatrix, FilterSetting, FrequencyResponse, LowpassVerdict};
pub use graph::{Graph, GsoKind};
pub use spectral::{Eigendecomposition, OrderedSpectrum};
