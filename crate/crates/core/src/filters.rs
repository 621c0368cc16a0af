//! Frequency responses, spectral synthesis of graph filters, and the lowpass
//! ground truth.
//!
//! Every filter, polynomial or not, is built as `V·Diag(h(λ))·Vᵀ` from an
//! [`OrderedSpectrum`], so the response values used for classification are
//! exactly the ones the synthesized matrix applies.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GsoKind};
use crate::spectral::{rebuild, OrderedSpectrum};

/// Denominators smaller than this in magnitude are treated as poles.
pub const POLE_TOL: f64 = 1e-12;
/// Passband magnitudes below this make the lowpass ratio undefined.
pub const PASSBAND_TOL: f64 = 1e-14;
/// Exponential responses are rescaled by `e^{-max exponent}` only when the
/// largest exponent exceeds this, keeping `h²` inside double range.
pub const EXP_SHIFT_LIMIT: f64 = 300.0;

/// Shift form used by the resolvent and linear responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftKind {
    /// `I + αL`
    IplusAlphaL,
    /// `I - αA`
    IminusAlphaA,
}

impl ShiftKind {
    pub fn gso(self) -> GsoKind {
        match self {
            ShiftKind::IplusAlphaL => GsoKind::Laplacian,
            ShiftKind::IminusAlphaA => GsoKind::Adjacency,
        }
    }

    fn apply(self, alpha: f64, lambda: f64) -> f64 {
        match self {
            ShiftKind::IplusAlphaL => 1.0 + alpha * lambda,
            ShiftKind::IminusAlphaA => 1.0 - alpha * lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExpSign {
    Plus,
    Minus,
}

/// Scalar frequency response `h(λ)`.
///
/// Serializes as `{"form": <variant>, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "params")]
pub enum FrequencyResponse {
    /// `Σ hₜ λᵗ`, coefficients from degree 0 upwards.
    Polynomial { coeffs: Vec<f64> },
    /// `1/(1 + αλ)` or `1/(1 - αλ)`.
    InverseShift { alpha: f64, kind: ShiftKind },
    /// `1 + αλ` or `1 - αλ`.
    LinearShift { alpha: f64, kind: ShiftKind },
    /// `e^{±τλ}`.
    Exponential { tau: f64, sign: ExpSign, applied_to: GsoKind },
}

impl FrequencyResponse {
    /// The shift operator the response is tied to, if any.
    pub fn gso(&self) -> Option<GsoKind> {
        match self {
            FrequencyResponse::Polynomial { .. } => None,
            FrequencyResponse::InverseShift { kind, .. } | FrequencyResponse::LinearShift { kind, .. } => {
                Some(kind.gso())
            }
            FrequencyResponse::Exponential { applied_to, .. } => Some(*applied_to),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("{what} must be finite, got {x}")))
            }
        };
        match self {
            FrequencyResponse::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return Err(Error::invalid("polynomial response needs at least one coefficient"));
                }
                coeffs.iter().try_for_each(|&c| finite(c, "coefficient"))
            }
            FrequencyResponse::InverseShift { alpha, .. } | FrequencyResponse::LinearShift { alpha, .. } => {
                finite(*alpha, "alpha")
            }
            FrequencyResponse::Exponential { tau, .. } => finite(*tau, "tau"),
        }
    }

    fn exponent(&self, lambda: f64) -> Option<f64> {
        match self {
            FrequencyResponse::Exponential { tau, sign, .. } => Some(match sign {
                ExpSign::Plus => tau * lambda,
                ExpSign::Minus => -tau * lambda,
            }),
            _ => None,
        }
    }

    /// `h(λ)`.
    pub fn evaluate(&self, lambda: f64) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            FrequencyResponse::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &c| acc * lambda + c),
            FrequencyResponse::InverseShift { alpha, kind } => {
                let den = kind.apply(*alpha, lambda);
                if den.abs() < POLE_TOL {
                    return Err(Error::SingularResponse { lambda });
                }
                1.0 / den
            }
            FrequencyResponse::LinearShift { alpha, kind } => kind.apply(*alpha, lambda),
            FrequencyResponse::Exponential { .. } => self.exponent(lambda).map(f64::exp).unwrap_or_default(),
        })
    }

    /// `h` on every frequency, plus the natural log of the factor divided
    /// out (non-zero only for exponentials that would otherwise overflow).
    pub fn values_on(&self, freqs: &Array1<f64>) -> Result<(Array1<f64>, f64)> {
        self.validate()?;
        if let FrequencyResponse::Exponential { .. } = self {
            let exps: Vec<f64> = freqs.iter().map(|&l| self.exponent(l).unwrap_or_default()).collect();
            let top = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let shift = if top > EXP_SHIFT_LIMIT { top } else { 0.0 };
            return Ok((exps.into_iter().map(|e| (e - shift).exp()).collect(), shift));
        }
        if let FrequencyResponse::InverseShift { alpha, kind: ShiftKind::IplusAlphaL } = self {
            // the resolvent of I + αL must stay positive definite
            if let Some(&lambda) = freqs.iter().find(|&&l| 1.0 + alpha * l <= POLE_TOL) {
                return Err(Error::SingularResponse { lambda });
            }
        }
        let vals = freqs.iter().map(|&l| self.evaluate(l)).collect::<Result<Vec<_>>>()?;
        Ok((Array1::from(vals), 0.0))
    }
}

/// `H(S) = V·Diag(h(λ))·Vᵀ` with the data it came from.
#[derive(Debug, Clone)]
pub struct FilterMatrix {
    pub matrix: Array2<f64>,
    pub response: FrequencyResponse,
    pub spectrum: OrderedSpectrum,
    /// `h(freqs)`, divided by `e^{log_scale}`.
    pub response_values: Array1<f64>,
    pub log_scale: f64,
}

impl FilterMatrix {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |H - V·Diag(h)·Vᵀ|`, recomputed from the stored spectrum.
    pub fn reconstruction_error(&self) -> f64 {
        let r = rebuild(&self.spectrum.modes, self.response_values.view());
        (&r - &self.matrix).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }
}

fn check_kind(r: &FrequencyResponse, sp: &OrderedSpectrum) -> Result<()> {
    match r.gso() {
        Some(k) if k != sp.kind => Err(Error::invalid(format!(
            "response is defined on the {k:?} but the spectrum is of the {:?}",
            sp.kind
        ))),
        _ => Ok(()),
    }
}

pub fn synthesize_filter(r: &FrequencyResponse, sp: &OrderedSpectrum) -> Result<FilterMatrix> {
    check_kind(r, sp)?;
    let (values, log_scale) = r.values_on(&sp.freqs)?;
    let matrix = rebuild(&sp.modes, values.view());
    Ok(FilterMatrix {
        matrix,
        response: r.clone(),
        spectrum: sp.clone(),
        response_values: values,
        log_scale,
    })
}

/// `H² = V·Diag(h(λ)²)·Vᵀ`, the covariance of the noiseless filter output
/// under white excitation (in units of `e^{2·log_scale}`).
pub fn population_covariance(f: &FilterMatrix) -> Array2<f64> {
    let sq = f.response_values.mapv(|h| h * h);
    rebuild(&f.spectrum.modes, sq.view())
}

/// Lowpass classification at a cutoff index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowpassVerdict {
    /// 1-based cutoff index `K`.
    pub cutoff: usize,
    /// `max_{i>K} |h(λᵢ)| / min_{i≤K} |h(λᵢ)|`.
    pub eta: f64,
    pub is_lowpass: bool,
    pub is_first_order: bool,
}

pub fn classify_lowpass(r: &FrequencyResponse, sp: &OrderedSpectrum, cutoff: usize) -> Result<LowpassVerdict> {
    let n = sp.n();
    if cutoff == 0 || cutoff >= n {
        return Err(Error::invalid(format!("cutoff {cutoff} must lie in 1..={}", n.saturating_sub(1))));
    }
    check_kind(r, sp)?;
    let (values, _) = r.values_on(&sp.freqs)?;
    let (eta, is_lowpass) = if let FrequencyResponse::Exponential { .. } = r {
        // Exponentials never vanish; compare exponents so underflow of the
        // scaled values cannot masquerade as a zero passband.
        let e: Vec<f64> = sp.freqs.iter().filter_map(|&l| r.exponent(l)).collect();
        let pass = e[..cutoff].iter().copied().fold(f64::INFINITY, f64::min);
        let stop = e[cutoff..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ((stop - pass).exp(), stop < pass)
    } else {
        let pass = values.iter().take(cutoff).fold(f64::INFINITY, |acc, h| acc.min(h.abs()));
        if pass < PASSBAND_TOL {
            return Err(Error::DegeneratePassband { min_magnitude: pass });
        }
        let stop = values.iter().skip(cutoff).fold(0.0, |acc: f64, h| acc.max(h.abs()));
        let eta = stop / pass;
        (eta, eta < 1.0)
    };
    Ok(LowpassVerdict {
        cutoff,
        eta,
        is_lowpass,
        is_first_order: is_lowpass && cutoff == 1,
    })
}

/// The four lowpass/highpass filter pairs of the synthetic experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterSetting {
    LaplacianWeak,
    AdjacencyWeak,
    LaplacianStrong,
    AdjacencyStrong,
}

impl FilterSetting {
    pub const ALL: [FilterSetting; 4] = [
        FilterSetting::LaplacianWeak,
        FilterSetting::AdjacencyWeak,
        FilterSetting::LaplacianStrong,
        FilterSetting::AdjacencyStrong,
    ];

    pub fn gso(self) -> GsoKind {
        match self {
            FilterSetting::LaplacianWeak | FilterSetting::LaplacianStrong => GsoKind::Laplacian,
            FilterSetting::AdjacencyWeak | FilterSetting::AdjacencyStrong => GsoKind::Adjacency,
        }
    }

    pub fn is_weak(self) -> bool {
        matches!(self, FilterSetting::LaplacianWeak | FilterSetting::AdjacencyWeak)
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterSetting::LaplacianWeak => "LaplacianWeak",
            FilterSetting::AdjacencyWeak => "AdjacencyWeak",
            FilterSetting::LaplacianStrong => "LaplacianStrong",
            FilterSetting::AdjacencyStrong => "AdjacencyStrong",
        }
    }
}

impl std::str::FromStr for FilterSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FilterSetting::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown filter setting {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub lowpass: FrequencyResponse,
    pub highpass: FrequencyResponse,
    /// `α = 0.5/d_max` for weak pairs, `τ = 10/d_max` for strong pairs.
    pub parameter: f64,
}

/// Weak pairs: `(I+αL)^{-1}` vs `I+αL` and `(I-αA)^{-1}` vs `I-αA`.
/// Strong pairs: `e^{-τL}` vs `e^{τL}` and `e^{τA}` vs `e^{-τA}`.
pub fn experiment_filter_pair(setting: FilterSetting, g: &Graph) -> Result<FilterPair> {
    let dmax = g.max_degree();
    if !(dmax > 0.0) {
        return Err(Error::invalid("filter pairs need a graph with at least one edge"));
    }
    use FrequencyResponse::*;
    Ok(match setting {
        FilterSetting::LaplacianWeak | FilterSetting::AdjacencyWeak => {
            let alpha = 0.5 / dmax;
            let kind = if setting == FilterSetting::LaplacianWeak {
                ShiftKind::IplusAlphaL
            } else {
                ShiftKind::IminusAlphaA
            };
            FilterPair {
                lowpass: InverseShift { alpha, kind },
                highpass: LinearShift { alpha, kind },
                parameter: alpha,
            }
        }
        FilterSetting::LaplacianStrong => {
            let tau = 10.0 / dmax;
            let applied_to = GsoKind::Laplacian;
            FilterPair {
                lowpass: Exponential { tau, sign: ExpSign::Minus, applied_to },
                highpass: Exponential { tau, sign: ExpSign::Plus, applied_to },
                parameter: tau,
            }
        }
        FilterSetting::AdjacencyStrong => {
            let tau = 10.0 / dmax;
            let applied_to = GsoKind::Adjacency;
            FilterPair {
                lowpass: Exponential { tau, sign: ExpSign::Plus, applied_to },
                highpass: Exponential { tau, sign: ExpSign::Minus, applied_to },
                parameter: tau,
            }
        }
    })
}
