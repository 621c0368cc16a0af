//! Signal generation and Monte-Carlo experiments.
//!
//! A trial draws a connected Erdős–Rényi graph with `p = 2 ln(n)/n`, builds
//! the lowpass/highpass pair for the chosen setting, filters white Gaussian
//! excitations through the member selected by the hypothesis, adds white
//! noise, and runs the detector on the uncentered sample covariance.
//!
//! Seeding: a sweep point's seed is `derive_seed(seed, [axis, value])`. Within
//! a point, trial `t` draws its graph from `derive_seed(point, [GRAPH, t])`
//! and its signals from `derive_seed(point, [SIGNAL, t, hypothesis])`, so
//! both hypotheses of a trial see the same graph and results do not depend on
//! how trials are scheduled across threads.

use ndarray::Array2;
use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{detect, sample_covariance, Hypothesis, SignalMatrix};
use crate::error::{Error, Result};
use crate::filters::{experiment_filter_pair, population_covariance, synthesize_filter, FilterPair, FilterSetting};
use crate::graph::{er_connection_probability, erdos_renyi_connected, Graph, GsoKind};
use crate::rng::{self, derive_seed};
use crate::spectral::{davis_kahan_bound, eig_sym, order_spectrum, OrderedSpectrum};

pub const DEFAULT_TRIALS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub n: usize,
    pub m: usize,
    pub sigma2: f64,
    pub setting: FilterSetting,
    pub seed: u64,
    pub trials: usize,
    /// Reuse one graph for every trial instead of drawing a fresh one.
    #[serde(default)]
    pub fixed_graph: bool,
}

impl TrialConfig {
    pub fn new(setting: FilterSetting, n: usize, m: usize, sigma2: f64, seed: u64) -> Self {
        Self { n, m, sigma2, setting, seed, trials: DEFAULT_TRIALS, fixed_graph: false }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn gso(&self) -> GsoKind {
        self.setting.gso()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("n must be >= 2, got {}", self.n)));
        }
        if self.m < 1 {
            return Err(Error::invalid("m must be >= 1"));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(Error::invalid(format!("sigma2 must be finite and >= 0, got {}", self.sigma2)));
        }
        if self.trials < 1 {
            return Err(Error::invalid("trials must be >= 1"));
        }
        Ok(())
    }

    fn graph_seed(&self, trial: usize) -> u64 {
        if self.fixed_graph {
            derive_seed(self.seed, &[rng::TAG_GRAPH])
        } else {
            derive_seed(self.seed, &[rng::TAG_GRAPH, trial as u64])
        }
    }

    fn signal_seed(&self, trial: usize, hyp: Hypothesis) -> u64 {
        derive_seed(self.seed, &[rng::TAG_SIGNAL, trial as u64, hyp.tag()])
    }
}

/// `Y = H·X + σ·W` with `X`, `W` i.i.d. standard normal, `n × m`.
///
/// `X` is filled row-major first, then `W`; with `sigma2 == 0` no noise is
/// drawn.
pub fn generate_signals(h: &Array2<f64>, m: usize, sigma2: f64, seed: u64) -> Result<SignalMatrix> {
    if !(sigma2 >= 0.0) || !sigma2.is_finite() {
        return Err(Error::invalid(format!("sigma2 must be finite and >= 0, got {sigma2}")));
    }
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::invalid("filter matrix must be square"));
    }
    let mut rng = rng::seeded(seed);
    let x = Array2::from_shape_simple_fn((n, m), || rng.sample::<f64, _>(StandardNormal));
    let mut y = h.dot(&x);
    if sigma2 > 0.0 {
        let sigma = sigma2.sqrt();
        for v in y.iter_mut() {
            let w: f64 = rng.sample(StandardNormal);
            *v += sigma * w;
        }
    }
    SignalMatrix::new(y)
}

/// Graph, spectrum and filter pair shared by both hypotheses of a trial.
#[derive(Debug, Clone)]
pub struct TrialContext {
    pub graph: Graph,
    pub spectrum: OrderedSpectrum,
    pub pair: FilterPair,
}

pub fn prepare_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialContext> {
    cfg.validate()?;
    let graph = erdos_renyi_connected(cfg.n, er_connection_probability(cfg.n), cfg.graph_seed(trial))?;
    let spectrum = order_spectrum(&graph.gso(cfg.gso()), cfg.gso())?;
    let pair = experiment_filter_pair(cfg.setting, &graph)?;
    Ok(TrialContext { graph, spectrum, pair })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// `Γ(v̂₁)`.
    pub score_top: f64,
    pub decided: Hypothesis,
    pub decided_inf: Hypothesis,
}

fn run_in_context(cfg: &TrialConfig, ctx: &TrialContext, hyp: Hypothesis, trial: usize) -> Result<TrialOutcome> {
    let response = match hyp {
        Hypothesis::T0 => &ctx.pair.lowpass,
        Hypothesis::T1 => &ctx.pair.highpass,
    };
    let filter = synthesize_filter(response, &ctx.spectrum)?;
    let y = generate_signals(&filter.matrix, cfg.m, cfg.sigma2, cfg.signal_seed(trial, hyp))?;
    let report = detect(&sample_covariance(&y, false))?;
    Ok(TrialOutcome {
        score_top: report.scores[0],
        decided: report.decision,
        decided_inf: report.decision_inf,
    })
}

/// One trial under one hypothesis.
pub fn run_trial(cfg: &TrialConfig, hyp: Hypothesis, trial: usize) -> Result<TrialOutcome> {
    let ctx = prepare_trial(cfg, trial)?;
    run_in_context(cfg, &ctx, hyp, trial)
}

/// Both hypotheses of a trial on a shared graph; identical to two
/// [`run_trial`] calls.
pub fn run_trial_pair(cfg: &TrialConfig, trial: usize) -> Result<(TrialOutcome, TrialOutcome)> {
    let ctx = prepare_trial(cfg, trial)?;
    Ok((
        run_in_context(cfg, &ctx, Hypothesis::T0, trial)?,
        run_in_context(cfg, &ctx, Hypothesis::T1, trial)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    N,
    M,
    Sigma2,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::N => "n",
            SweepAxis::M => "m",
            SweepAxis::Sigma2 => "sigma2",
        }
    }

    fn tag(self) -> u64 {
        match self {
            SweepAxis::N => 1,
            SweepAxis::M => 2,
            SweepAxis::Sigma2 => 3,
        }
    }

    /// `base` with this axis set to `value` and the point seed derived.
    pub fn apply(self, base: &TrialConfig, value: f64) -> Result<TrialConfig> {
        let mut cfg = base.clone();
        let as_count = |v: f64, min: usize| -> Result<usize> {
            if v.fract() != 0.0 || v < min as f64 || !v.is_finite() {
                return Err(Error::invalid(format!("{} must be an integer >= {min}, got {v}", self.name())));
            }
            Ok(v as usize)
        };
        match self {
            SweepAxis::N => cfg.n = as_count(value, 2)?,
            SweepAxis::M => cfg.m = as_count(value, 1)?,
            SweepAxis::Sigma2 => cfg.sigma2 = value,
        }
        cfg.seed = derive_seed(base.seed, &[self.tag(), value.to_bits()]);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Aggregates at one grid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    /// Mean `Γ(v̂₁)` with the lowpass member.
    pub mean_score_t0: f64,
    /// Mean `Γ(v̂₁)` with the highpass member.
    pub mean_score_t1: f64,
    /// `0.5·P(T̂=T1|T0) + 0.5·P(T̂=T0|T1)` for the ℓ₂ detector.
    pub error_rate_l2: f64,
    pub error_rate_linf: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub setting: FilterSetting,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub base: TrialConfig,
}

/// Runs `base.trials` trial pairs at every grid value.
///
/// Trials may run on any number of threads; results are reduced in trial
/// order so the output is bit-identical for every thread count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.grid.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    spec.base.validate()?;
    let mut points = Vec::with_capacity(spec.grid.len());
    for &value in &spec.grid {
        let cfg = spec.axis.apply(&spec.base, value)?;
        let outcomes: Vec<(TrialOutcome, TrialOutcome)> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial_pair(&cfg, t))
            .collect::<Result<_>>()?;
        points.push(aggregate(value, &outcomes));
    }
    Ok(SweepResult { axis: spec.axis, setting: spec.base.setting, points })
}

/// As [`run_sweep`], on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_sweep(spec))
}

fn aggregate(value: f64, outcomes: &[(TrialOutcome, TrialOutcome)]) -> SweepPoint {
    let t = outcomes.len() as f64;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let (mut miss, mut false_alarm, mut miss_inf, mut false_alarm_inf) = (0usize, 0usize, 0usize, 0usize);
    for (o0, o1) in outcomes {
        s0 += o0.score_top;
        s1 += o1.score_top;
        miss += (o0.decided == Hypothesis::T1) as usize;
        false_alarm += (o1.decided == Hypothesis::T0) as usize;
        miss_inf += (o0.decided_inf == Hypothesis::T1) as usize;
        false_alarm_inf += (o1.decided_inf == Hypothesis::T0) as usize;
    }
    SweepPoint {
        value,
        mean_score_t0: s0 / t,
        mean_score_t1: s1 / t,
        error_rate_l2: 0.5 * (miss as f64 / t) + 0.5 * (false_alarm as f64 / t),
        error_rate_linf: 0.5 * (miss_inf as f64 / t) + 0.5 * (false_alarm_inf as f64 / t),
        trials: outcomes.len(),
    }
}

/// Davis–Kahan check on the top eigenvector for one lowpass trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationDiagnostic {
    /// `‖Ĉ - (H² + σ²I)‖₂`.
    pub pert: f64,
    /// `β₁ - β₂` of `H² + σ²I`.
    pub gap: f64,
    pub bound: f64,
    /// `‖v̂₁ - v̄₁‖₂` after aligning signs so `v̂₁ᵀv̄₁ >= 0`.
    pub realized: f64,
}

impl PerturbationDiagnostic {
    /// The bound is informative only below `√2`.
    pub fn is_informative(&self) -> bool {
        self.bound < std::f64::consts::SQRT_2
    }

    pub fn holds(&self) -> bool {
        self.realized <= self.bound
    }
}

pub fn perturbation_diagnostic(cfg: &TrialConfig, hyp: Hypothesis, trial: usize) -> Result<PerturbationDiagnostic> {
    let ctx = prepare_trial(cfg, trial)?;
    let response = match hyp {
        Hypothesis::T0 => &ctx.pair.lowpass,
        Hypothesis::T1 => &ctx.pair.highpass,
    };
    let filter = synthesize_filter(response, &ctx.spectrum)?;
    let mut pop = population_covariance(&filter);
    pop.diag_mut().mapv_inplace(|x| x + cfg.sigma2);
    let y = generate_signals(&filter.matrix, cfg.m, cfg.sigma2, cfg.signal_seed(trial, hyp))?;
    let sample = sample_covariance(&y, false);

    let diff = eig_sym(&(&sample - &pop))?;
    let pert = diff.values.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()));

    let pe = eig_sym(&pop)?;
    let n = pe.values.len();
    let beta: Vec<f64> = pe.values.iter().rev().copied().collect();
    let bound = davis_kahan_bound(&beta, 1, pert)?;
    let gap = if n > 1 { beta[0] - beta[1] } else { f64::INFINITY };

    let se = eig_sym(&sample)?;
    let v_pop = pe.vectors.column(n - 1);
    let v_hat = se.vectors.column(n - 1);
    let sign = if v_hat.dot(&v_pop) >= 0.0 { 1.0 } else { -1.0 };
    let realized = v_hat
        .iter()
        .zip(v_pop.iter())
        .map(|(a, b)| (sign * a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(PerturbationDiagnostic { pert, gap, bound, realized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
        (a - b).iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    #[test]
    fn zero_filter_no_noise() {
        let y = generate_signals(&Array2::zeros((3, 3)), 5, 0.0, 1).unwrap();
        assert!(y.data().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn white_signals_have_identity_covariance() {
        let y = generate_signals(&Array2::eye(2), 100_000, 0.0, 17).unwrap();
        let c = sample_covariance(&y, false);
        assert!(max_diff(&c, &Array2::eye(2)) < 0.05, "{c}");

        let y = generate_signals(&Array2::eye(2), 100_000, 1.0, 18).unwrap();
        let c = sample_covariance(&y, false);
        assert!(max_diff(&c, &(2.0 * Array2::<f64>::eye(2))) < 0.1, "{c}");
    }

    #[test]
    fn standard_normal_law_of_large_numbers() {
        let y = generate_signals(&Array2::eye(3), 100_000, 0.0, 3).unwrap();
        let c = sample_covariance(&y, false);
        assert!(max_diff(&c, &Array2::eye(3)) < 0.05);
    }

    #[test]
    fn signals_are_deterministic() {
        let h = Array2::from_shape_fn((4, 4), |(i, j)| (i + j) as f64 * 0.1);
        let a = generate_signals(&h, 10, 0.5, 9).unwrap();
        let b = generate_signals(&h, 10, 0.5, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_signals(&h, 10, 0.5, 10).unwrap());
    }

    #[test]
    fn trial_pair_matches_single_trials() {
        let cfg = TrialConfig::new(FilterSetting::AdjacencyWeak, 30, 100, 0.01, 5);
        let (a, b) = run_trial_pair(&cfg, 3).unwrap();
        assert_eq!(a, run_trial(&cfg, Hypothesis::T0, 3).unwrap());
        assert_eq!(b, run_trial(&cfg, Hypothesis::T1, 3).unwrap());
    }

    #[test]
    fn strong_laplacian_lowpass_is_detected() {
        let cfg = TrialConfig::new(FilterSetting::LaplacianStrong, 100, 1000, 0.01, 21);
        for t in 0..3 {
            let o = run_trial(&cfg, Hypothesis::T0, t).unwrap();
            assert!(o.score_top < 1e-6);
            assert_eq!(o.decided, Hypothesis::T0);
        }
    }

    #[test]
    fn sweep_is_thread_count_independent() {
        let spec = SweepSpec {
            axis: SweepAxis::M,
            grid: vec![10.0, 50.0],
            base: TrialConfig::new(FilterSetting::LaplacianWeak, 20, 10, 0.01, 77).with_trials(6),
        };
        let a = run_sweep_with_threads(&spec, 1).unwrap();
        let b = run_sweep_with_threads(&spec, 3).unwrap();
        assert_eq!(a, b);
        for p in &a.points {
            assert!((0.0..=1.0).contains(&p.error_rate_l2));
            assert!((0.0..=1.0).contains(&p.mean_score_t0));
        }
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let base = TrialConfig::new(FilterSetting::LaplacianWeak, 20, 10, 0.01, 1).with_trials(1);
        let mut spec = SweepSpec { axis: SweepAxis::N, grid: vec![], base };
        assert!(run_sweep(&spec).is_err());
        spec.grid = vec![1.0];
        assert!(run_sweep(&spec).is_err());
        spec.grid = vec![10.5];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = TrialConfig::new(FilterSetting::LaplacianWeak, 20, 10, 0.01, 1);
        assert!(cfg.validate().is_ok());
        cfg.sigma2 = -1.0;
        assert!(cfg.validate().is_err());
        cfg.sigma2 = 0.0;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn perturbation_bound_holds_on_a_few_trials() {
        let cfg = TrialConfig::new(FilterSetting::LaplacianWeak, 30, 500, 0.01, 8);
        for t in 0..5 {
            let d = perturbation_diagnostic(&cfg, Hypothesis::T0, t).unwrap();
            assert!(d.pert > 0.0 && d.gap > 0.0);
            if d.is_informative() {
                assert!(d.holds(), "{d:?}");
            }
        }
    }
}
