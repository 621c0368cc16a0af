//! Cross-module properties over random graph ensembles.

use gsp_lowpass::detector::{detect, Hypothesis};
use gsp_lowpass::filters::{
    classify_lowpass, experiment_filter_pair, population_covariance, synthesize_filter, FilterSetting, FrequencyResponse,
};
use gsp_lowpass::graph::{er_connection_probability, erdos_renyi, erdos_renyi_connected, Graph, GsoKind};
use gsp_lowpass::simulate::{run_sweep, run_sweep_with_threads, SweepAxis, SweepSpec, TrialConfig};
use gsp_lowpass::spectral::{eig_sym, eig_sym_jacobi, order_spectrum, sign_structure, SignStructure};
use ndarray::Array2;
use proptest::prelude::*;

fn random_connected(seed: u64, max_n: usize) -> Graph {
    let n = 5 + (seed as usize * 7) % (max_n - 4);
    erdos_renyi_connected(n, er_connection_probability(n), seed).unwrap()
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

#[test]
fn laplacian_is_psd_with_constant_null_vector() {
    for seed in 0..100 {
        let g = random_connected(seed, 50);
        let n = g.n();
        let l = g.laplacian();
        let row_sums = l.sum_axis(ndarray::Axis(1));
        assert!(row_sums.iter().all(|x| x.abs() <= 1e-12 * n as f64));
        let eig = eig_sym(&l).unwrap();
        assert!(eig.values.iter().all(|&x| x >= -1e-9 * n as f64));
        assert!(eig.orthonormality_error() < 1e-10);
        assert!(eig.reconstruction_error(&l) < 1e-9);
    }
}

#[test]
fn connectivity_matches_laplacian_null_space() {
    for seed in 0..100u64 {
        let n = 3 + (seed as usize) % 28;
        // Sparse enough that a fair share of draws are disconnected.
        let g = erdos_renyi(n, 1.2 / n as f64, seed).unwrap();
        let eig = eig_sym(&g.laplacian()).unwrap();
        let zeros = eig.values.iter().filter(|x| x.abs() < 1e-9).count();
        assert_eq!(g.is_connected(), zeros == 1, "seed {seed}, n {n}, zeros {zeros}");
    }
}

#[test]
fn solvers_agree_on_graph_operators() {
    for seed in 0..20 {
        let g = random_connected(seed, 40);
        for m in [g.laplacian(), g.adjacency()] {
            let a = eig_sym(&m).unwrap();
            let b = eig_sym_jacobi(&m).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                assert!((x - y).abs() < 1e-9);
            }
            assert!(b.reconstruction_error(&m) < 1e-9);
        }
    }
}

#[test]
fn lowest_frequency_mode_is_sign_uniform_and_others_mixed() {
    for seed in 0..200 {
        let g = random_connected(seed, 50);
        let n = g.n();
        let lap = order_spectrum(&g.laplacian(), GsoKind::Laplacian).unwrap();
        let c = 1.0 / (n as f64).sqrt();
        assert!(lap.mode(0).iter().all(|&x| (x - c).abs() < 1e-6), "seed {seed}");

        let adj = order_spectrum(&g.adjacency(), GsoKind::Adjacency).unwrap();
        assert!(adj.mode(0).iter().all(|&x| x > 0.0), "seed {seed}");

        for sp in [&lap, &adj] {
            for j in 1..n {
                assert_eq!(sign_structure(sp.mode(j)).unwrap(), SignStructure::Mixed, "seed {seed} mode {j}");
            }
        }
    }
}

#[test]
fn filter_pairs_have_the_designated_ground_truth() {
    let mut weak_min = f64::INFINITY;
    let mut strong = Vec::new();
    for seed in 0..100 {
        let g = random_connected(seed, 50);
        let mut eta = std::collections::HashMap::new();
        for setting in FilterSetting::ALL {
            let sp = order_spectrum(&g.gso(setting.gso()), setting.gso()).unwrap();
            let pair = experiment_filter_pair(setting, &g).unwrap();
            let low = classify_lowpass(&pair.lowpass, &sp, 1).unwrap();
            let high = classify_lowpass(&pair.highpass, &sp, 1).unwrap();
            assert!(low.is_first_order, "{setting:?} seed {seed}");
            assert!(!high.is_first_order, "{setting:?} seed {seed}");
            eta.insert(setting, low.eta);
            if setting.is_weak() {
                weak_min = weak_min.min(low.eta);
            } else {
                strong.push(low.eta);
            }
        }
        assert!(eta[&FilterSetting::LaplacianStrong] < eta[&FilterSetting::LaplacianWeak]);
        assert!(eta[&FilterSetting::AdjacencyStrong] < eta[&FilterSetting::AdjacencyWeak]);
    }
    assert!(weak_min > 0.5, "weak lowpass ratio {weak_min}");
    strong.sort_by(f64::total_cmp);
    let below = strong.iter().filter(|&&e| e < 0.01).count();
    println!(
        "strong lowpass ratio: min {:.3e} median {:.3e} max {:.3e}; {below}/{} below 0.01",
        strong[0],
        strong[strong.len() / 2],
        strong[strong.len() - 1],
        strong.len()
    );
    assert!(strong.iter().all(|&e| e < 1.0));
}

#[test]
fn population_covariance_is_the_filter_squared() {
    for seed in 0..30 {
        let g = random_connected(seed, 40);
        for setting in FilterSetting::ALL {
            let sp = order_spectrum(&g.gso(setting.gso()), setting.gso()).unwrap();
            let pair = experiment_filter_pair(setting, &g).unwrap();
            for r in [&pair.lowpass, &pair.highpass] {
                let f = synthesize_filter(r, &sp).unwrap();
                let direct = f.matrix.dot(&f.matrix);
                let spectral = population_covariance(&f);
                assert!(max_abs(&(&direct - &spectral)) <= 1e-8 * max_abs(&direct).max(1.0));
            }
        }
    }
}

#[test]
fn population_detection_matches_ground_truth() {
    let mut mismatches = 0;
    for seed in 0..50u64 {
        let n = [10, 20, 50][seed as usize % 3];
        let g = erdos_renyi_connected(n, er_connection_probability(n), 1000 + seed).unwrap();
        for setting in FilterSetting::ALL {
            let sp = order_spectrum(&g.gso(setting.gso()), setting.gso()).unwrap();
            let pair = experiment_filter_pair(setting, &g).unwrap();
            for r in [&pair.lowpass, &pair.highpass] {
                let truth = classify_lowpass(r, &sp, 1).unwrap().is_first_order;
                let f = synthesize_filter(r, &sp).unwrap();
                let report = detect(&population_covariance(&f)).unwrap();
                mismatches += ((report.decision == Hypothesis::T0) != truth) as usize;
            }
        }
    }
    assert_eq!(mismatches, 0);
}

fn poly(coeffs: Vec<f64>) -> FrequencyResponse {
    FrequencyResponse::Polynomial { coeffs }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn synthesis_is_linear_in_polynomial_coefficients(
        seed in 0u64..1000,
        c1 in prop::collection::vec(-1.0f64..1.0, 1..5),
        c2 in prop::collection::vec(-1.0f64..1.0, 1..5),
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let g = random_connected(seed, 25);
        let sp = order_spectrum(&g.laplacian(), GsoKind::Laplacian).unwrap();
        let len = c1.len().max(c2.len());
        let combo: Vec<f64> = (0..len)
            .map(|i| a * c1.get(i).copied().unwrap_or(0.0) + b * c2.get(i).copied().unwrap_or(0.0))
            .collect();
        let f1 = synthesize_filter(&poly(c1), &sp).unwrap().matrix;
        let f2 = synthesize_filter(&poly(c2), &sp).unwrap().matrix;
        let fc = synthesize_filter(&poly(combo), &sp).unwrap().matrix;
        let expected = a * &f1 + b * &f2;
        let scale = max_abs(&expected).max(1.0);
        prop_assert!(max_abs(&(&fc - &expected)) <= 1e-8 * scale);
    }

    #[test]
    fn graph_draws_are_reproducible(n in 2usize..40, seed in any::<u64>()) {
        let p = er_connection_probability(n);
        prop_assert_eq!(erdos_renyi(n, p, seed).unwrap(), erdos_renyi(n, p, seed).unwrap());
    }
}

#[test]
fn sweeps_are_identical_for_every_thread_count() {
    let spec = SweepSpec {
        axis: SweepAxis::M,
        grid: vec![20.0, 80.0],
        base: TrialConfig::new(FilterSetting::AdjacencyWeak, 30, 1, 0.01, 99).with_trials(12),
    };
    let reference = run_sweep_with_threads(&spec, 1).unwrap();
    for threads in [2, 3, 8] {
        assert_eq!(run_sweep_with_threads(&spec, threads).unwrap(), reference);
    }
    assert_eq!(run_sweep(&spec).unwrap(), reference);
}

#[test]
fn fixed_graph_sweeps_reuse_one_topology() {
    let mut base = TrialConfig::new(FilterSetting::LaplacianWeak, 20, 50, 0.01, 5).with_trials(4);
    base.fixed_graph = true;
    let a = gsp_lowpass::simulate::prepare_trial(&base, 0).unwrap();
    let b = gsp_lowpass::simulate::prepare_trial(&base, 3).unwrap();
    assert_eq!(a.graph, b.graph);
    base.fixed_graph = false;
    let c = gsp_lowpass::simulate::prepare_trial(&base, 3).unwrap();
    assert_ne!(a.graph, c.graph);
}

/// Statistical sanity at 200 trials. Margins absorb Monte-Carlo noise of
/// roughly `sqrt(0.25/200) ≈ 0.035` on rates.
#[test]
fn weak_filter_trends() {
    const MARGIN: f64 = 0.05;
    for setting in [FilterSetting::LaplacianWeak, FilterSetting::AdjacencyWeak] {
        let by_m = run_sweep(&SweepSpec {
            axis: SweepAxis::M,
            grid: vec![10.0, 100.0, 1000.0],
            base: TrialConfig::new(setting, 50, 1, 0.01, 31).with_trials(200),
        })
        .unwrap();
        for w in by_m.points.windows(2) {
            assert!(w[1].mean_score_t0 <= w[0].mean_score_t0 + 0.02, "{setting:?} score vs m");
            assert!(w[1].error_rate_l2 <= w[0].error_rate_l2 + MARGIN, "{setting:?} error vs m");
        }
        let by_noise = run_sweep(&SweepSpec {
            axis: SweepAxis::Sigma2,
            grid: vec![0.01, 0.25, 1.0],
            base: TrialConfig::new(setting, 50, 300, 0.0, 37).with_trials(200),
        })
        .unwrap();
        for w in by_noise.points.windows(2) {
            assert!(w[1].error_rate_l2 + MARGIN >= w[0].error_rate_l2, "{setting:?} error vs sigma2");
        }
        for p in by_m.points.iter().chain(&by_noise.points) {
            assert!(p.error_rate_l2 <= p.error_rate_linf + 0.02, "{setting:?} at {}", p.value);
            assert!((0.4..=0.8).contains(&p.mean_score_t1), "{setting:?} highpass score {}", p.mean_score_t1);
        }
    }
}
