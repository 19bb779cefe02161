use pfsim_core::experiment::*;
use pfsim_core::pf::SlitGeometry;
use pfsim_core::rng::RngStream;
use pfsim_core::trajectory::PropagationMode;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn presets() -> [(&'static str, RunConfig); 2] {
    [("electron", RunConfig::electron()), ("neon", RunConfig::neon())]
}

#[test]
fn summaries_do_not_depend_on_worker_count() {
    for (_, mut config) in presets() {
        config.seed = 5;
        let reference = run_with_workers(&config, 1).unwrap();
        for workers in [2, 8] {
            let other = run_with_workers(&config, workers).unwrap();
            assert_eq!(other.events, reference.events);
            assert_eq!(
                serde_json::to_string(&other.summary).unwrap(),
                serde_json::to_string(&reference.summary).unwrap()
            );
        }
    }
}

#[test]
fn expected_counts_sum_to_particle_count() {
    for (_, config) in presets() {
        let out = run(&config).unwrap();
        let h = &out.summary.histogram;
        assert_eq!(h.total(), config.n_particles);
        let expected: f64 = h.expected.iter().sum();
        assert!((expected / config.n_particles as f64 - 1.0).abs() < 1e-6);
        assert!(h.edges.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn million_events_match_expectation_per_pooled_bin() {
    for (name, mut config) in presets() {
        config.n_particles = 1_000_000;
        config.seed = 77;
        let out = run(&config).unwrap();
        let h = &out.summary.histogram;
        for (count, expected) in pool_bins(&h.counts, &h.expected, POOLING_THRESHOLD) {
            let dev = (count as f64 - expected).abs() / expected;
            assert!(dev < 5.0 / expected.sqrt(), "{name}: {count} vs {expected}");
        }
        assert_eq!(out.summary.verdict, Verdict::Pass, "{name}");
    }
}

#[test]
fn expected_profile_is_symmetric_about_midpoint() {
    for (_, config) in presets() {
        let a = Analysis::new(&config).unwrap();
        let p = &a.bin_probabilities;
        let n = p.len();
        let top = p.iter().copied().fold(0.0, f64::max);
        for i in 0..n / 2 {
            assert!((p[i] - p[n - 1 - i]).abs() < 1e-6 * top, "bin {i}");
        }
        let (lo, hi) = a.screen.support().unwrap();
        let mid = config.geometry.midpoint();
        for k in 1..100 {
            let y = (hi - mid) * k as f64 / 100.0;
            let (l, r) = (a.screen.density(mid - y), a.screen.density(mid + y));
            assert!((l - r).abs() <= 1e-6 * a.screen.density(mid), "y={y}");
        }
        assert!((mid - lo - (hi - mid)).abs() < 1e-15);
    }
}

#[test]
fn uniform_hits_fail_the_fringed_expectation() {
    for (_, config) in presets() {
        let a = Analysis::new(&config).unwrap();
        let (lo, hi) = (a.edges[0], a.edges[a.edges.len() - 1]);
        let mut rng = RngStream::new(3, 0);
        let ys: Vec<f64> = (0..config.n_particles)
            .map(|_| lo + (hi - lo) * rng.next_f64())
            .collect();
        let hist = ScreenHistogram {
            edges: a.edges.clone(),
            counts: bin_counts(&a.edges, ys),
            expected: a
                .bin_probabilities
                .iter()
                .map(|p| p * config.n_particles as f64)
                .collect(),
        };
        assert_eq!(goodness_of_fit(&hist).verdict, Verdict::Fail);
    }
}

#[test]
fn single_particle_run_is_degenerate_but_defined() {
    let mut config = RunConfig::neon();
    config.n_particles = 1;
    let out = run(&config).unwrap();
    let s = &out.summary;
    assert_eq!(s.histogram.total(), 1);
    assert_eq!(s.verdict, Verdict::Unavailable);
    assert_eq!(s.chi_square, None);
    assert!(s.fringe_spacing.is_some());
    assert_eq!(s.provenance.n_particles, 1);
}

#[test]
fn critical_values_match_independent_quantiles() {
    for dof in 1..=400 {
        let reference = ChiSquared::new(dof as f64).unwrap().inverse_cdf(0.99);
        let rel = (chi2_critical_99(dof) / reference - 1.0).abs();
        let tol = if dof <= 200 { 1e-9 } else { 1e-3 };
        assert!(rel < tol, "dof {dof}: {} vs {reference}", chi2_critical_99(dof));
    }
}

#[test]
fn electron_fringes_are_uniform_and_zeros_placed() {
    let config = RunConfig::electron();
    let out = run(&config).unwrap();
    let f = &out.summary.fringes;
    let nominal =
        2.0 * config.beam.a0 * config.geometry.screen_distance * config.beam.lambda0 / config.geometry.separation;
    assert!(f.fringe_maxima.len() >= 3);
    for w in f.fringe_maxima.windows(2) {
        assert!(((w[1] - w[0]) / nominal - 1.0).abs() < 0.005);
    }
    let a0l = config.beam.a0 * config.geometry.screen_distance;
    let s1 = 2.0 * config.beam.lambda0 / config.geometry.width;
    let zeros = &out.summary.envelope_zero_positions;
    assert!(zeros.iter().any(|&z| (z - a0l * s1).abs() < 1e-12));
    assert!(zeros.iter().any(|&z| (z + a0l * s1).abs() < 1e-12));
}

#[test]
fn central_maximum_sits_on_midpoint() {
    for (_, config) in presets() {
        let out = run(&config).unwrap();
        let central = out
            .summary
            .fringes
            .fringe_maxima
            .iter()
            .copied()
            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap();
        assert!((central - config.geometry.midpoint()).abs() < 1e-12);
    }
}

#[test]
fn single_slit_reports_only_envelope_zeros() {
    let mut config = RunConfig::neon();
    config.geometry = SlitGeometry::symmetric(2e-6, 0.0, 0.113).unwrap();
    config.theta_max = 0.05;
    let out = run(&config).unwrap();
    assert_eq!(out.summary.fringe_spacing, None);
    assert!(out.summary.fringes.fringe_maxima.is_empty());
    assert!(out.summary.envelope_zero_positions.len() >= 2);
}

/// `max |y_det − y(ε)|` lies between `A₀ L sin θ_q` and `A₀ L sin θmax`,
/// where θ_q is the (1 − 20/N) angle quantile: every sample misses
/// `[θ_q, θmax]` with probability e⁻²⁰.
#[test]
fn screen_extent_reaches_theta_max() {
    for (_, config) in presets() {
        let a = Analysis::new(&config).unwrap();
        let out = run(&config).unwrap();
        let reach = config.beam.a0 * config.geometry.screen_distance;
        let theta_q = a.table.invert(1.0 - 20.0 / config.n_particles as f64);
        let max_offset = out.summary.extent.max_offset;
        assert!(max_offset <= reach * config.theta_max.sin() * (1.0 + 1e-15));
        assert!(max_offset >= reach * theta_q.sin());
        assert!((out.summary.extent.analytic - 2.0 * reach * config.theta_max.sin()).abs() < 1e-15);
    }
}

#[test]
fn geometric_mode_runs_and_agrees_with_paper_mode_at_unit_a0() {
    let mut config = RunConfig::neon();
    let paper = run(&config).unwrap();
    config.propagation_mode = PropagationMode::Geometric;
    let geometric = run(&config).unwrap();
    let spacing = paper.summary.fringe_spacing.unwrap();
    for (p, g) in paper.events.iter().zip(&geometric.events) {
        assert!((p.y_det - g.y_det).abs() < 1e-3 * spacing);
    }
    assert_ne!(
        paper.summary.provenance.config_digest,
        geometric.summary.provenance.config_digest
    );
}
