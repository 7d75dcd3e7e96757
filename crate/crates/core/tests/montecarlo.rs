use noma_relay::analytic;
use noma_relay::experiments::Scenario;
use noma_relay::montecarlo::sweep_snr;
use noma_relay::{Error, Estimator, McEngine, SystemConfig};

fn b1(db: f64) -> SystemConfig {
    Scenario::builtin("case-b1").unwrap().cfg.with_snr_db(db).unwrap()
}

#[test]
fn identical_across_worker_counts_and_chunk_sizes() {
    let cfg = b1(25.0);
    let reference = McEngine::with_workers(1).unwrap().estimate_outage(&cfg, 200_003, 42, Estimator::Exact).unwrap();
    for engine in [
        McEngine::with_workers(3).unwrap(),
        McEngine::new(),
        McEngine::with_workers(2).unwrap().with_chunk_size(1000),
        McEngine::new().with_chunk_size(1),
    ] {
        let e = engine.estimate_outage(&cfg, 200_003, 42, Estimator::Exact).unwrap();
        assert_eq!(e, reference);
    }
}

#[test]
fn different_seeds_differ() {
    let cfg = b1(20.0);
    let e = McEngine::new();
    let a = e.estimate_outage(&cfg, 100_000, 1, Estimator::Exact).unwrap();
    let b = e.estimate_outage(&cfg, 100_000, 2, Estimator::Exact).unwrap();
    assert_ne!(a.p_overall, b.p_overall);
}

#[test]
fn small_and_large_runs_agree() {
    let cfg = b1(25.0);
    let e = McEngine::new();
    let small = e.estimate_outage(&cfg, 10_000, 3, Estimator::Exact).unwrap();
    let large = e.estimate_outage(&cfg, 1_000_000, 4, Estimator::Exact).unwrap();
    let tol = 4.0 * (small.ci_halfwidth_95 + large.ci_halfwidth_95);
    assert!((small.p_overall - large.p_overall).abs() < tol);
}

#[test]
fn lower_bound_below_exact() {
    let e = McEngine::new();
    for db in [10.0, 20.0, 30.0] {
        let cfg = b1(db);
        let ex = e.estimate_outage(&cfg, 200_000, 5, Estimator::Exact).unwrap();
        let lb = e.estimate_outage(&cfg, 200_000, 5, Estimator::LowerBound).unwrap();
        assert!(lb.p_overall <= ex.p_overall + 2.0 * (lb.ci_halfwidth_95 + ex.ci_halfwidth_95));
        // Shared random numbers make the event containment exact.
        assert!(lb.p_overall <= ex.p_overall);
    }
}

#[test]
fn per_user_outages_bracket_overall() {
    let e = McEngine::new().estimate_outage(&b1(30.0), 500_000, 6, Estimator::Exact).unwrap();
    assert!(e.p_ue1 <= e.p_overall && e.p_ue2 <= e.p_overall);
    assert!(e.p_overall <= e.p_ue1 + e.p_ue2);
    // UE1 failures are rare next to the relay-limited UE2 at high SNR.
    assert!(e.p_ue1 < 0.15 * e.p_overall, "{e:?}");
}

#[test]
fn simulation_converges_to_approximation_at_high_snr() {
    let e = McEngine::new();
    for (db, tol) in [(30.0, 0.10), (35.0, 0.05), (40.0, 0.05)] {
        let cfg = b1(db);
        let sim = e.estimate_outage(&cfg, 1_000_000, 8, Estimator::Exact).unwrap().p_overall;
        let approx = analytic::p_out_approx(&cfg).unwrap().p_out_approx;
        assert!((sim - approx).abs() / sim < tol, "{db} dB: {sim} vs {approx}");
    }
}

#[test]
fn sweep_rows_are_ordered_and_decreasing() {
    let s = Scenario::builtin("case-b1").unwrap();
    let rows = sweep_snr(&s.cfg, &s.snr_grid_db, 100_000, 9).unwrap();
    assert_eq!(rows.len(), 6);
    for (r, db) in rows.iter().zip(&s.snr_grid_db) {
        assert_eq!(r.snr_db, *db);
        assert!(r.asymptote.is_some());
    }
    for w in rows.windows(2) {
        assert!(w[1].exact.p_overall <= w[0].exact.p_overall + 2.0 * w[0].exact.ci_halfwidth_95);
    }
}

#[test]
fn sweep_errors() {
    let cfg = b1(30.0);
    assert!(matches!(sweep_snr(&cfg, &[], 10, 1), Err(Error::EmptyGrid(_))));
    match sweep_snr(&cfg, &[10.0, f64::NAN], 10, 1) {
        Err(Error::GridPoint { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    assert!(McEngine::new().estimate_outage(&cfg, 0, 1, Estimator::Exact).is_err());
    assert!(McEngine::with_workers(0).is_err());
}

#[test]
fn vanishing_power_means_certain_outage() {
    let e = McEngine::new().estimate_outage(&b1(-300.0), 10_000, 1, Estimator::Exact).unwrap();
    assert_eq!(e.p_overall, 1.0);
    assert_eq!(e.ci_halfwidth_95, 0.0);
}

#[test]
fn relay_nearer_far_user_lowers_simulated_outage() {
    let s1 = Scenario::builtin("case-b1").unwrap();
    let s2 = Scenario::builtin("case-b2").unwrap();
    let e = McEngine::new();
    let near_bs = e.estimate_outage(&s1.cfg.with_snr_db(35.0).unwrap(), 100_000, s1.seed, Estimator::Exact).unwrap();
    let near_ue2 = e.estimate_outage(&s2.cfg.with_snr_db(35.0).unwrap(), 100_000, s2.seed, Estimator::Exact).unwrap();
    assert!(near_ue2.p_overall < near_bs.p_overall, "{near_ue2:?} vs {near_bs:?}");
}
