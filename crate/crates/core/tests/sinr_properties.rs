use noma_relay::channel::{ChannelSampler, ChannelVariances};
use noma_relay::sinr::{
    amplify_gain_sq, compute_sinrs, evaluate_outage, evaluate_outage_lower_bound, gamma_1_lower_bound, AmplifyMode,
};
use noma_relay::{ChannelRealization, ConfigParams, SystemConfig};
use proptest::prelude::*;

fn cfg(snr_db: f64) -> SystemConfig {
    SystemConfig::new(ConfigParams::default())
        .unwrap()
        .with_snr_db(snr_db)
        .unwrap()
}

fn gain() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 1e-12f64..1e-3, 1e-3f64..10.0, 10.0f64..1e4]
}

fn realization() -> impl Strategy<Value = ChannelRealization> {
    (gain(), gain(), gain(), gain()).prop_map(|(g1, gr, gr1, gr2)| ChannelRealization { g1, gr, gr1, gr2 })
}

#[test]
fn sic_sinr_ceiling_on_random_draws() {
    let c = cfg(30.0);
    let ceiling = c.power_ue2() / c.power_ue1();
    let s = ChannelSampler::new(c.variances(), 77);
    for i in 0..100_000 {
        let t = compute_sinrs(&s.sample(i), &c);
        assert!(t.gamma_12 <= ceiling);
        assert!(t.gamma_12 >= 0.0 && t.gamma_1 >= 0.0 && t.gamma_2 >= 0.0);
    }
}

#[test]
fn sic_stronger_than_ue2_when_combined_gain_dominates() {
    let c = cfg(20.0);
    let s = ChannelSampler::new(c.variances(), 78);
    let mut exercised = 0;
    for i in 0..100_000 {
        let ch = s.sample(i);
        let rho_sq = amplify_gain_sq(ch.gr, &c, AmplifyMode::Exact).unwrap();
        let combined = ch.g1 + rho_sq * ch.gr1 * ch.gr;
        if combined > rho_sq * ch.gr2 * ch.gr {
            exercised += 1;
            let t = compute_sinrs(&ch, &c);
            assert!(t.gamma_12 >= t.gamma_2 * (1.0 - 1e-12), "trial {i}: {t:?}");
        }
    }
    assert!(exercised > 50_000);
}

#[test]
fn lower_bound_event_is_subset() {
    let c = cfg(20.0);
    let s = ChannelSampler::new(c.variances(), 79);
    for i in 0..50_000 {
        let ch = s.sample(i);
        let lb = evaluate_outage_lower_bound(&ch, &c);
        let ex = evaluate_outage(&ch, &c);
        assert!(!lb.overall_outage || ex.overall_outage);
    }
}

#[test]
fn approx_gain_relative_error_vanishes() {
    let mut prev = f64::INFINITY;
    for db in [20.0, 30.0, 40.0, 50.0, 60.0] {
        let c = cfg(db);
        let e = amplify_gain_sq(1.0, &c, AmplifyMode::Exact).unwrap();
        let a = amplify_gain_sq(1.0, &c, AmplifyMode::HighSnrApprox).unwrap();
        let rel = (a - e).abs() / e;
        assert!(rel < prev);
        prev = rel;
    }
    assert!(prev < 1e-3);
}

proptest! {
    #[test]
    fn flags_match_definition(ch in realization(), db in 0.0f64..50.0) {
        let c = cfg(db);
        let t = compute_sinrs(&ch, &c);
        let f = evaluate_outage(&ch, &c);
        let (f1, f2) = (c.threshold_ue1(), c.threshold_ue2());
        prop_assert_eq!(f.ue1_outage, t.gamma_12 < f2 || t.gamma_1 < f1);
        prop_assert_eq!(f.ue2_outage, t.gamma_2 < f2);
        prop_assert_eq!(f.overall_outage, f.ue1_outage || f.ue2_outage);
        prop_assert!(t.gamma_12.is_finite() && t.gamma_1.is_finite() && t.gamma_2.is_finite());
    }

    #[test]
    fn scaling_gains_up_keeps_ue1_decodable(ch in realization(), k in 1.0f64..100.0, db in 0.0f64..50.0) {
        let c = cfg(db);
        let before = gamma_1_lower_bound(&ch, &c);
        let after = gamma_1_lower_bound(&ch.scaled(k), &c);
        if before >= c.threshold_ue1() {
            prop_assert!(after >= c.threshold_ue1(), "{} -> {}", before, after);
        }
    }
}

#[test]
fn variances_from_config_drive_sampler() {
    let c = cfg(30.0);
    let v = c.variances();
    assert_eq!(v, ChannelVariances::new(4.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0, 16.0 / 81.0).unwrap());
}

#[test]
fn amplified_relay_noise_can_hurt_ue1() {
    let c = cfg(5.456145242405153);
    let ch = ChannelRealization { g1: 1223.0327152913994, gr: 0.0009424607290374502, gr1: 8145.048728705069, gr2: 0.0 };
    let before = compute_sinrs(&ch, &c).gamma_1;
    let after = compute_sinrs(&ch.scaled(7.563802685292708), &c).gamma_1;
    assert!(before > c.threshold_ue1() && after < c.threshold_ue1());
    assert!(gamma_1_lower_bound(&ch.scaled(7.563802685292708), &c) > gamma_1_lower_bound(&ch, &c));
}
