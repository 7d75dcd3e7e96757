//! Self-check of the closed forms against their oracles and known
//! asymptotics. Runs in a few seconds; no Monte Carlo.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::loglog_slope;
use super::scenario::Scenario;
use crate::analytic::{self, bessel, oracle};
use crate::config::{ConfigParams, SystemConfig};
use crate::error::Result;

const VALIDATION_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidateOptions {
    /// Relative error injected into every K1 evaluation; used to check that
    /// the suite notices a broken Bessel routine.
    pub k1_perturbation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

fn outcome(name: &'static str, r: Result<(bool, String)>) -> PropertyResult {
    match r {
        Ok((passed, detail)) => PropertyResult { name, passed, detail },
        Err(e) => PropertyResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// A random configuration outside the outage-certain region.
pub fn random_valid_config<R: Rng>(rng: &mut R) -> SystemConfig {
    loop {
        let p = ConfigParams {
            total_power: 10f64.powf(rng.random_range(0.0..6.0)),
            noise_power: 1.0,
            lambda1: rng.random_range(0.02..0.45),
            lambda_relay: rng.random_range(0.05..2.0),
            rate_ue1: rng.random_range(0.1..1.5),
            rate_ue2: rng.random_range(0.1..1.0),
            d_bs_ue1: rng.random_range(10.0..60.0),
            d_bs_relay: rng.random_range(10.0..60.0),
            d_relay_ue1: rng.random_range(10.0..60.0),
            d_relay_ue2: rng.random_range(10.0..60.0),
            d_ref: 20.0,
            path_loss_exp: rng.random_range(2.0..4.0),
        };
        if let Ok(cfg) = SystemConfig::new(p) {
            if !cfg.is_outage_certain() {
                return cfg;
            }
        }
    }
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn builtin(name: &str) -> SystemConfig {
    Scenario::builtin(name).expect("built-in").cfg
}

pub fn k1_accuracy(opts: &ValidateOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for x in log_spaced(1e-3, 50.0, 50) {
        let value = bessel::k1(x)? * (1.0 + opts.k1_perturbation);
        let reference = oracle::k1_by_quadrature(x)?;
        worst = worst.max(((value - reference) / reference).abs());
    }
    Ok((
        worst < 1e-10,
        format!("max relative error vs quadrature over 50 points in [1e-3, 50] = {worst:.3e} (limit 1e-10)"),
    ))
}

pub fn ue2_oracle_equivalence(opts: &ValidateOptions) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let ln_shift = opts.k1_perturbation.ln_1p();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let cfg = random_valid_config(&mut rng);
        let v = cfg.variances();
        let terms = analytic::ue2_terms(analytic::theta_r(&cfg)?, cfg.lambda_relay(), v.bs_relay, v.relay_ue2);
        let p_b = terms.success_probability_with(|x| Ok(bessel::ln_k1(x)? + ln_shift))?;
        let q = oracle::quadrature_oracle_b(&cfg)?;
        worst = worst.max((q - (1.0 - p_b)).abs());
    }
    Ok((
        worst < 1e-6,
        format!("max |quadrature - (1 - P_B)| over 20 random configs = {worst:.3e} (limit 1e-6)"),
    ))
}

pub fn threshold_consistency() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let cfg = random_valid_config(&mut rng);
        let v = cfg.variances();
        let lhs = analytic::theta_r(&cfg)? * (1.0 / v.bs_relay + 1.0 / (cfg.lambda_relay() * v.relay_ue2));
        let rhs = analytic::p_out_asymptotic(&cfg)?;
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    Ok((
        worst < 1e-12,
        format!("max relative gap theta_r (1/s_r + 1/(lambda s_r2)) vs delta_r/snr = {worst:.3e}"),
    ))
}

/// Worst gap between the distinct-variance and equal-variance UE1 formulas
/// at relative variance offsets `±offset`, over a 10..40 dB grid.
pub fn branch_gap(offset: f64) -> f64 {
    let cfg = builtin("case-a");
    let s1 = cfg.variances().bs_ue1;
    let mut worst: f64 = 0.0;
    for snr_db in (10..=40).step_by(5) {
        let c = cfg.with_snr_db(snr_db as f64).expect("valid");
        let g = analytic::gamma_bar_1(&c);
        let a = analytic::p_a_matched(g, s1);
        for sign in [-1.0, 1.0] {
            let b = analytic::p_a_distinct(g, s1, s1 * (1.0 + sign * offset));
            worst = worst.max((a - b).abs());
        }
    }
    worst
}

pub fn branch_continuity() -> Result<(bool, String)> {
    let gaps: Vec<f64> = [1e-3, 1e-4, 1e-5].into_iter().map(branch_gap).collect();
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok((
        gaps[2] < 1e-4 && shrinking,
        format!(
            "max |B - A| at offsets 1e-3/1e-4/1e-5 = {:.2e}/{:.2e}/{:.2e}",
            gaps[0], gaps[1], gaps[2]
        ),
    ))
}

pub fn factorization() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED + 2);
    let mut worst: f64 = 0.0;
    let mut out_of_range = 0;
    for _ in 0..10_000 {
        let cfg = random_valid_config(&mut rng);
        let b = analytic::p_out_approx(&cfg)?;
        let c = b.components.expect("cases A/B carry components");
        worst = worst.max(((1.0 - b.p_out_approx) - c.p_a * c.p_b).abs());
        for p in [b.p_out_approx, c.p_a, c.p_b] {
            if !(0.0..=1.0).contains(&p) {
                out_of_range += 1;
            }
        }
    }
    Ok((
        worst <= 10.0 * f64::EPSILON && out_of_range == 0,
        format!(
            "max |(1 - P_out^A) - P_A P_B| over 1e4 configs = {worst:.3e}; {out_of_range} probabilities outside [0, 1]"
        ),
    ))
}

/// Least-squares slope of `log10 P_out^A` against `log10 snr` on a dB grid.
pub fn analytic_slope(cfg: &SystemConfig, from_db: f64, to_db: f64, points: usize) -> Result<f64> {
    let pts = (0..points)
        .map(|i| {
            let db = from_db + (to_db - from_db) * i as f64 / (points - 1) as f64;
            let c = cfg.with_snr_db(db)?;
            Ok((c.transmit_snr(), analytic::p_out_approx(&c)?.p_out_approx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(loglog_slope(&pts))
}

pub fn diversity_order() -> Result<(bool, String)> {
    let slope = analytic_slope(&builtin("case-b1"), 50.0, 70.0, 21)?;
    Ok((
        (-1.05..=-0.95).contains(&slope),
        format!("slope of log P_out^A vs log snr over 50..70 dB = {slope:.5} (band [-1.05, -0.95])"),
    ))
}

pub fn asymptote_ratio() -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["case-a", "case-b1", "case-b2"] {
        let c = builtin(name).with_total_power(1e6)?;
        let ratio = analytic::p_out_asymptotic(&c)? / analytic::p_out_approx(&c)?.p_out_approx;
        ok &= (0.95..=1.05).contains(&ratio);
        parts.push(format!("{name} {ratio:.5}"));
    }
    Ok((ok, format!("asymptote/approx at snr 1e6: {}", parts.join(", "))))
}

pub fn relay_location() -> Result<(bool, String)> {
    // The pair below shares sigma_r^2 sigma_{r,2}^2; B-II puts the relay
    // nearer to UE2.
    let near_ue2 = analytic::delta_r(&builtin("case-b2"))?;
    let near_bs = analytic::delta_r(&builtin("case-b1"))?;
    let mut ok = near_ue2 < near_bs;
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED + 3);
    let mut violations = 0;
    for _ in 0..100 {
        let cfg = random_valid_config(&mut rng);
        let lambda = rng.random_range(0.05..0.95);
        let (a, b) = (rng.random_range(10.0..60.0), rng.random_range(10.0..60.0));
        let (close, far) = if a < b { (a, b) } else { (b, a) };
        // Relay close to UE2: d_r = far, d_{r,2} = close, so sigma_r^2 < sigma_{r,2}^2.
        let p = ConfigParams {
            lambda_relay: lambda,
            d_bs_relay: far,
            d_relay_ue2: close,
            ..cfg.params().clone()
        };
        let swapped = ConfigParams {
            d_bs_relay: close,
            d_relay_ue2: far,
            ..p.clone()
        };
        let good = analytic::delta_r(&SystemConfig::new(p)?)?;
        let bad = analytic::delta_r(&SystemConfig::new(swapped)?)?;
        if !(good < bad) && a != b {
            violations += 1;
        }
    }
    ok &= violations == 0;
    Ok((
        ok,
        format!(
            "delta_r relay near UE2 (B-II) = {near_ue2:.4} vs near BS (B-I) = {near_bs:.4}; {violations}/100 random pairs violate"
        ),
    ))
}

pub fn monotone_in_power() -> Result<(bool, String)> {
    let mut ok = true;
    for name in ["case-a", "case-b1", "case-b2"] {
        let cfg = builtin(name);
        let mut prev = f64::INFINITY;
        for db in 10..=40 {
            let p = analytic::p_out_approx(&cfg.with_snr_db(db as f64)?)?.p_out_approx;
            ok &= p <= prev;
            prev = p;
        }
    }
    Ok((ok, "P_out^A non-increasing over 10..40 dB for A, B-I, B-II".into()))
}

pub fn validate(opts: &ValidateOptions) -> Vec<PropertyResult> {
    vec![
        outcome("k1-vs-quadrature", k1_accuracy(opts)),
        outcome("ue2-oracle-equivalence", ue2_oracle_equivalence(opts)),
        outcome("threshold-consistency", threshold_consistency()),
        outcome("branch-continuity", branch_continuity()),
        outcome("factorization", factorization()),
        outcome("diversity-order", diversity_order()),
        outcome("asymptote-ratio", asymptote_ratio()),
        outcome("relay-location", relay_location()),
        outcome("monotone-in-power", monotone_in_power()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_configs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let c = random_valid_config(&mut rng);
            assert!(!c.is_outage_certain());
        }
    }

    #[test]
    fn continuity_gap_shrinks() {
        assert!(branch_gap(1e-5) < branch_gap(1e-3));
        assert!(branch_gap(1e-5) < 1e-4);
    }
}
