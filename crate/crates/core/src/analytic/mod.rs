//! Closed-form outage approximation and its high-SNR asymptote.
//!
//! Under the high-SNR gain `rho^2 ~ lambda / |h_r|^2` and with the SIC
//! stage ignored, the outage event splits into two independent parts:
//!
//! * UE1: `|h1|^2 + lambda |h_{r,1}|^2 < gamma_bar_1` with
//!   `gamma_bar_1 = f(R1) N0 / P1`;
//! * UE2: `lambda |h_{r,2}|^2 (1 - theta_r / |h_r|^2) <= theta_r` with
//!   `theta_r = f(R2) N0 / (P2 - f(R2) P1)`.
//!
//! so `P_out ~ 1 - P_A P_B`, where `P_A`, `P_B` are the complementary
//! (success) probabilities.

pub mod bessel;
pub mod oracle;
pub mod quadrature;

use crate::config::{CaseLabel, SystemConfig};
use crate::error::{Error, Result};

/// Overshoot beyond [0, 1] attributed to round-off; anything larger is a bug.
const PROBABILITY_SLACK: f64 = 1e-12;

fn checked_probability(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { name, value });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn outage_certain(cfg: &SystemConfig) -> Error {
    Error::OutageCertain {
        power_ratio: cfg.power_ue2() / cfg.power_ue1(),
        threshold: cfg.threshold_ue2(),
    }
}

/// Gain threshold of the UE2 event.
pub fn theta_r(cfg: &SystemConfig) -> Result<f64> {
    if cfg.is_outage_certain() {
        return Err(outage_certain(cfg));
    }
    let f2 = cfg.threshold_ue2();
    Ok(f2 * cfg.noise_power() / (cfg.power_ue2() - f2 * cfg.power_ue1()))
}

/// Gain threshold of the UE1 event.
pub fn gamma_bar_1(cfg: &SystemConfig) -> f64 {
    cfg.threshold_ue1() * cfg.noise_power() / cfg.power_ue1()
}

/// `P{X + Y >= c}` for independent exponentials with equal mean `var`.
pub fn p_a_matched(threshold: f64, var: f64) -> f64 {
    let t = threshold / var;
    (1.0 + t) * (-t).exp()
}

/// `P{X + Y >= c}` for independent exponentials with distinct means.
///
/// Algebraically `eta e^{-c/a} + (1 - eta) e^{-c/b}` with
/// `eta = a / (a - b)`; evaluated as
/// `e^{-c/m} [1 - n expm1(-c (m - n)/(m n)) / (m - n)]` with `m = max(a, b)`
/// and `n = min(a, b)` so that nearly equal means do not cancel.
pub fn p_a_distinct(threshold: f64, var_direct: f64, var_relayed: f64) -> f64 {
    let (m, n) = if var_direct >= var_relayed {
        (var_direct, var_relayed)
    } else {
        (var_relayed, var_direct)
    };
    let gap = m - n;
    if gap == 0.0 {
        return p_a_matched(threshold, m);
    }
    let x = -threshold * gap / (m * n);
    (-threshold / m).exp() * (1.0 - n * x.exp_m1() / gap)
}

/// Probability that UE1 decodes x1 (complement of the UE1 outage event).
pub fn p_component_a(cfg: &SystemConfig) -> Result<f64> {
    let case = cfg.case();
    if case == CaseLabel::CaseC {
        return Err(outage_certain(cfg));
    }
    Ok(p_component_a_for(cfg, case)?.0)
}

fn p_component_a_for(cfg: &SystemConfig, case: CaseLabel) -> Result<(f64, Option<f64>)> {
    let v = cfg.variances();
    let direct = v.bs_ue1;
    let relayed = cfg.lambda_relay() * v.relay_ue1;
    let g1 = gamma_bar_1(cfg);
    let (p, eta) = match case {
        CaseLabel::CaseA => (p_a_matched(g1, direct), None),
        _ => (
            p_a_distinct(g1, direct, relayed),
            Some(direct / (direct - relayed)),
        ),
    };
    Ok((checked_probability("P_A", p)?, eta))
}

/// Parameters of the UE2 success probability `mu e^{-delta} K1(mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ue2Terms {
    pub mu: f64,
    pub delta: f64,
}

pub fn ue2_terms(theta: f64, lambda: f64, var_relay: f64, var_relay_ue2: f64) -> Ue2Terms {
    Ue2Terms {
        mu: 2.0 * theta / (lambda * var_relay * var_relay_ue2).sqrt(),
        delta: theta / var_relay + theta / (lambda * var_relay_ue2),
    }
}

impl Ue2Terms {
    /// `mu e^{-delta} K1(mu)`, assembled in log space; `ln_k1` supplies
    /// `ln K1`.
    pub fn success_probability_with<F: Fn(f64) -> Result<f64>>(&self, ln_k1: F) -> Result<f64> {
        let ln_p = self.mu.ln() - self.delta + ln_k1(self.mu)?;
        checked_probability("P_B", ln_p.exp())
    }

    pub fn success_probability(&self) -> Result<f64> {
        self.success_probability_with(bessel::ln_k1)
    }
}

/// Probability that UE2 decodes x2 (complement of the UE2 outage event).
pub fn p_component_b(cfg: &SystemConfig) -> Result<f64> {
    cfg_ue2_terms(cfg)?.success_probability()
}

fn cfg_ue2_terms(cfg: &SystemConfig) -> Result<Ue2Terms> {
    let v = cfg.variances();
    Ok(ue2_terms(
        theta_r(cfg)?,
        cfg.lambda_relay(),
        v.bs_relay,
        v.relay_ue2,
    ))
}

/// Intermediate quantities of the approximation; absent in Case C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageComponents {
    pub p_a: f64,
    pub p_b: f64,
    pub mu: f64,
    pub delta: f64,
    /// Only defined in Case B.
    pub eta: Option<f64>,
    pub theta_r: f64,
    pub gamma_bar_1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBreakdown {
    pub p_out_approx: f64,
    pub case: CaseLabel,
    pub components: Option<OutageComponents>,
}

/// Three-branch closed-form outage approximation.
pub fn p_out_approx(cfg: &SystemConfig) -> Result<AnalyticBreakdown> {
    let case = cfg.case();
    if case == CaseLabel::CaseC {
        return Ok(AnalyticBreakdown {
            p_out_approx: 1.0,
            case,
            components: None,
        });
    }
    let (p_a, eta) = p_component_a_for(cfg, case)?;
    let terms = cfg_ue2_terms(cfg)?;
    let p_b = terms.success_probability()?;
    let p_out = checked_probability("P_out^A", 1.0 - p_a * p_b)?;
    Ok(AnalyticBreakdown {
        p_out_approx: p_out,
        case,
        components: Some(OutageComponents {
            p_a,
            p_b,
            mu: terms.mu,
            delta: terms.delta,
            eta,
            theta_r: theta_r(cfg)?,
            gamma_bar_1: gamma_bar_1(cfg),
        }),
    })
}

/// `delta_r`, the SNR-independent constant of the asymptote.
pub fn delta_r(cfg: &SystemConfig) -> Result<f64> {
    if cfg.is_outage_certain() {
        return Err(outage_certain(cfg));
    }
    let f2 = cfg.threshold_ue2();
    let v = cfg.variances();
    Ok(f2 / (1.0 - cfg.lambda1() * (1.0 + f2))
        * (1.0 / v.bs_relay + 1.0 / (cfg.lambda_relay() * v.relay_ue2)))
}

/// High-SNR asymptote `delta_r / (P_T / N0)`.
pub fn p_out_asymptotic(cfg: &SystemConfig) -> Result<f64> {
    Ok(delta_r(cfg)? / cfg.transmit_snr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{matched_relay_ue1_distance, ConfigParams};
    use approx::assert_relative_eq;

    fn cfg(p: ConfigParams) -> SystemConfig {
        SystemConfig::new(p).unwrap()
    }

    fn b1() -> SystemConfig {
        cfg(ConfigParams::default())
    }

    #[test]
    fn theta_examples() {
        // P_T = 1000, lambda1 = 0.2, R2 = 0.7
        assert_relative_eq!(
            theta_r(&b1()).unwrap(),
            0.003_471_043_636_173_132_7,
            max_relative = 1e-12
        );
        // P2 = 2 f(R2) P1 reduces theta_r to N0 / P1.
        let f2 = 1.639_015_821_545_788_5;
        let c = cfg(ConfigParams {
            lambda1: 1.0 / (1.0 + 2.0 * f2),
            ..Default::default()
        });
        assert_relative_eq!(
            theta_r(&c).unwrap(),
            f2 / (f2 * c.power_ue1()),
            max_relative = 1e-12
        );
        let case_c = cfg(ConfigParams {
            lambda1: 0.4,
            ..Default::default()
        });
        assert!(matches!(theta_r(&case_c), Err(Error::OutageCertain { .. })));
    }

    #[test]
    fn gamma_bar_examples() {
        assert_relative_eq!(gamma_bar_1(&b1()), 0.015, max_relative = 1e-15);
        let doubled = b1().with_total_power(2000.0).unwrap();
        assert_relative_eq!(gamma_bar_1(&doubled), 0.0075, max_relative = 1e-15);
    }

    #[test]
    fn p_a_limits() {
        assert_eq!(p_a_matched(0.0, 0.3), 1.0);
        assert_eq!(p_a_distinct(0.0, 0.3, 0.1), 1.0);
        assert!(p_a_distinct(1e4, 0.3, 0.1) < 1e-300);
        assert!(p_a_matched(1e4, 0.3) < 1e-300);
    }

    #[test]
    fn p_a_matches_eta_form_away_from_boundary() {
        let (c, a, b): (f64, f64, f64) = (0.7, 4.0 / 9.0, 0.3 * 4.0 / 9.0);
        let eta = a / (a - b);
        let textbook = eta * (-c / a).exp() + (1.0 - eta) * (-c / b).exp();
        assert_relative_eq!(p_a_distinct(c, a, b), textbook, max_relative = 1e-13);
        assert_relative_eq!(p_a_distinct(c, b, a), textbook, max_relative = 1e-13);
    }

    #[test]
    fn p_a_branch_continuity() {
        let s1 = 4.0 / 9.0;
        let c = 0.2;
        let matched = p_a_matched(c, s1);
        for off in [1e-3, 1e-4, 1e-5] {
            for sign in [-1.0, 1.0] {
                let v = p_a_distinct(c, s1, s1 * (1.0 + sign * off));
                assert!((v - matched).abs() < off, "{off}: {v} vs {matched}");
            }
        }
    }

    #[test]
    fn p_b_limits() {
        let near_zero = ue2_terms(1e-12, 0.3, 0.4, 0.2).success_probability().unwrap();
        assert!((near_zero - 1.0).abs() < 1e-9);
        let huge = ue2_terms(1e3, 0.3, 0.4, 0.2).success_probability().unwrap();
        assert_eq!(huge, 0.0);
    }

    #[test]
    fn case_c_is_certain() {
        let c = cfg(ConfigParams {
            lambda1: 0.4,
            ..Default::default()
        });
        let b = p_out_approx(&c).unwrap();
        assert_eq!(b.p_out_approx, 1.0);
        assert_eq!(b.case, CaseLabel::CaseC);
        assert!(b.components.is_none());
        assert!(p_out_asymptotic(&c).is_err());
        assert!(p_component_a(&c).is_err());
        assert!(p_component_b(&c).is_err());
    }

    #[test]
    fn factorizes() {
        let b = p_out_approx(&b1()).unwrap();
        let comp = b.components.unwrap();
        assert_eq!(b.case, CaseLabel::CaseB);
        assert_eq!(1.0 - b.p_out_approx, 1.0 - (1.0 - comp.p_a * comp.p_b));
        assert!(comp.eta.unwrap() > 1.0);
    }

    #[test]
    fn case_a_has_no_eta() {
        let c = cfg(ConfigParams {
            d_relay_ue1: matched_relay_ue1_distance(30.0, 0.3, 2.0),
            ..Default::default()
        });
        let b = p_out_approx(&c).unwrap();
        assert_eq!(b.case, CaseLabel::CaseA);
        assert!(b.components.unwrap().eta.is_none());
    }

    #[test]
    fn vanishes_at_high_snr() {
        let c = b1().with_snr_db(120.0).unwrap();
        assert!(p_out_approx(&c).unwrap().p_out_approx < 1e-9);
    }

    #[test]
    fn delta_r_pinned() {
        // f(R2)/(1 - lambda1 (1 + f(R2))) * (1/sigma_r^2 + 1/(lambda sigma_{r,2}^2))
        assert_relative_eq!(
            delta_r(&b1()).unwrap(),
            66.383_709_541_811_162,
            max_relative = 1e-12
        );
        let doubled = b1().with_total_power(2000.0).unwrap();
        assert_relative_eq!(
            p_out_asymptotic(&doubled).unwrap(),
            0.5 * p_out_asymptotic(&b1()).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn theta_consistent_with_delta_r() {
        let c = b1();
        let v = c.variances();
        let lhs = theta_r(&c).unwrap() * (1.0 / v.bs_relay + 1.0 / (c.lambda_relay() * v.relay_ue2));
        assert_relative_eq!(lhs, p_out_asymptotic(&c).unwrap(), max_relative = 1e-13);
    }
}
