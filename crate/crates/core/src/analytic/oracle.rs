//! Brute-force numerical integrals used to check the closed forms.
//!
//! Nothing here calls into [`super::bessel`]; the oracles integrate the
//! defining integrals directly.

use super::quadrature::Integrator;
use super::theta_r;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

// Tails are cut where the exponential weight drops below e^-60.
const TAIL_EXPONENT: f64 = 60.0;

/// `K_1(x) = int_0^inf exp(-x cosh t) cosh t dt`, integrated adaptively.
pub fn k1_by_quadrature(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("K1 requires finite x > 0, got {x}")));
    }
    // Factor out exp(-x); cosh t - 1 = 2 sinh^2(t/2) avoids cancellation.
    let integrand = |t: f64| {
        let s = (0.5 * t).sinh();
        (-2.0 * x * s * s).exp() * t.cosh()
    };
    let upper = (1.0 + TAIL_EXPONENT / x).acosh();
    let breaks: Vec<f64> = (0..=16).map(|i| upper * i as f64 / 16.0).collect();
    let est = Integrator {
        abs_tol: 0.0,
        rel_tol: 1e-14,
        max_intervals: 10_000,
    }
    .integrate_with_breaks(integrand, &breaks)?;
    Ok((-x).exp() * est.value)
}

/// `P{ lambda g2 (1 - theta / gr) <= theta }` for independent exponential
/// `gr` (mean `var_relay`) and `g2` (mean `var_relay_ue2`), by nested 2-D
/// quadrature over both densities.
pub fn ue2_event_probability_by_quadrature(
    theta: f64,
    lambda: f64,
    var_relay: f64,
    var_relay_ue2: f64,
) -> Result<f64> {
    for (name, v) in [
        ("theta", theta),
        ("lambda", lambda),
        ("var_relay", var_relay),
        ("var_relay_ue2", var_relay_ue2),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    let inner_q = Integrator {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 2000,
    };
    let outer_q = Integrator {
        abs_tol: 1e-10,
        rel_tol: 0.0,
        max_intervals: 20_000,
    };
    let density_r = |x: f64| (-x / var_relay).exp() / var_relay;
    let density_2 = |y: f64| (-y / var_relay_ue2).exp() / var_relay_ue2;
    let inner_cap = TAIL_EXPONENT * var_relay_ue2;

    // gr <= theta: the event holds for every g2.
    let below = outer_q.integrate(density_r, 0.0, theta)?.value;

    // gr > theta: the event is g2 <= theta gr / (lambda (gr - theta)).
    let failure: std::cell::Cell<Option<Error>> = std::cell::Cell::new(None);
    let conditional = |x: f64| {
        if x <= theta {
            return density_r(x);
        }
        let limit = (theta * x / (lambda * (x - theta))).min(inner_cap);
        match inner_q.integrate(density_2, 0.0, limit) {
            Ok(e) => density_r(x) * e.value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        }
    };
    let width = theta * theta / (lambda * var_relay_ue2);
    let upper = theta + TAIL_EXPONENT * var_relay;
    let mut breaks = vec![theta];
    for k in [1.0, 10.0, 100.0, 1000.0] {
        let p = theta + k * width;
        if p < upper {
            breaks.push(p);
        }
    }
    breaks.push(upper);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let above = outer_q.integrate_with_breaks(conditional, &breaks);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(below + above?.value)
}

/// UE2-side outage probability under the high-SNR gain approximation,
/// integrated numerically. Should equal `1 - p_component_b(cfg)`.
pub fn quadrature_oracle_b(cfg: &SystemConfig) -> Result<f64> {
    let v = cfg.variances();
    ue2_event_probability_by_quadrature(theta_r(cfg)?, cfg.lambda_relay(), v.bs_relay, v.relay_ue2)
}
