//! Modified Bessel function of the second kind, order one.
//!
//! Power series with the logarithmic term for `x <= 2`; Steed's continued
//! fraction for the exponentially scaled value above that.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;
const SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 10_000;

fn check(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("K1 requires x > 0, got {x}")))
    }
}

/// `K_1(x)`. Underflows to zero for `x` beyond roughly 705.
pub fn k1(x: f64) -> Result<f64> {
    check(x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= SERIES_LIMIT {
        k1_series(x)
    } else {
        (-x).exp() * k1_scaled_cf(x)
    })
}

/// `exp(x) K_1(x)`.
pub fn k1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= SERIES_LIMIT {
        x.exp() * k1_series(x)
    } else {
        k1_scaled_cf(x)
    })
}

/// `ln K_1(x)` without underflow for large arguments.
pub fn ln_k1(x: f64) -> Result<f64> {
    check(x)?;
    if x.is_infinite() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(if x <= SERIES_LIMIT {
        k1_series(x).ln()
    } else {
        -x + k1_scaled_cf(x).ln()
    })
}

// K1(x) = 1/x + ln(x/2) I1(x)
//         - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
fn k1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    // term = q^k / (k! (k+1)!)
    let mut term = 1.0;
    let mut psi_k1 = -EULER_GAMMA; // psi(k+1)
    let mut psi_k2 = 1.0 - EULER_GAMMA; // psi(k+2)
    let mut i1_sum = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..MAX_ITER {
        i1_sum += term;
        let contrib = (psi_k1 + psi_k2) * term;
        psi_sum += contrib;
        if term < 1e-18 * i1_sum && contrib.abs() < 1e-18 * psi_sum.abs() {
            break;
        }
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 2.0));
        psi_k1 += 1.0 / (kf + 1.0);
        psi_k2 += 1.0 / (kf + 2.0);
    }
    1.0 / x + log_half * (0.5 * x) * i1_sum - 0.25 * x * psi_sum
}

// Steed's method for the second continued fraction (Temme/Thompson-Barnett),
// order mu = 0, then the K0 -> K1 step.
fn k1_scaled_cf(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0_scaled = (PI / (2.0 * x)).sqrt() / s;
    k0_scaled * (x + 0.5 - h) / x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        // Integral representation evaluated to 40 digits.
        assert_relative_eq!(k1(1.0).unwrap(), 0.601_907_230_197_234_6, max_relative = 1e-14);
        assert_relative_eq!(
            k1(10.0).unwrap(),
            1.864_877_345_382_558_5e-5,
            max_relative = 1e-13
        );
    }

    #[test]
    fn small_argument_limit() {
        let x = 1e-3;
        assert!((x * k1(x).unwrap() - 1.0).abs() < 1e-3);
        assert!((1e-10 * k1(1e-10).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn continuous_across_switch() {
        let below = k1(SERIES_LIMIT).unwrap();
        let above = k1(SERIES_LIMIT * (1.0 + 1e-15)).unwrap();
        assert_relative_eq!(below, above, max_relative = 1e-13);
    }

    #[test]
    fn large_argument_underflows() {
        assert_eq!(k1(1e4).unwrap(), 0.0);
        assert_eq!(k1(f64::INFINITY).unwrap(), 0.0);
        let ln = ln_k1(1e4).unwrap();
        assert!(ln.is_finite() && ln < -1e4 + 1.0);
        assert_relative_eq!(ln_k1(3.0).unwrap(), k1(3.0).unwrap().ln(), max_relative = 1e-14);
        assert_relative_eq!(
            k1_scaled(0.5).unwrap(),
            0.5f64.exp() * k1(0.5).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn domain_errors() {
        assert!(k1(0.0).is_err());
        assert!(k1(-1.0).is_err());
        assert!(k1(f64::NAN).is_err());
        assert!(ln_k1(0.0).is_err());
    }
}
