//! Globally adaptive 21-point Gauss-Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_100_070,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        lo,
        hi,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Integrator {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<Estimate> {
        self.integrate_with_breaks(f, &[lo, hi])
    }

    /// Integrates over `[points[0], points[last]]`, seeding the subdivision
    /// with the given interior points. `points` must be ascending.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
        &self,
        f: F,
        points: &[f64],
    ) -> Result<Estimate> {
        if points.len() < 2 || points.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::domain("quadrature breakpoints must be ascending"));
        }
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in points.windows(2) {
            if w[1] > w[0] {
                heap.push(kronrod(&f, w[0], w[1]));
                evaluations += 21;
            }
        }
        let (lo, hi) = (points[0], points[points.len() - 1]);

        loop {
            let value: f64 = heap.iter().map(|s| s.value).sum();
            let error: f64 = heap.iter().map(|s| s.error).sum();
            if !value.is_finite() {
                return Err(Error::domain(format!(
                    "integrand is not finite on [{lo}, {hi}]"
                )));
            }
            let tolerance = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= tolerance {
                return Ok(Estimate {
                    value,
                    error,
                    evaluations,
                });
            }
            let worst = match heap.pop() {
                Some(s) => s,
                None => {
                    return Ok(Estimate {
                        value: 0.0,
                        error: 0.0,
                        evaluations,
                    })
                }
            };
            let mid = 0.5 * (worst.lo + worst.hi);
            if heap.len() + 2 > self.max_intervals || mid <= worst.lo || mid >= worst.hi {
                return Err(Error::Quadrature {
                    lo,
                    hi,
                    estimate: error,
                    tolerance,
                    evaluations,
                });
            }
            heap.push(kronrod(&f, worst.lo, mid));
            heap.push(kronrod(&f, mid, worst.hi));
            evaluations += 42;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exact() {
        let q = Integrator::default();
        let r = q.integrate(|x| x * x * x - 2.0 * x, 0.0, 3.0).unwrap();
        assert_relative_eq!(r.value, 81.0 / 4.0 - 9.0, max_relative = 1e-14);
    }

    #[test]
    fn exponential_tail() {
        let q = Integrator::new(0.0, 1e-13);
        let r = q.integrate(|x| (-x).exp(), 0.0, 50.0).unwrap();
        assert_relative_eq!(r.value, 1.0 - (-50f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn sharp_feature_with_breaks() {
        let q = Integrator::new(1e-12, 0.0);
        let r = q
            .integrate_with_breaks(|x| (-(x - 0.3).abs() * 1e4).exp(), &[0.0, 0.3, 1.0])
            .unwrap();
        assert_relative_eq!(r.value, 2e-4, max_relative = 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let q = Integrator {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_intervals: 4,
        };
        let err = q.integrate(|x| x.sqrt().recip(), 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
        assert!(err.to_string().contains("did not converge"));
    }

    #[test]
    fn rejects_bad_breaks() {
        let q = Integrator::default();
        assert!(q.integrate_with_breaks(|x| x, &[1.0, 0.0]).is_err());
        assert!(q.integrate_with_breaks(|x| x, &[1.0]).is_err());
    }
}
