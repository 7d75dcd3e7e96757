//! Three-slot cooperative OMA baseline.
//!
//! Slot 1: BS sends x1 to UE1 with power `lambda1_oma P_T`.
//! Slot 2: BS sends x2 to the relay with power `(1 - lambda1_oma) P_T`.
//! Slot 3: the relay amplifies and forwards to UE2 with power `lambda P_T`.
//!
//! UE1 ignores slots 2 and 3. The same payload spread over three slots
//! instead of two gives the threshold `f_oma(R) = 2^(3R) - 1`.

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::montecarlo::{McEngine, OutageEstimate};
use crate::sinr::OutageFlags;

pub const DEFAULT_GRID_STEP: f64 = 0.01;

/// SINR threshold for rate `R` over a three-slot frame.
pub fn oma_rate_threshold(rate: f64) -> f64 {
    (3.0 * rate).exp2() - 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmaConfig {
    /// Shared physical parameters; `base.lambda1()` is not used.
    pub base: SystemConfig,
    lambda1_oma: f64,
}

impl OmaConfig {
    pub fn new(base: SystemConfig, lambda1_oma: f64) -> Result<Self> {
        if !(lambda1_oma > 0.0 && lambda1_oma < 1.0) {
            return Err(Error::invalid(
                "lambda1_oma",
                format!("must lie in (0, 1), got {lambda1_oma}"),
            ));
        }
        Ok(OmaConfig { base, lambda1_oma })
    }

    pub fn lambda1_oma(&self) -> f64 {
        self.lambda1_oma
    }

    pub fn with_lambda1(&self, lambda1_oma: f64) -> Result<Self> {
        OmaConfig::new(self.base.clone(), lambda1_oma)
    }
}

#[derive(Debug, Clone, Copy)]
struct OmaLink {
    snr_ue1: f64,
    p2: f64,
    relay_power: f64,
    n0: f64,
    th1: f64,
    th2: f64,
}

impl OmaLink {
    fn of(ocfg: &OmaConfig) -> Self {
        let b = &ocfg.base;
        OmaLink {
            snr_ue1: ocfg.lambda1_oma * b.total_power() / b.noise_power(),
            p2: (1.0 - ocfg.lambda1_oma) * b.total_power(),
            relay_power: b.relay_power(),
            n0: b.noise_power(),
            th1: oma_rate_threshold(b.rate_ue1()),
            th2: oma_rate_threshold(b.rate_ue2()),
        }
    }

    fn ue2_sinr(&self, ch: &ChannelRealization) -> f64 {
        let cascade = ch.gr2 * ch.gr;
        if cascade == 0.0 || self.p2 == 0.0 {
            return 0.0;
        }
        // Interference-free two-hop AF SINR; the relay normalizes by its own
        // received power P2 |h_r|^2 + N0.
        let inv_rho_sq = (self.p2 * ch.gr + self.n0) / self.relay_power;
        cascade * self.p2 / ((ch.gr2 + inv_rho_sq) * self.n0)
    }

    fn flags(&self, ch: &ChannelRealization) -> OutageFlags {
        let ue1 = ch.g1 * self.snr_ue1 < self.th1;
        let ue2 = self.ue2_sinr(ch) < self.th2;
        OutageFlags::new(ue1, ue2)
    }
}

/// Per-realization OMA outage flags.
pub fn oma_outage(ch: &ChannelRealization, ocfg: &OmaConfig) -> OutageFlags {
    OmaLink::of(ocfg).flags(ch)
}

impl McEngine {
    pub fn oma_outage_mc(&self, ocfg: &OmaConfig, n_trials: u64, seed: u64) -> Result<OutageEstimate> {
        if n_trials == 0 {
            return Err(Error::domain("n_trials must be at least 1"));
        }
        let link = OmaLink::of(ocfg);
        let counts = self.count(ocfg.base.variances(), n_trials, seed, |ch| link.flags(ch));
        Ok(counts.into_estimate(n_trials, seed))
    }

    /// Outage at every `lambda1_oma` on the grid, all with the same seed.
    pub fn scan_lambda1(
        &self,
        ocfg: &OmaConfig,
        grid_step: f64,
        n_trials: u64,
        seed: u64,
    ) -> Result<Vec<(f64, OutageEstimate)>> {
        lambda1_grid(grid_step)?
            .into_iter()
            .map(|l| Ok((l, self.oma_outage_mc(&ocfg.with_lambda1(l)?, n_trials, seed)?)))
            .collect()
    }

    /// Brute-force minimum of the OMA outage over the `lambda1_oma` grid.
    /// Ties go to the smaller `lambda1_oma`.
    pub fn optimize_lambda1(
        &self,
        ocfg: &OmaConfig,
        grid_step: f64,
        n_trials: u64,
        seed: u64,
    ) -> Result<(f64, OutageEstimate)> {
        let scan = self.scan_lambda1(ocfg, grid_step, n_trials, seed)?;
        let mut best = *scan
            .first()
            .ok_or_else(|| Error::EmptyGrid("lambda1 grid has no points".into()))?;
        for &(l, e) in &scan[1..] {
            if e.p_overall < best.1.p_overall {
                best = (l, e);
            }
        }
        Ok(best)
    }
}

/// `{step, 2 step, ..., 1 - step}`.
pub fn lambda1_grid(grid_step: f64) -> Result<Vec<f64>> {
    if !(grid_step > 0.0 && grid_step < 0.5) {
        return Err(Error::domain(format!(
            "grid step must lie in (0, 0.5), got {grid_step}"
        )));
    }
    let count = ((1.0 - grid_step) / grid_step + 1e-9).floor() as usize;
    if count == 0 {
        return Err(Error::EmptyGrid("lambda1 grid has no points".into()));
    }
    Ok((1..=count).map(|k| k as f64 * grid_step).collect())
}

pub fn oma_outage_mc(ocfg: &OmaConfig, n_trials: u64, seed: u64) -> Result<OutageEstimate> {
    McEngine::default().oma_outage_mc(ocfg, n_trials, seed)
}

pub fn optimize_lambda1(
    ocfg: &OmaConfig,
    grid_step: f64,
    n_trials: u64,
    seed: u64,
) -> Result<(f64, OutageEstimate)> {
    McEngine::default().optimize_lambda1(ocfg, grid_step, n_trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigParams;

    fn base(snr_db: f64) -> SystemConfig {
        SystemConfig::new(ConfigParams::default())
            .unwrap()
            .with_snr_db(snr_db)
            .unwrap()
    }

    #[test]
    fn threshold_is_one_and_a_half_fold_rate() {
        // f(1.5 R) with the two-slot f(R) = 2^(2R) - 1
        for r in [0.3f64, 0.7, 1.0] {
            let two_slot = (2.0 * 1.5 * r).exp2() - 1.0;
            assert!((oma_rate_threshold(r) - two_slot).abs() < 1e-12);
        }
        assert_eq!(oma_rate_threshold(1.0), 7.0);
    }

    #[test]
    fn grid_cardinality() {
        assert_eq!(lambda1_grid(0.01).unwrap().len(), 99);
        assert_eq!(lambda1_grid(0.25).unwrap(), vec![0.25, 0.5, 0.75]);
        assert!(lambda1_grid(0.5).is_err());
        assert!(lambda1_grid(0.0).is_err());
        let g = lambda1_grid(0.01).unwrap();
        assert!((g[98] - 0.99).abs() < 1e-12);
    }

    #[test]
    fn starved_slots_fail() {
        let b = base(30.0);
        let low = OmaConfig::new(b.clone(), 1e-9).unwrap();
        let high = OmaConfig::new(b, 1.0 - 1e-12).unwrap();
        assert!(oma_outage_mc(&low, 5000, 1).unwrap().p_overall > 0.999);
        assert!(oma_outage_mc(&high, 5000, 1).unwrap().p_overall > 0.999);
        assert!(OmaConfig::new(base(30.0), 1.0).is_err());
    }

    #[test]
    fn optimum_reproduces() {
        let o = OmaConfig::new(base(30.0), 0.5).unwrap();
        let (best, est) = optimize_lambda1(&o, 0.05, 20_000, 4).unwrap();
        let again = oma_outage_mc(&o.with_lambda1(best).unwrap(), 20_000, 4).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn ties_prefer_smaller_lambda() {
        // Negligible power: every grid point has outage 1.
        let o = OmaConfig::new(base(-200.0), 0.5).unwrap();
        let (best, est) = optimize_lambda1(&o, 0.1, 1000, 1).unwrap();
        assert_eq!(est.p_overall, 1.0);
        assert!((best - 0.1).abs() < 1e-15);
    }
}
