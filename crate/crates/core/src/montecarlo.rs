//! Monte Carlo outage estimation.
//!
//! Trials are split into fixed-size chunks. Each chunk counts outages
//! locally and the chunk counts are merged in index order, so the result
//! does not depend on the number of worker threads.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::analytic::{self, AnalyticBreakdown};
use crate::channel::{ChannelRealization, ChannelSampler, ChannelVariances};
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::sinr::{self, OutageFlags, Thresholds};

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_CHUNK: u64 = 4096;

/// Which outage event is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// SIC failure at UE1, x1 failure at UE1, or x2 failure at UE2.
    Exact,
    /// Ignores the SIC stage and relay-noise amplification at UE1; a lower
    /// bound on the exact outage.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_overall: f64,
    pub p_ue1: f64,
    pub p_ue2: f64,
    /// Half-width of the 95% normal-approximation interval on `p_overall`.
    pub ci_halfwidth_95: f64,
    pub n_trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OutageCounts {
    pub overall: u64,
    pub ue1: u64,
    pub ue2: u64,
}

impl OutageCounts {
    fn add(&mut self, f: OutageFlags) {
        self.overall += f.overall_outage as u64;
        self.ue1 += f.ue1_outage as u64;
        self.ue2 += f.ue2_outage as u64;
    }

    fn merge(self, other: Self) -> Self {
        OutageCounts {
            overall: self.overall + other.overall,
            ue1: self.ue1 + other.ue1,
            ue2: self.ue2 + other.ue2,
        }
    }

    pub fn into_estimate(self, n_trials: u64, seed: u64) -> OutageEstimate {
        let n = n_trials as f64;
        let p = self.overall as f64 / n;
        OutageEstimate {
            p_overall: p,
            p_ue1: self.ue1 as f64 / n,
            p_ue2: self.ue2 as f64 / n,
            ci_halfwidth_95: 1.96 * (p * (1.0 - p) / n).sqrt(),
            n_trials,
            seed,
        }
    }
}

/// Trial runner. Holds an optional dedicated thread pool; without one the
/// global rayon pool is used.
#[derive(Debug)]
pub struct McEngine {
    chunk_size: u64,
    pool: Option<ThreadPool>,
}

impl Default for McEngine {
    fn default() -> Self {
        McEngine {
            chunk_size: DEFAULT_CHUNK,
            pool: None,
        }
    }
}

impl McEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Engine running on exactly `workers` threads.
    pub fn with_workers(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::domain("worker count must be at least 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
        Ok(McEngine {
            chunk_size: DEFAULT_CHUNK,
            pool: Some(pool),
        })
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        self.chunk_size = chunk_size.max(1);
        self
    }

    /// Counts the flags returned by `event` over trials `0..n_trials`.
    pub fn count<F>(&self, variances: ChannelVariances, n_trials: u64, seed: u64, event: F) -> OutageCounts
    where
        F: Fn(&ChannelRealization) -> OutageFlags + Sync,
    {
        let sampler = ChannelSampler::new(variances, seed);
        let chunk = self.chunk_size;
        let n_chunks = n_trials.div_ceil(chunk);
        let job = || {
            (0..n_chunks)
                .into_par_iter()
                .map(|c| {
                    let mut local = OutageCounts::default();
                    for t in c * chunk..((c + 1) * chunk).min(n_trials) {
                        local.add(event(&sampler.sample(t)));
                    }
                    local
                })
                .collect::<Vec<_>>()
        };
        let parts = match &self.pool {
            Some(pool) => pool.install(job),
            None => job(),
        };
        parts.into_iter().fold(OutageCounts::default(), OutageCounts::merge)
    }

    pub fn estimate_outage(
        &self,
        cfg: &SystemConfig,
        n_trials: u64,
        seed: u64,
        estimator: Estimator,
    ) -> Result<OutageEstimate> {
        if n_trials == 0 {
            return Err(Error::domain("n_trials must be at least 1"));
        }
        let th = Thresholds::of(cfg);
        let counts = match estimator {
            Estimator::Exact => self.count(cfg.variances(), n_trials, seed, |ch| {
                sinr::outage_with(&sinr::compute_sinrs(ch, cfg), th)
            }),
            Estimator::LowerBound => self.count(cfg.variances(), n_trials, seed, |ch| {
                sinr::lower_bound_with(ch, cfg, th)
            }),
        };
        Ok(counts.into_estimate(n_trials, seed))
    }

    /// Monte Carlo and closed-form values at each SNR of `snr_grid_db`.
    /// Every grid point reuses `seed`, so the curves share random numbers.
    pub fn sweep_snr(
        &self,
        cfg_base: &SystemConfig,
        snr_grid_db: &[f64],
        n_trials: u64,
        seed: u64,
    ) -> Result<Vec<SweepRow>> {
        if snr_grid_db.is_empty() {
            return Err(Error::EmptyGrid("SNR grid has no points".into()));
        }
        snr_grid_db
            .iter()
            .enumerate()
            .map(|(index, &snr_db)| {
                self.sweep_point(cfg_base, snr_db, n_trials, seed)
                    .map_err(|e| Error::GridPoint {
                        index,
                        source: Box::new(e),
                    })
            })
            .collect()
    }

    fn sweep_point(&self, base: &SystemConfig, snr_db: f64, n: u64, seed: u64) -> Result<SweepRow> {
        let cfg = base.with_snr_db(snr_db)?;
        Ok(SweepRow {
            snr_db,
            exact: self.estimate_outage(&cfg, n, seed, Estimator::Exact)?,
            lower_bound: self.estimate_outage(&cfg, n, seed, Estimator::LowerBound)?,
            analytic: analytic::p_out_approx(&cfg)?,
            asymptote: analytic::p_out_asymptotic(&cfg).ok(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub exact: OutageEstimate,
    pub lower_bound: OutageEstimate,
    pub analytic: AnalyticBreakdown,
    /// `None` in the outage-certain case.
    pub asymptote: Option<f64>,
}

/// [`McEngine::estimate_outage`] on the global thread pool.
pub fn estimate_outage(
    cfg: &SystemConfig,
    n_trials: u64,
    seed: u64,
    estimator: Estimator,
) -> Result<OutageEstimate> {
    McEngine::default().estimate_outage(cfg, n_trials, seed, estimator)
}

pub fn sweep_snr(
    cfg_base: &SystemConfig,
    snr_grid_db: &[f64],
    n_trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    McEngine::default().sweep_snr(cfg_base, snr_grid_db, n_trials, seed)
}
