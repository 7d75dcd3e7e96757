//! Per-realization SINRs and the outage event.
//!
//! SINRs are computed straight from the power gains. UE1 MRC-combines the
//! direct copy with the relayed copy, decodes x2 first, cancels it and then
//! decodes x1. UE2 only hears the relay.

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplifyMode {
    /// `rho^2 = P_R / (P_T |h_r|^2 + N0)`.
    Exact,
    /// `rho^2 ~ P_R / (P_T |h_r|^2)`, valid at medium-to-high SNR.
    HighSnrApprox,
}

/// Squared amplify-and-forward gain applied by the relay.
pub fn amplify_gain_sq(gr: f64, cfg: &SystemConfig, mode: AmplifyMode) -> Result<f64> {
    if !(gr >= 0.0) {
        return Err(Error::domain(format!("gain must be non-negative, got {gr}")));
    }
    match mode {
        AmplifyMode::Exact => Ok(exact_gain_sq(gr, cfg)),
        AmplifyMode::HighSnrApprox => {
            if gr == 0.0 {
                return Err(Error::domain(
                    "high-SNR amplifying gain is undefined for a zero BS-relay gain",
                ));
            }
            Ok(cfg.lambda_relay() / gr)
        }
    }
}

#[inline]
fn exact_gain_sq(gr: f64, cfg: &SystemConfig) -> f64 {
    cfg.relay_power() / (cfg.total_power() * gr + cfg.noise_power())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrTriple {
    /// x2 at UE1 (the SIC stage).
    pub gamma_12: f64,
    /// x1 at UE1 after x2 is cancelled.
    pub gamma_1: f64,
    /// x2 at UE2.
    pub gamma_2: f64,
}

pub fn compute_sinrs(ch: &ChannelRealization, cfg: &SystemConfig) -> SinrTriple {
    let n0 = cfg.noise_power();
    let p1 = cfg.power_ue1();
    let p2 = cfg.power_ue2();
    let rho_sq = exact_gain_sq(ch.gr, cfg);

    // |h~_1|^2 = rho^2 |h_{r,1}|^2 |h_r|^2
    let relayed = rho_sq * ch.gr1 * ch.gr;
    let combined = ch.g1 + relayed;
    let signal = combined * combined;
    let noise = (relayed * (rho_sq * ch.gr1 + 1.0) + ch.g1) * n0;

    let (gamma_12, gamma_1) = if combined > 0.0 {
        (signal * p2 / (signal * p1 + noise), signal * p1 / noise)
    } else {
        (0.0, 0.0)
    };

    let cascade = ch.gr2 * ch.gr;
    let gamma_2 = if cascade > 0.0 {
        cascade * p2 / (cascade * p1 + (ch.gr2 + 1.0 / rho_sq) * n0)
    } else {
        0.0
    };

    SinrTriple {
        gamma_12,
        gamma_1,
        gamma_2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutageFlags {
    pub ue1_outage: bool,
    pub ue2_outage: bool,
    pub overall_outage: bool,
}

impl OutageFlags {
    pub fn new(ue1_outage: bool, ue2_outage: bool) -> Self {
        OutageFlags {
            ue1_outage,
            ue2_outage,
            overall_outage: ue1_outage || ue2_outage,
        }
    }
}

/// Rate thresholds resolved once per configuration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Thresholds {
    pub ue1: f64,
    pub ue2: f64,
}

impl Thresholds {
    pub fn of(cfg: &SystemConfig) -> Self {
        Thresholds {
            ue1: cfg.threshold_ue1(),
            ue2: cfg.threshold_ue2(),
        }
    }
}

pub(crate) fn outage_with(sinr: &SinrTriple, th: Thresholds) -> OutageFlags {
    let sic_fail = sinr.gamma_12 < th.ue2;
    let ue1 = sic_fail || sinr.gamma_1 < th.ue1;
    let ue2 = sinr.gamma_2 < th.ue2;
    OutageFlags::new(ue1, ue2)
}

/// Outage event of the full scheme: SIC failure at UE1, x1 failure at UE1,
/// or x2 failure at UE2.
pub fn evaluate_outage(ch: &ChannelRealization, cfg: &SystemConfig) -> OutageFlags {
    outage_with(&compute_sinrs(ch, cfg), Thresholds::of(cfg))
}

/// UE1 SINR with the relay-noise amplification and the SIC stage dropped:
/// `(|h_1|^2 + |h~_1|^2) P1 / N0`.
pub fn gamma_1_lower_bound(ch: &ChannelRealization, cfg: &SystemConfig) -> f64 {
    let relayed = exact_gain_sq(ch.gr, cfg) * ch.gr1 * ch.gr;
    (ch.g1 + relayed) * cfg.power_ue1() / cfg.noise_power()
}

/// Outage event of the lower bound, which ignores the SIC stage.
pub fn evaluate_outage_lower_bound(ch: &ChannelRealization, cfg: &SystemConfig) -> OutageFlags {
    lower_bound_with(ch, cfg, Thresholds::of(cfg))
}

pub(crate) fn lower_bound_with(
    ch: &ChannelRealization,
    cfg: &SystemConfig,
    th: Thresholds,
) -> OutageFlags {
    let ue1 = gamma_1_lower_bound(ch, cfg) < th.ue1;
    let ue2 = compute_sinrs(ch, cfg).gamma_2 < th.ue2;
    OutageFlags::new(ue1, ue2)
}
