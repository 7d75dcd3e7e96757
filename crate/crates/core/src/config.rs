//! System parameters, derived quantities and scenario classification.
//!
//! All powers are linear. dB values only appear in the on-disk config
//! format and at the CLI boundary.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelVariances;
use crate::error::{Error, Result};

/// Relative tolerance for the `sigma1^2 == lambda * sigma_{r,1}^2` test.
pub const DEFAULT_CASE_TOLERANCE: f64 = 1e-9;

/// Large-scale fading variance `(d / d_ref)^(-alpha)`.
pub fn variance_from_distance(d: f64, d_ref: f64, alpha: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("distance must be positive, got {d}")));
    }
    if !(d_ref > 0.0 && d_ref.is_finite()) {
        return Err(Error::domain(format!(
            "reference distance must be positive, got {d_ref}"
        )));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!(
            "path-loss exponent must be non-negative, got {alpha}"
        )));
    }
    Ok((d / d_ref).powf(-alpha))
}

/// SINR threshold `2^(2R) - 1` for a rate `R` spread over the two-slot frame.
pub fn rate_threshold(rate: f64) -> Result<f64> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::domain(format!("rate must be non-negative, got {rate}")));
    }
    Ok((2.0 * rate).exp2() - 1.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Relay-to-UE1 distance at which `sigma1^2 == lambda * sigma_{r,1}^2`.
pub fn matched_relay_ue1_distance(d_bs_ue1: f64, lambda_relay: f64, alpha: f64) -> f64 {
    d_bs_ue1 * lambda_relay.powf(1.0 / alpha)
}

/// The three branches of the closed-form outage approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// Direct and relayed UE1 branches have equal effective variance.
    CaseA,
    /// Generic power allocation.
    CaseB,
    /// `P2/P1 <= f(R2)`: outage is certain.
    CaseC,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::CaseA => "A",
            CaseLabel::CaseB => "B",
            CaseLabel::CaseC => "C",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unvalidated parameter set. Turn it into a [`SystemConfig`] with
/// [`SystemConfig::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigParams {
    pub total_power: f64,
    pub noise_power: f64,
    pub lambda1: f64,
    pub lambda_relay: f64,
    pub rate_ue1: f64,
    pub rate_ue2: f64,
    pub d_bs_ue1: f64,
    pub d_bs_relay: f64,
    pub d_relay_ue1: f64,
    pub d_relay_ue2: f64,
    pub d_ref: f64,
    pub path_loss_exp: f64,
}

impl Default for ConfigParams {
    /// Case B-I geometry at 30 dB transmit SNR.
    fn default() -> Self {
        ConfigParams {
            total_power: 1000.0,
            noise_power: 1.0,
            lambda1: 0.2,
            lambda_relay: 0.3,
            rate_ue1: 1.0,
            rate_ue2: 0.7,
            d_bs_ue1: 30.0,
            d_bs_relay: 30.0,
            d_relay_ue1: 30.0,
            d_relay_ue2: 45.0,
            d_ref: 20.0,
            path_loss_exp: 2.0,
        }
    }
}

/// A validated system configuration. Immutable once built; use the
/// `with_*` methods to derive variants.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    params: ConfigParams,
    variances: ChannelVariances,
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("must be positive and finite, got {v}")))
    }
}

impl SystemConfig {
    pub fn new(params: ConfigParams) -> Result<Self> {
        positive("total_power", params.total_power)?;
        positive("noise_power", params.noise_power)?;
        if !(params.lambda1 > 0.0 && params.lambda1 < 1.0) {
            return Err(Error::invalid(
                "lambda1",
                format!("must lie in (0, 1), got {}", params.lambda1),
            ));
        }
        positive("lambda_relay", params.lambda_relay)?;
        positive("rate_ue1", params.rate_ue1)?;
        positive("rate_ue2", params.rate_ue2)?;
        for (key, d) in [
            ("d_bs_ue1", params.d_bs_ue1),
            ("d_bs_relay", params.d_bs_relay),
            ("d_relay_ue1", params.d_relay_ue1),
            ("d_relay_ue2", params.d_relay_ue2),
            ("d_ref", params.d_ref),
        ] {
            positive(key, d)?;
        }
        if !(params.path_loss_exp >= 0.0 && params.path_loss_exp.is_finite()) {
            return Err(Error::invalid(
                "path_loss_exp",
                format!("must be non-negative, got {}", params.path_loss_exp),
            ));
        }
        // SIC at UE1 decodes x2 first, which requires P1 < P2.
        if params.lambda1 >= 0.5 {
            return Err(Error::invalid(
                "lambda1",
                format!(
                    "NOMA ordering requires P1 < P2, i.e. lambda1 < 0.5, got {}",
                    params.lambda1
                ),
            ));
        }

        let var = |d| variance_from_distance(d, params.d_ref, params.path_loss_exp);
        let variances = ChannelVariances::new(
            var(params.d_bs_ue1)?,
            var(params.d_bs_relay)?,
            var(params.d_relay_ue1)?,
            var(params.d_relay_ue2)?,
        )?;
        Ok(SystemConfig { params, variances })
    }

    pub fn params(&self) -> &ConfigParams {
        &self.params
    }

    pub fn variances(&self) -> ChannelVariances {
        self.variances
    }

    pub fn total_power(&self) -> f64 {
        self.params.total_power
    }

    pub fn noise_power(&self) -> f64 {
        self.params.noise_power
    }

    pub fn lambda1(&self) -> f64 {
        self.params.lambda1
    }

    pub fn lambda_relay(&self) -> f64 {
        self.params.lambda_relay
    }

    pub fn rate_ue1(&self) -> f64 {
        self.params.rate_ue1
    }

    pub fn rate_ue2(&self) -> f64 {
        self.params.rate_ue2
    }

    /// BS power on UE1's message, `lambda1 * P_T`.
    pub fn power_ue1(&self) -> f64 {
        self.params.lambda1 * self.params.total_power
    }

    /// BS power on UE2's message, `(1 - lambda1) * P_T`.
    pub fn power_ue2(&self) -> f64 {
        (1.0 - self.params.lambda1) * self.params.total_power
    }

    pub fn relay_power(&self) -> f64 {
        self.params.lambda_relay * self.params.total_power
    }

    /// Transmit SNR `P_T / N0` (linear).
    pub fn transmit_snr(&self) -> f64 {
        self.params.total_power / self.params.noise_power
    }

    pub fn transmit_snr_db(&self) -> f64 {
        linear_to_db(self.transmit_snr())
    }

    pub fn threshold_ue1(&self) -> f64 {
        (2.0 * self.params.rate_ue1).exp2() - 1.0
    }

    pub fn threshold_ue2(&self) -> f64 {
        (2.0 * self.params.rate_ue2).exp2() - 1.0
    }

    /// Sets `P_T` so that `P_T / N0` equals `snr_db`.
    pub fn with_snr_db(&self, snr_db: f64) -> Result<Self> {
        self.with_total_power(self.params.noise_power * db_to_linear(snr_db))
    }

    pub fn with_total_power(&self, total_power: f64) -> Result<Self> {
        SystemConfig::new(ConfigParams {
            total_power,
            ..self.params.clone()
        })
    }

    pub fn with_lambda1(&self, lambda1: f64) -> Result<Self> {
        SystemConfig::new(ConfigParams {
            lambda1,
            ..self.params.clone()
        })
    }

    /// `P2/P1 <= f(R2)`.
    pub fn is_outage_certain(&self) -> bool {
        let ratio = (1.0 - self.params.lambda1) / self.params.lambda1;
        ratio <= self.threshold_ue2()
    }

    pub fn classify_case(&self, tol: f64) -> CaseLabel {
        if self.is_outage_certain() {
            return CaseLabel::CaseC;
        }
        let s1 = self.variances.bs_ue1;
        let relayed = self.params.lambda_relay * self.variances.relay_ue1;
        if (s1 - relayed).abs() <= tol * s1 {
            CaseLabel::CaseA
        } else {
            CaseLabel::CaseB
        }
    }

    pub fn case(&self) -> CaseLabel {
        self.classify_case(DEFAULT_CASE_TOLERANCE)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse { reason, .. } => Error::Parse {
                what: path.display().to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse {
            what: "config".into(),
            reason: e.to_string(),
        })?;
        file.into_config()
    }

    pub fn to_file_repr(&self) -> ConfigFile {
        let p = &self.params;
        ConfigFile {
            total_power_db: linear_to_db(p.total_power),
            noise_power: p.noise_power,
            lambda1: p.lambda1,
            lambda_relay: p.lambda_relay,
            rate_ue1: p.rate_ue1,
            rate_ue2: p.rate_ue2,
            d_bs_ue1: p.d_bs_ue1,
            d_bs_relay: p.d_bs_relay,
            d_relay_ue1: p.d_relay_ue1,
            d_relay_ue2: p.d_relay_ue2,
            d_ref: p.d_ref,
            path_loss_exp: p.path_loss_exp,
        }
    }
}

/// On-disk representation: exactly these keys, nothing else.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub total_power_db: f64,
    pub noise_power: f64,
    pub lambda1: f64,
    pub lambda_relay: f64,
    pub rate_ue1: f64,
    pub rate_ue2: f64,
    pub d_bs_ue1: f64,
    pub d_bs_relay: f64,
    pub d_relay_ue1: f64,
    pub d_relay_ue2: f64,
    pub d_ref: f64,
    pub path_loss_exp: f64,
}

impl ConfigFile {
    pub fn into_config(self) -> Result<SystemConfig> {
        if !self.total_power_db.is_finite() {
            return Err(Error::invalid("total_power_db", "must be finite"));
        }
        SystemConfig::new(ConfigParams {
            total_power: db_to_linear(self.total_power_db),
            noise_power: self.noise_power,
            lambda1: self.lambda1,
            lambda_relay: self.lambda_relay,
            rate_ue1: self.rate_ue1,
            rate_ue2: self.rate_ue2,
            d_bs_ue1: self.d_bs_ue1,
            d_bs_relay: self.d_bs_relay,
            d_relay_ue1: self.d_relay_ue1,
            d_relay_ue2: self.d_relay_ue2,
            d_ref: self.d_ref,
            path_loss_exp: self.path_loss_exp,
        })
    }
}
