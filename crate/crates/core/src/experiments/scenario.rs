use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{db_to_linear, linear_to_db, matched_relay_ue1_distance, ConfigParams, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::DEFAULT_TRIALS;

pub const DEFAULT_SEED: u64 = 1;

pub const BUILTIN_NAMES: [&str; 4] = ["case-a", "case-b1", "case-b2", "case-c"];

/// A named configuration plus the sweep it should be run over.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub cfg: SystemConfig,
    pub snr_grid_db: Vec<f64>,
    pub n_trials: u64,
    pub seed: u64,
}

/// Evenly spaced dB grid from `from` to `to` inclusive.
pub fn snr_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && from.is_finite() && to.is_finite()) || to < from {
        return Err(Error::invalid(
            "snr_grid_db",
            format!("bad range {from}..{to} step {step}"),
        ));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| from + k as f64 * step).collect())
}

fn reference_grid() -> Vec<f64> {
    snr_grid(10.0, 35.0, 5.0).expect("static grid")
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        cfg: SystemConfig,
        snr_grid_db: Vec<f64>,
        n_trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(Error::invalid("name", "must not be empty"));
        }
        if snr_grid_db.is_empty() {
            return Err(Error::EmptyGrid("snr_grid_db has no points".into()));
        }
        if snr_grid_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("snr_grid_db", "values must be finite"));
        }
        if snr_grid_db.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("snr_grid_db", "must be sorted ascending"));
        }
        if n_trials == 0 {
            return Err(Error::invalid("n_trials", "must be at least 1"));
        }
        Ok(Scenario {
            name,
            cfg,
            snr_grid_db,
            n_trials,
            seed,
        })
    }

    /// One of the four reference scenarios: relay geometry B-I
    /// (`d_r = 30`, `d_{r,2} = 45`), B-II (swapped), A (relay-to-UE1 distance
    /// matched so both UE1 branches have equal variance) and C
    /// (`lambda1 = 0.4`, outage certain).
    pub fn builtin(name: &str) -> Option<Scenario> {
        let b1 = ConfigParams {
            total_power: db_to_linear(30.0),
            ..ConfigParams::default()
        };
        let params = match name {
            "case-b1" => b1,
            "case-b2" => ConfigParams {
                d_bs_relay: 45.0,
                d_relay_ue2: 30.0,
                ..b1
            },
            "case-a" => ConfigParams {
                d_relay_ue1: matched_relay_ue1_distance(b1.d_bs_ue1, b1.lambda_relay, b1.path_loss_exp),
                ..b1
            },
            "case-c" => ConfigParams { lambda1: 0.4, ..b1 },
            _ => return None,
        };
        let cfg = SystemConfig::new(params).expect("built-in parameters are valid");
        Some(
            Scenario::new(name, cfg, reference_grid(), DEFAULT_TRIALS, DEFAULT_SEED)
                .expect("built-in scenario is valid"),
        )
    }

    /// A built-in name, or else a path to a scenario file.
    pub fn resolve(name_or_path: &str) -> Result<Scenario> {
        match Scenario::builtin(name_or_path) {
            Some(s) => Ok(s),
            None => {
                let path = Path::new(name_or_path);
                if !path.exists() {
                    return Err(Error::invalid(
                        "scenario",
                        format!(
                            "`{name_or_path}` is neither a built-in ({}) nor an existing file",
                            BUILTIN_NAMES.join(", ")
                        ),
                    ));
                }
                Scenario::from_file(path)
            }
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Scenario::from_toml_str(&text).map_err(|e| match e {
            Error::Parse { reason, .. } => Error::Parse {
                what: path.display().to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let f: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
            what: "scenario".into(),
            reason: e.to_string(),
        })?;
        if !f.total_power_db.is_finite() {
            return Err(Error::invalid("total_power_db", "must be finite"));
        }
        let cfg = SystemConfig::new(ConfigParams {
            total_power: db_to_linear(f.total_power_db),
            noise_power: f.noise_power,
            lambda1: f.lambda1,
            lambda_relay: f.lambda_relay,
            rate_ue1: f.rate_ue1,
            rate_ue2: f.rate_ue2,
            d_bs_ue1: f.d_bs_ue1,
            d_bs_relay: f.d_bs_relay,
            d_relay_ue1: f.d_relay_ue1,
            d_relay_ue2: f.d_relay_ue2,
            d_ref: f.d_ref,
            path_loss_exp: f.path_loss_exp,
        })?;
        Scenario::new(f.name, cfg, f.snr_grid_db, f.n_trials, f.seed)
    }

    pub fn to_toml_string(&self) -> String {
        let p = self.cfg.params();
        let f = ScenarioFile {
            name: self.name.clone(),
            snr_grid_db: self.snr_grid_db.clone(),
            n_trials: self.n_trials,
            seed: self.seed,
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
        };
        toml::to_string(&f).expect("scenario serializes")
    }

    pub fn with_grid(mut self, snr_grid_db: Vec<f64>) -> Result<Self> {
        self.snr_grid_db = snr_grid_db;
        Scenario::new(self.name, self.cfg, self.snr_grid_db, self.n_trials, self.seed)
    }

    pub fn with_trials(mut self, n_trials: u64) -> Result<Self> {
        self.n_trials = n_trials;
        Scenario::new(self.name, self.cfg, self.snr_grid_db, self.n_trials, self.seed)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    snr_grid_db: Vec<f64>,
    n_trials: u64,
    seed: u64,
    total_power_db: f64,
    noise_power: f64,
    lambda1: f64,
    lambda_relay: f64,
    rate_ue1: f64,
    rate_ue2: f64,
    d_bs_ue1: f64,
    d_bs_relay: f64,
    d_relay_ue1: f64,
    d_relay_ue2: f64,
    d_ref: f64,
    path_loss_exp: f64,
}
