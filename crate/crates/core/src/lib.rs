//! Outage analysis for two-user downlink cooperative NOMA with a
//! half-duplex amplify-and-forward relay.
//!
//! The base station superimposes `x1` (near user UE1, power `P1`) and `x2`
//! (far user UE2, power `P2 > P1`). The relay amplifies what it heard and
//! re-broadcasts it in a second slot; UE1 combines both copies and uses
//! SIC, UE2 relies on the relay alone.
//!
//! * [`config`]: parameters, derived variances and thresholds, case labels.
//! * [`channel`]: reproducible Rayleigh power-gain sampling.
//! * [`sinr`]: per-realization SINRs and outage events.
//! * [`analytic`]: closed-form approximation, asymptote, K1, quadrature oracles.
//! * [`montecarlo`]: parallel, deterministic outage estimation.
//! * [`oma`]: three-slot cooperative OMA baseline.
//! * [`experiments`]: scenarios, CSV output and the validation suite.

pub mod analytic;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiments;
pub mod montecarlo;
pub mod oma;
pub mod sinr;

pub use analytic::{p_out_approx, p_out_asymptotic, AnalyticBreakdown};
pub use channel::{ChannelRealization, ChannelSampler, ChannelVariances};
pub use config::{CaseLabel, ConfigParams, SystemConfig};
pub use error::{Error, Result};
pub use montecarlo::{estimate_outage, Estimator, McEngine, OutageEstimate};
pub use oma::OmaConfig;
pub use sinr::{compute_sinrs, evaluate_outage, OutageFlags, SinrTriple};
