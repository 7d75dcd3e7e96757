//! Rayleigh block-fading channel power gains.
//!
//! Every trial draws its own ChaCha stream keyed by `(seed, trial_index)`,
//! so a realization depends only on those two numbers and never on how
//! trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Mean power gain of each of the four links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelVariances {
    pub bs_ue1: f64,
    pub bs_relay: f64,
    pub relay_ue1: f64,
    pub relay_ue2: f64,
}

impl ChannelVariances {
    pub fn new(bs_ue1: f64, bs_relay: f64, relay_ue1: f64, relay_ue2: f64) -> Result<Self> {
        for (name, v) in [
            ("bs_ue1", bs_ue1),
            ("bs_relay", bs_relay),
            ("relay_ue1", relay_ue1),
            ("relay_ue2", relay_ue2),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "variance of {name} must be positive, got {v}"
                )));
            }
        }
        Ok(ChannelVariances {
            bs_ue1,
            bs_relay,
            relay_ue1,
            relay_ue2,
        })
    }

    fn as_array(&self) -> [f64; 4] {
        [self.bs_ue1, self.bs_relay, self.relay_ue1, self.relay_ue2]
    }
}

/// Squared channel magnitudes for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    /// `|h_1|^2`, BS to UE1.
    pub g1: f64,
    /// `|h_r|^2`, BS to relay.
    pub gr: f64,
    /// `|h_{r,1}|^2`, relay to UE1.
    pub gr1: f64,
    /// `|h_{r,2}|^2`, relay to UE2.
    pub gr2: f64,
}

impl ChannelRealization {
    pub fn zero() -> Self {
        ChannelRealization {
            g1: 0.0,
            gr: 0.0,
            gr1: 0.0,
            gr2: 0.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ChannelRealization {
            g1: self.g1 * factor,
            gr: self.gr * factor,
            gr1: self.gr1 * factor,
            gr2: self.gr2 * factor,
        }
    }
}

/// Draws realizations for a fixed `(variances, seed)` pair.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    variances: ChannelVariances,
    root: ChaCha8Rng,
}

impl ChannelSampler {
    pub fn new(variances: ChannelVariances, seed: u64) -> Self {
        ChannelSampler {
            variances,
            root: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn variances(&self) -> ChannelVariances {
        self.variances
    }

    pub fn sample(&self, trial_index: u64) -> ChannelRealization {
        let mut rng = self.root.clone();
        rng.set_stream(trial_index);
        let [s1, sr, sr1, sr2] = self.variances.as_array();
        ChannelRealization {
            g1: exponential(&mut rng, s1),
            gr: exponential(&mut rng, sr),
            gr1: exponential(&mut rng, sr1),
            gr2: exponential(&mut rng, sr2),
        }
    }
}

/// Inverse-CDF exponential draw with the given mean.
fn exponential<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    // random::<f64>() is in [0, 1), so 1 - u is in (0, 1] and ln never sees 0.
    let u: f64 = rng.random();
    -mean * (1.0 - u).ln()
}

pub fn sample_realization(
    variances: ChannelVariances,
    seed: u64,
    trial_index: u64,
) -> ChannelRealization {
    ChannelSampler::new(variances, seed).sample(trial_index)
}
