//! Random temporal networks: an independent Bernoulli coin per node pair
//! and time step.

use crate::seeding;
use crate::temporal_graph::{NodeId, TemporalNetwork, TimeStep};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SynthConfig {
    pub n: usize,
    /// contact probability per (pair, time step)
    pub p: f64,
    pub horizon: TimeStep,
    pub seed: u64,
}

/// Draws the network. Every coin hashes independently out of the seed, so
/// the outcome is reproducible and insensitive to iteration order, and
/// nodes are labeled "0".."n-1".
pub fn generate(config: &SynthConfig) -> Result<TemporalNetwork> {
    if config.n < 2 {
        return Err(Error::InvalidConfig(
            "a synthetic network needs at least two nodes".into(),
        ));
    }
    if !(0.0..1.0).contains(&config.p) {
        return Err(Error::InvalidConfig(
            "the contact probability must lie in [0, 1)".into(),
        ));
    }
    if config.horizon == 0 {
        return Err(Error::InvalidConfig("the horizon must be positive".into()));
    }

    let mut events = Vec::new();
    for t in 1..=config.horizon {
        for u in 0..config.n as NodeId {
            for v in u + 1..config.n as NodeId {
                let coin = seeding::derive(config.seed, &[t as u64, u.into(), v.into()]);
                if seeding::unit_f64(coin) < config.p {
                    events.push((t, u, v));
                }
            }
        }
    }
    let labels = (0..config.n).map(|i| i.to_string()).collect();
    TemporalNetwork::from_events(labels, config.horizon, events)
}
