//! Pilot-calibrated thresholds, read from `expectations.json` at build time.

use serde::{Deserialize, Serialize};

use super::rng::RngConfig;

const EXPECTATIONS: &str = include_str!("../../expectations.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectations {
    pub version: u32,
    pub meeting: MeetingExpectations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeetingExpectations {
    pub n_max: u32,
    pub pairs: u64,
    pub seed: u64,
    pub replicas: u32,
    /// A pair counts when it has at least this many coincidence levels.
    pub min_meetings: usize,
    /// Required fraction of all pairs that count.
    pub min_fraction: f64,
    /// Level whose median coincidence count must be strictly exceeded at
    /// `n_max`.
    pub median_checkpoint: u32,
    /// Figures from the calibration run, for reference only.
    pub pilot: serde_json::Value,
}

impl MeetingExpectations {
    pub fn rng(&self) -> RngConfig {
        RngConfig {
            seed: self.seed,
            replicas: self.replicas,
        }
    }
}

pub fn expectations() -> Expectations {
    serde_json::from_str(EXPECTATIONS).expect("expectations.json is valid")
}
