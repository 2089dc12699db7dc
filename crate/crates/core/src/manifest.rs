//! Provenance record accompanying every emitted artifact. Reruns with an
//! equal manifest (same config, method, and seed) produce byte-identical
//! data files; the timestamp lives here, never in the data.

use serde::{Deserialize, Serialize};

use crate::config::{GridMode, Method, TheoryConfig};
use crate::density::{CorrelationMode, DetectionDensity};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub method: Method,
    pub density: DetectionDensity,
    pub mode: CorrelationMode,
    pub grid_mode: GridMode,
    pub theta_points: usize,
    pub phi_points: usize,
    pub pairs_per_angle: u64,
    pub seed: u64,
    /// Seconds since the Unix epoch at emission time; 0 when no clock is
    /// available (e.g. in the browser demo).
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(cfg: &TheoryConfig, method: Method, version: &str, timestamp_unix: u64) -> Self {
        RunManifest {
            tool: "eprb".to_string(),
            version: version.to_string(),
            method,
            density: cfg.density,
            mode: cfg.mode,
            grid_mode: cfg.grid_mode,
            theta_points: cfg.theta_points,
            phi_points: cfg.phi_points,
            pairs_per_angle: cfg.pairs_per_angle,
            seed: cfg.seed,
            timestamp_unix,
        }
    }
}
