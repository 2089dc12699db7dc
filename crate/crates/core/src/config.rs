use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::density::{CorrelationMode, DetectionDensity};
use crate::error::{Error, Result};

/// Discretization used by the quadrature route.
///
/// `PaperHalfInterval` replicates the reference rectangular scheme
/// end-to-end: theta nodes are the left endpoints {k*pi/n} on [0, pi) with
/// weight pi/n and the integral doubled (valid because f(theta)f(theta-phi)
/// has period pi for the cosine-based densities), and quadrature sweeps
/// sample phi on the matching half-open grid {k*pi/n}. `FullPeriod`
/// integrates over [0, 2pi) without the symmetry shortcut and sweeps phi on
/// the inclusive grid [0, pi]; it is the safe default for custom densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    PaperHalfInterval,
    FullPeriod,
}

/// Computation path for a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    Quad,
    Dft,
    Mc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::Closed => "closed",
            Method::Quad => "quad",
            Method::Dft => "dft",
            Method::Mc => "mc",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::Closed),
            "quad" => Ok(Method::Quad),
            "dft" => Ok(Method::Dft),
            "mc" => Ok(Method::Mc),
            other => Err(Error::InvalidConfig(format!(
                "unknown method {other:?}; expected closed, quad, dft, or mc"
            ))),
        }
    }
}

/// Everything a sweep needs: density, source correlation, grids, and the
/// Monte Carlo budget. Immutable after construction; plain data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryConfig {
    pub density: DetectionDensity,
    pub mode: CorrelationMode,
    pub theta_points: usize,
    pub phi_points: usize,
    pub grid_mode: GridMode,
    pub seed: u64,
    pub pairs_per_angle: u64,
}

impl TheoryConfig {
    /// Paper-style defaults: 50 theta nodes, 50 phi points, half-interval
    /// grid, seed 42, one million pairs per angle.
    pub fn new(density: DetectionDensity, mode: CorrelationMode) -> Self {
        TheoryConfig {
            density,
            mode,
            theta_points: 50,
            phi_points: 50,
            grid_mode: GridMode::PaperHalfInterval,
            seed: 42,
            pairs_per_angle: 1_000_000,
        }
    }

    pub fn with_grid(mut self, grid_mode: GridMode) -> Self {
        self.grid_mode = grid_mode;
        self
    }

    pub fn with_points(mut self, theta_points: usize, phi_points: usize) -> Self {
        self.theta_points = theta_points;
        self.phi_points = phi_points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pairs(mut self, pairs_per_angle: u64) -> Self {
        self.pairs_per_angle = pairs_per_angle;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        if self.theta_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "theta_points must be >= 2, got {}",
                self.theta_points
            )));
        }
        if self.phi_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "phi_points must be >= 2, got {}",
                self.phi_points
            )));
        }
        if self.pairs_per_angle < 1 {
            return Err(Error::InvalidConfig(
                "pairs_per_angle must be >= 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// n equally spaced phi values on [0, pi], both endpoints included.
pub fn phi_grid_inclusive(n: usize) -> Vec<Angle> {
    (0..n)
        .map(|k| {
            if k + 1 == n {
                Angle::PI
            } else {
                Angle::from_radians(PI * k as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// n left-endpoint phi values {k*pi/n} on [0, pi), matching the reference
/// rectangular discretization.
pub fn phi_grid_half_open(n: usize) -> Vec<Angle> {
    (0..n)
        .map(|k| Angle::from_radians(PI * k as f64 / n as f64))
        .collect()
}
