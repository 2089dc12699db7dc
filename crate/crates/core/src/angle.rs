use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// A plane angle in radians.
///
/// Analyzer orientations, hidden-variable draws, and grid nodes all travel
/// through the public API as `Angle` so they cannot be confused with other
/// scalars. Internals unwrap to `f64` immediately. Angles are kept in radians
/// everywhere; degrees are converted at input boundaries only.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const PI: Angle = Angle(PI);

    pub fn from_radians(radians: f64) -> Self {
        assert!(radians.is_finite(), "angle must be finite, got {radians}");
        Angle(radians)
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Self::from_radians(degrees.to_radians())
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }

    /// Reduce to the fundamental period [0, 2pi).
    pub fn reduced(self) -> Self {
        Angle(self.0.rem_euclid(TAU))
    }

    /// Fold onto [0, pi], the fundamental domain of an even 2pi-periodic
    /// function: phi and 2pi - phi are identified.
    pub fn folded(self) -> Self {
        let r = self.0.rem_euclid(TAU);
        Angle(if r > PI { TAU - r } else { r })
    }

    /// Separation |other - self| folded onto [0, pi].
    pub fn separation(self, other: Angle) -> Angle {
        Angle(other.0 - self.0).folded()
    }
}
