//! Detection densities: the signed, periodic functions f(lambda') whose
//! magnitude is the probability that a detector registers a particle with
//! local hidden angle lambda', and whose sign is the registered spin.
//!
//! Every built-in density is even, 2pi-periodic, and bounded by 1 in
//! magnitude. The signed power a^|b| extends exponentiation oddly to
//! negative bases so that cos^p keeps the spin sign of the projection.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};

/// Default exponent for the signed-power cosine density, 1/e at full f64
/// precision (not the rounded 0.3679).
pub const SIGNED_POWER_DEFAULT_EXPONENT: f64 = 1.0 / std::f64::consts::E;

/// Signed power a^|b|: a^b for a >= 0, -((-a)^b) for a < 0.
///
/// Domain-checked variant: requires |a| <= 1 and b > 0 so the result stays
/// in [-1, 1]. The unchecked kernel is used in hot loops after the density
/// itself has been validated.
pub fn signed_pow(base: f64, exponent: f64) -> Result<f64> {
    // negated comparisons so NaN inputs land in the error branch
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(base.abs() <= 1.0) || !(exponent > 0.0) {
        return Err(Error::SignedPowDomain { base, exponent });
    }
    Ok(signed_pow_raw(base, exponent))
}

#[inline]
pub(crate) fn signed_pow_raw(base: f64, exponent: f64) -> f64 {
    if base >= 0.0 {
        base.powf(exponent)
    } else {
        -((-base).powf(exponent))
    }
}

/// Which spin the particle carries and how often it is detected, as a
/// function of the hidden angle in detector-local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DetectionDensity {
    /// sign(cos lambda'): unit detection probability, spin from the sign of
    /// the projection. The deterministic toy model; sign(0) := +1.
    NaiveSg,
    /// cos(lambda'): detection probability |cos|, spin from the sign.
    /// Closed forms exist for its correlation and rate integrals.
    Projection,
    /// cos(lambda')^(1/e) under the signed power; the flattened density
    /// whose expectation tracks the cosine law to about a percent.
    SignedPowerCosine { exponent: f64 },
    /// cos(lambda')^p for a caller-chosen exponent p > 0.
    Custom { exponent: f64 },
}

impl DetectionDensity {
    pub fn naive() -> Self {
        DetectionDensity::NaiveSg
    }

    pub fn projection() -> Self {
        DetectionDensity::Projection
    }

    /// The signed-power cosine density at its default exponent 1/e.
    pub fn signed_power() -> Self {
        DetectionDensity::SignedPowerCosine {
            exponent: SIGNED_POWER_DEFAULT_EXPONENT,
        }
    }

    pub fn custom(exponent: f64) -> Result<Self> {
        let d = DetectionDensity::Custom { exponent };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DetectionDensity::NaiveSg | DetectionDensity::Projection => Ok(()),
            DetectionDensity::SignedPowerCosine { exponent }
            | DetectionDensity::Custom { exponent } => {
                if exponent.is_finite() && exponent > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!(
                        "density exponent must be finite and positive, got {exponent}"
                    )))
                }
            }
        }
    }

    /// Evaluate f(lambda'). Result is in [-1, 1] for any valid density.
    pub fn eval(&self, lambda: Angle) -> f64 {
        self.eval_raw(lambda.radians())
    }

    #[inline]
    pub(crate) fn eval_raw(&self, lambda: f64) -> f64 {
        let c = lambda.cos();
        match *self {
            DetectionDensity::NaiveSg => {
                if c >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            DetectionDensity::Projection => c,
            DetectionDensity::SignedPowerCosine { exponent }
            | DetectionDensity::Custom { exponent } => signed_pow_raw(c, exponent),
        }
    }

    /// Short identifier used in manifests and plot legends.
    pub fn label(&self) -> String {
        match *self {
            DetectionDensity::NaiveSg => "naive".to_string(),
            DetectionDensity::Projection => "proj".to_string(),
            DetectionDensity::SignedPowerCosine { .. } => "pow".to_string(),
            DetectionDensity::Custom { exponent } => format!("custom(p={exponent})"),
        }
    }

    pub fn exponent(&self) -> Option<f64> {
        match *self {
            DetectionDensity::SignedPowerCosine { exponent }
            | DetectionDensity::Custom { exponent } => Some(exponent),
            _ => None,
        }
    }
}

/// Whether the source emits spin-correlated or spin-anticorrelated pairs.
///
/// For an anticorrelated source the second particle's spin is the negative
/// of the first (sigma = -1); the normalized expectation is
/// E = sigma * c(phi) / t(phi), which reproduces -cos(phi) under quantum
/// mechanics. For a correlated source sigma = +1 and the reference is
/// +cos(phi) (with phi already in the doubled-angle convention for photons).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    Correlated,
    Anticorrelated,
}

impl CorrelationMode {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            CorrelationMode::Correlated => 1.0,
            CorrelationMode::Anticorrelated => -1.0,
        }
    }
}

/// Quantum-mechanical reference expectation at analyzer separation phi.
pub fn qm_expectation(phi: Angle, mode: CorrelationMode) -> f64 {
    mode.sign() * phi.radians().cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

    fn builtins() -> Vec<DetectionDensity> {
        vec![
            DetectionDensity::naive(),
            DetectionDensity::projection(),
            DetectionDensity::signed_power(),
            DetectionDensity::custom(0.7).unwrap(),
        ]
    }

    #[test]
    fn signed_pow_examples() {
        assert_abs_diff_eq!(signed_pow(1.0, SIGNED_POWER_DEFAULT_EXPONENT).unwrap(), 1.0);
        assert_abs_diff_eq!(signed_pow(0.0, SIGNED_POWER_DEFAULT_EXPONENT).unwrap(), 0.0);
        // -exp(0.3679 * ln 0.5), computed independently
        assert_abs_diff_eq!(
            signed_pow(-0.5, 0.3679).unwrap(),
            -0.774909641741,
            epsilon = 1e-9
        );
    }

    #[test]
    fn signed_pow_domain_errors() {
        assert!(matches!(
            signed_pow(1.5, 0.5),
            Err(Error::SignedPowDomain { .. })
        ));
        assert!(matches!(
            signed_pow(0.5, 0.0),
            Err(Error::SignedPowDomain { .. })
        ));
        assert!(matches!(
            signed_pow(0.5, -1.0),
            Err(Error::SignedPowDomain { .. })
        ));
        assert!(signed_pow(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn eval_density_examples() {
        let proj = DetectionDensity::projection();
        assert_abs_diff_eq!(proj.eval(Angle::ZERO), 1.0);
        assert_abs_diff_eq!(proj.eval(Angle::from_radians(FRAC_PI_2)), 0.0, epsilon = 1e-15);
        // signed_pow(cos(pi/3), 1/e) = signed_pow(0.5, 1/e)
        let pow = DetectionDensity::signed_power();
        assert_abs_diff_eq!(
            pow.eval(Angle::from_radians(FRAC_PI_3)),
            0.774920684510,
            epsilon = 1e-9
        );
    }

    #[test]
    fn qm_expectation_examples() {
        assert_abs_diff_eq!(
            qm_expectation(Angle::ZERO, CorrelationMode::Anticorrelated),
            -1.0
        );
        assert_abs_diff_eq!(
            qm_expectation(Angle::from_radians(FRAC_PI_2), CorrelationMode::Anticorrelated),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            qm_expectation(Angle::PI, CorrelationMode::Correlated),
            -1.0
        );
    }

    #[test]
    fn densities_bounded_even_periodic() {
        // 1e4 random hidden angles per density: |f| <= 1, f even, f 2pi-periodic.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for d in builtins() {
            for _ in 0..10_000 {
                let x: f64 = rng.random::<f64>() * 2.0 * TAU - TAU;
                let f = d.eval_raw(x);
                assert!(f.abs() <= 1.0, "{d:?} at {x}: |{f}| > 1");
                assert_abs_diff_eq!(f, d.eval_raw(-x), epsilon = 1e-12);
                assert_abs_diff_eq!(f, d.eval_raw(x + TAU), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn naive_sign_tie_is_plus_one() {
        assert_eq!(DetectionDensity::naive().eval_raw(FRAC_PI_2 - 1e-14), 1.0);
        // cos(pi/2) in f64 is a tiny positive residue; the tie convention keeps it +1
        assert_eq!(DetectionDensity::naive().eval_raw(0.0), 1.0);
        assert_eq!(DetectionDensity::naive().eval_raw(PI), -1.0);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(DetectionDensity::custom(0.0).is_err());
        assert!(DetectionDensity::custom(-1.0).is_err());
        assert!(DetectionDensity::custom(f64::INFINITY).is_err());
    }

    proptest! {
        #[test]
        fn signed_pow_is_odd_in_base(a in -1.0f64..=1.0, b in 0.01f64..5.0) {
            let lhs = signed_pow(-a, b).unwrap();
            let rhs = -signed_pow(a, b).unwrap();
            // exactly equal: both branches compute the same powf (+-0 identified)
            prop_assert!(lhs == rhs, "{} != {}", lhs, rhs);
        }

        #[test]
        fn signed_pow_unit_exponent_is_identity(a in -1.0f64..=1.0) {
            prop_assert!((signed_pow(a, 1.0).unwrap() - a).abs() <= 1e-15);
        }

        #[test]
        fn signed_pow_magnitude_bounded(a in -1.0f64..=1.0, b in 0.01f64..5.0) {
            prop_assert!(signed_pow(a, b).unwrap().abs() <= 1.0);
        }
    }
}
