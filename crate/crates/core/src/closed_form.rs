//! Exact analytic reference curves.
//!
//! Two detection models admit closed forms: the deterministic naive toy
//! (piecewise-constant spin products, affine expectation) and the cosine
//! projection density, whose correlation and rate integrals have published
//! antiderivatives. These are the oracles every numerical route is checked
//! against. Formulas are defined on phi in [0, pi]; callers exploit the
//! symmetry E(2pi - phi) = E(phi) instead of extending them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::config::phi_grid_inclusive;
use crate::curve::{Curve, CurvePoint};
use crate::density::{qm_expectation, CorrelationMode, DetectionDensity};
use crate::error::{Error, Result};

const RANGE_SLACK: f64 = 1e-12;

fn check_phi_range(phi: Angle) -> Result<f64> {
    let p = phi.radians();
    if !(-RANGE_SLACK..=PI + RANGE_SLACK).contains(&p) {
        return Err(Error::PhiOutOfRange { phi: p });
    }
    Ok(p.clamp(0.0, PI))
}

/// Expectation of the naive toy model: (2/pi) * phi - 1, a straight line
/// from -1 at aligned analyzers to +1 at anti-aligned ones.
pub fn naive_expectation(phi: Angle) -> Result<f64> {
    let p = check_phi_range(phi)?;
    Ok(2.0 / PI * p - 1.0)
}

/// Spin signs registered by the two analyzers in the naive toy model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinSigns {
    pub a: i32,
    pub b: i32,
    pub product: i32,
}

/// A = sign cos(theta), B = sign[-cos(theta - phi)], and their product,
/// which is piecewise constant over four intervals of theta. sign(0) := +1.
pub fn naive_sign_table(theta: Angle, phi: Angle) -> Result<SpinSigns> {
    let th = theta.radians();
    if !(-FRAC_PI_2 - RANGE_SLACK..3.0 * FRAC_PI_2).contains(&th) {
        return Err(Error::ThetaOutOfRange { theta: th });
    }
    check_phi_range(phi)?;
    let sign = |x: f64| if x >= 0.0 { 1 } else { -1 };
    let a = sign(th.cos());
    let b = sign(-(th - phi.radians()).cos());
    Ok(SpinSigns { a, b, product: a * b })
}

/// Closed forms for the projection density at one phi: the anticorrelated
/// and correlated half-period detection probabilities, the pair rate, the
/// source-signed correlation, and the normalized expectation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCurves {
    /// Probability of an anticorrelated pair over the half period.
    pub c_minus: f64,
    /// Probability of a correlated pair over the half period.
    pub c_plus: f64,
    /// Pair rate t(phi) = 2 sin(phi) + (pi - 2 phi) cos(phi).
    pub t: f64,
    /// Source-signed correlation -pi cos(phi) (anticorrelated convention).
    pub c_signed: f64,
    /// Normalized expectation -pi cos(phi) / t(phi).
    pub expectation: f64,
}

/// Evaluate the projection-density closed forms at phi in [0, pi].
pub fn projection_curves(phi: Angle) -> Result<ProjectionCurves> {
    let p = check_phi_range(phi)?;
    let (sin, cos) = p.sin_cos();
    let c_minus = 0.5 * (sin - p * cos);
    let c_plus = 0.5 * (sin + (PI - p) * cos);
    let t = 2.0 * sin + (PI - 2.0 * p) * cos;
    let c_signed = -PI * cos;
    Ok(ProjectionCurves {
        c_minus,
        c_plus,
        t,
        c_signed,
        expectation: c_signed / t,
    })
}

/// Projection-density expectation normalized by the aligned-analyzer rate
/// t(0) = pi instead of the varying t(phi): c(phi)/pi = -cos(phi) exactly.
pub fn projection_unnormalized_expectation(phi: Angle) -> Result<f64> {
    let p = check_phi_range(phi)?;
    Ok(-p.cos())
}

/// Closed-form sweep over the inclusive phi grid [0, pi]. Only the naive
/// and projection densities have closed forms; other densities error.
pub fn closed_curve(
    density: DetectionDensity,
    mode: CorrelationMode,
    phi_points: usize,
) -> Result<Curve> {
    if phi_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "phi_points must be >= 2, got {phi_points}"
        )));
    }
    let sigma = mode.sign();
    let points = phi_grid_inclusive(phi_points)
        .into_iter()
        .map(|phi| {
            let p = phi.radians();
            let (c, t) = match density {
                // raw integrals of sign(cos theta) sign(cos(theta - phi)):
                // the signed product integrates to 2pi - 4phi, the absolute
                // one to 2pi
                DetectionDensity::NaiveSg => (TAU - 4.0 * p, TAU),
                DetectionDensity::Projection => {
                    let pc = projection_curves(phi)?;
                    (PI * p.cos(), pc.t)
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "no closed form for the {} density",
                        other.label()
                    )))
                }
            };
            Ok(CurvePoint {
                phi,
                c,
                t,
                e_hv: sigma * c / t,
                e_ref: qm_expectation(phi, mode),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve::new(points))
}
