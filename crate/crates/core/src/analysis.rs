//! Deviation statistics, Bell-inequality evaluation and scanning, and the
//! exponent tradeoff frontier.
//!
//! Statistics conventions (they matter: the reported percentages depend on
//! them): the t channel is measured relative to the center of its
//! oscillation band, (max + min)/2, with the population standard deviation
//! normalized by that center. The expectation channel is measured as the
//! absolute difference E - E_ref on the dimensionless [-1, 1] scale. This
//! mixed convention is the one consistent with the reference statistics for
//! both detection models.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::config::TheoryConfig;
use crate::curve::Curve;
use crate::density::DetectionDensity;
use crate::error::{Error, Result};
use crate::quadrature::sweep_curve;

/// Treat |lhs - rhs| at or under this as a tie, not a violation: the
/// deterministic toy model saturates the inequality exactly and rounding
/// noise (~1e-16) must not flip it.
pub const BELL_TIE_EPS: f64 = 1e-12;

/// Relative difference with a unit floor: |a - b| / max(1, |a|, |b|).
/// The floor makes comparisons near zero absolute, which is what the
/// cross-path tolerance contracts mean by "relative".
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Deviation statistics of a curve against its reference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Center of the t band, (max + min) / 2.
    pub mean_t: f64,
    /// max |t - mean_t| / mean_t.
    pub max_rel_dev_t: f64,
    /// Population std of t, normalized by mean_t.
    pub std_rel_dev_t: f64,
    /// max |e_hv - e_ref| (fraction of the full scale 1).
    pub max_abs_dev_e: f64,
    /// Population std of (e_hv - e_ref).
    pub std_abs_dev_e: f64,
    pub sample_points: usize,
}

pub fn deviation_report(curve: &Curve) -> Result<DeviationReport> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let n = curve.len() as f64;
    let center = curve.t_center();
    let (max_rel_dev_t, std_rel_dev_t) = if center == 0.0 {
        (0.0, 0.0)
    } else {
        let mean_t: f64 = curve.iter().map(|p| p.t).sum::<f64>() / n;
        let var_t: f64 = curve.iter().map(|p| (p.t - mean_t).powi(2)).sum::<f64>() / n;
        let max_dev = curve
            .iter()
            .map(|p| (p.t - center).abs())
            .fold(0.0, f64::max);
        (max_dev / center, var_t.sqrt() / center)
    };
    let mean_diff: f64 = curve.iter().map(|p| p.e_diff()).sum::<f64>() / n;
    let var_diff: f64 = curve
        .iter()
        .map(|p| (p.e_diff() - mean_diff).powi(2))
        .sum::<f64>()
        / n;
    let max_abs_dev_e = curve
        .iter()
        .map(|p| p.e_diff().abs())
        .fold(0.0, f64::max);
    Ok(DeviationReport {
        mean_t: center,
        max_rel_dev_t,
        std_rel_dev_t,
        max_abs_dev_e,
        std_abs_dev_e: var_diff.sqrt(),
        sample_points: curve.len(),
    })
}

/// One evaluated instance of |E(a,b) - E(a,c)| <= 1 + E(b,c).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellTriple {
    pub a: Angle,
    pub b: Angle,
    pub c: Angle,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

impl BellTriple {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Evaluate the inequality for an expectation that depends only on the
/// analyzer separation. Separations are folded onto [0, pi].
pub fn bell_evaluate(expectation: impl Fn(Angle) -> f64, a: Angle, b: Angle, c: Angle) -> BellTriple {
    let lhs = (expectation(a.separation(b)) - expectation(a.separation(c))).abs();
    let rhs = 1.0 + expectation(b.separation(c));
    BellTriple {
        a,
        b,
        c,
        lhs,
        rhs,
        violated: lhs > rhs + BELL_TIE_EPS,
    }
}

/// Exhaustive scan of ordered triples a < b < c on the grid {k * step} over
/// [0, pi], sorted by violation margin, strongest first. Ties are broken by
/// ascending (a, b, c) so the canonical representative of a degenerate
/// maximum family comes first. The step must divide pi.
pub fn bell_scan(expectation: impl Fn(Angle) -> f64, step: Angle) -> Result<Vec<BellTriple>> {
    let step_rad = step.radians();
    if !step_rad.is_finite() || step_rad <= 0.0 {
        return Err(Error::BadScanStep { step: step_rad });
    }
    let divisions = PI / step_rad;
    if (divisions - divisions.round()).abs() > 1e-9 * divisions.max(1.0) {
        return Err(Error::BadScanStep { step: step_rad });
    }
    let m = divisions.round() as usize;
    // every separation between grid angles is itself a grid multiple
    let e_at: Vec<f64> = (0..=m)
        .map(|k| expectation(Angle::from_radians(step_rad * k as f64)))
        .collect();
    let angle_at = |k: usize| Angle::from_radians(step_rad * k as f64);
    let mut triples = Vec::with_capacity(m * (m + 1) * (m + 2) / 6);
    for i in 0..=m {
        for j in (i + 1)..=m {
            for k in (j + 1)..=m {
                let lhs = (e_at[j - i] - e_at[k - i]).abs();
                let rhs = 1.0 + e_at[k - j];
                triples.push(BellTriple {
                    a: angle_at(i),
                    b: angle_at(j),
                    c: angle_at(k),
                    lhs,
                    rhs,
                    violated: lhs > rhs + BELL_TIE_EPS,
                });
            }
        }
    }
    triples.sort_by(|x, y| {
        y.margin()
            .partial_cmp(&x.margin())
            .unwrap()
            .then(x.a.partial_cmp(&y.a).unwrap())
            .then(x.b.partial_cmp(&y.b).unwrap())
            .then(x.c.partial_cmp(&y.c).unwrap())
    });
    Ok(triples)
}

/// One row of the exponent tradeoff: how far the cos^p family strays from
/// the cosine law (expectation channel) versus how much its pair rate
/// varies (rate channel).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub exponent: f64,
    pub max_abs_dev_e: f64,
    pub max_rel_dev_t: f64,
}

/// Sweep the cos^p family over the given exponents with the config's grid,
/// reporting both error channels per exponent. p = 1 lands on the
/// projection-density statistics, p = 1/e on the flattened density's.
pub fn tradeoff_scan(exponents: &[f64], cfg: &TheoryConfig) -> Result<Vec<TradeoffPoint>> {
    if exponents.is_empty() {
        return Err(Error::InvalidConfig(
            "tradeoff scan needs at least one exponent".to_string(),
        ));
    }
    exponents
        .iter()
        .map(|&p| {
            let mut run = *cfg;
            run.density = DetectionDensity::custom(p)?;
            let report = deviation_report(&sweep_curve(&run)?)?;
            Ok(TradeoffPoint {
                exponent: p,
                max_abs_dev_e: report.max_abs_dev_e,
                max_rel_dev_t: report.max_rel_dev_t,
            })
        })
        .collect()
}
