use serde::{Deserialize, Serialize};

use crate::angle::Angle;

/// One sampled point of a correlation sweep.
///
/// `c` is the raw correlation integral of f(theta)f(theta - phi) over the
/// hidden variable (no source-sign applied), `t >= 0` the pair-rate
/// integral of |f(theta)f(theta - phi)|, and `e_hv = sigma * c / t` the
/// normalized expectation with the correlation-mode sign sigma applied.
/// `e_ref` is the quantum-mechanical reference at the same phi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub phi: Angle,
    pub c: f64,
    pub t: f64,
    pub e_hv: f64,
    pub e_ref: f64,
}

impl CurvePoint {
    pub fn e_diff(&self) -> f64 {
        self.e_hv - self.e_ref
    }
}

/// A correlation sweep over a phi grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<CurvePoint>,
}

impl Curve {
    pub fn new(points: Vec<CurvePoint>) -> Self {
        Curve { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CurvePoint> {
        self.points.iter()
    }

    /// Center of the t-oscillation band, (max + min) / 2. This is the
    /// reference the reported deviation percentages are measured against;
    /// 0 for an empty curve.
    pub fn t_center(&self) -> f64 {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for p in &self.points {
            min = min.min(p.t);
            max = max.max(p.t);
        }
        if self.points.is_empty() {
            0.0
        } else {
            0.5 * (min + max)
        }
    }
}

impl<'a> IntoIterator for &'a Curve {
    type Item = &'a CurvePoint;
    type IntoIter = std::slice::Iter<'a, CurvePoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}
