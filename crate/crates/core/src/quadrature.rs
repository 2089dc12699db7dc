//! Rectangular quadrature of the correlation and pair-rate integrals
//!
//!   c(phi) = integral of f(theta) f(theta - phi) dtheta over one period,
//!   t(phi) = integral of |f(theta) f(theta - phi)| dtheta,
//!
//! for any detection density. The left-endpoint rectangle rule on a uniform
//! grid over a full period is the trapezoid rule for periodic integrands and
//! converges spectrally on the smooth part of the integrand; the |.| kinks
//! in t limit it to O(h^2) there.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::config::{phi_grid_half_open, phi_grid_inclusive, GridMode, TheoryConfig};
use crate::curve::{Curve, CurvePoint};
use crate::density::{qm_expectation, CorrelationMode, DetectionDensity};
use crate::error::{Error, Result};

/// A pair rate below this is treated as degenerate: the expectation c/t
/// cannot be normalized. Rates of interest are O(1).
pub const DEGENERATE_RATE_EPS: f64 = 1e-12;

/// Uniform rectangular rule over the hidden variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub mode: GridMode,
    pub theta_points: usize,
    /// Left-endpoint nodes: {k pi/n} on [0, pi) for the half-interval mode,
    /// {k 2pi/n} on [0, 2pi) for the full-period mode.
    pub nodes: Vec<Angle>,
    /// Rectangle width: pi/n or 2pi/n respectively.
    pub weight: f64,
}

impl QuadratureGrid {
    pub fn new(mode: GridMode, theta_points: usize) -> Result<Self> {
        if theta_points < 2 {
            return Err(Error::InvalidConfig(format!(
                "theta_points must be >= 2, got {theta_points}"
            )));
        }
        let period = match mode {
            GridMode::PaperHalfInterval => PI,
            GridMode::FullPeriod => TAU,
        };
        let weight = period / theta_points as f64;
        let nodes = (0..theta_points)
            .map(|k| Angle::from_radians(k as f64 * weight))
            .collect();
        Ok(QuadratureGrid {
            mode,
            theta_points,
            nodes,
            weight,
        })
    }

    /// Half-interval grid [0, pi), doubled by the period-pi symmetry of the
    /// integrand (the reference scheme).
    pub fn paper(theta_points: usize) -> Result<Self> {
        Self::new(GridMode::PaperHalfInterval, theta_points)
    }

    /// Full-period grid [0, 2pi); makes no symmetry assumption.
    pub fn full(theta_points: usize) -> Result<Self> {
        Self::new(GridMode::FullPeriod, theta_points)
    }

    fn fold_factor(&self) -> f64 {
        match self.mode {
            GridMode::PaperHalfInterval => 2.0,
            GridMode::FullPeriod => 1.0,
        }
    }

    /// Both integrals in one pass over the nodes.
    fn integrate_pair(&self, density: &DetectionDensity, phi: f64) -> (f64, f64) {
        let mut c = 0.0;
        let mut t = 0.0;
        for node in &self.nodes {
            let th = node.radians();
            let prod = density.eval_raw(th) * density.eval_raw(th - phi);
            c += prod;
            t += prod.abs();
        }
        let scale = self.fold_factor() * self.weight;
        (scale * c, scale * t)
    }
}

/// Correlation integral c(phi), signed product of the two detections.
pub fn quad_c(density: &DetectionDensity, phi: Angle, grid: &QuadratureGrid) -> f64 {
    grid.integrate_pair(density, phi.radians()).0
}

/// Pair-rate integral t(phi) >= 0, joint detection probability mass.
pub fn quad_t(density: &DetectionDensity, phi: Angle, grid: &QuadratureGrid) -> f64 {
    grid.integrate_pair(density, phi.radians()).1
}

/// Normalized expectation at one phi: e_hv = sigma * c / t, with the
/// quantum reference attached. Errors if the rate is too small to divide.
pub fn quad_expectation(
    density: &DetectionDensity,
    phi: Angle,
    mode: CorrelationMode,
    grid: &QuadratureGrid,
) -> Result<CurvePoint> {
    let (c, t) = grid.integrate_pair(density, phi.radians());
    if t <= DEGENERATE_RATE_EPS {
        return Err(Error::DegenerateRate {
            phi: phi.radians(),
            t,
        });
    }
    Ok(CurvePoint {
        phi,
        c,
        t,
        e_hv: mode.sign() * c / t,
        e_ref: qm_expectation(phi, mode),
    })
}

/// Sweep the expectation over the phi grid selected by the config's grid
/// mode: the half-open reference grid {k pi/n} for PaperHalfInterval, the
/// inclusive grid [0, pi] for FullPeriod.
pub fn sweep_curve(cfg: &TheoryConfig) -> Result<Curve> {
    cfg.validate()?;
    let grid = QuadratureGrid::new(cfg.grid_mode, cfg.theta_points)?;
    let phis = match cfg.grid_mode {
        GridMode::PaperHalfInterval => phi_grid_half_open(cfg.phi_points),
        GridMode::FullPeriod => phi_grid_inclusive(cfg.phi_points),
    };
    let points = phis
        .into_iter()
        .map(|phi| quad_expectation(&cfg.density, phi, cfg.mode, &grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve::new(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::projection_curves;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn projection_correlation_matches_symbolic() {
        // c(0) for cos is pi, c(pi/2) is 0 (orthogonal cosines)
        let grid = QuadratureGrid::full(1000).unwrap();
        let d = DetectionDensity::projection();
        assert_abs_diff_eq!(quad_c(&d, Angle::ZERO, &grid), PI, epsilon = 1e-10);
        assert_abs_diff_eq!(
            quad_c(&d, Angle::from_radians(FRAC_PI_2), &grid),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn aligned_rate_equals_correlation() {
        // at phi = 0 the product is a square, so c = t exactly node by node
        let grid = QuadratureGrid::paper(50).unwrap();
        for d in [
            DetectionDensity::naive(),
            DetectionDensity::projection(),
            DetectionDensity::signed_power(),
        ] {
            let (c, t) = grid.integrate_pair(&d, 0.0);
            assert_eq!(c, t);
        }
    }

    #[test]
    fn projection_rate_anchors() {
        let grid = QuadratureGrid::paper(10_000).unwrap();
        let d = DetectionDensity::projection();
        assert_abs_diff_eq!(quad_t(&d, Angle::ZERO, &grid), PI, epsilon = 1e-3);
        // symbolic integral of |cos(theta) sin(theta)| over one period is 2
        assert_abs_diff_eq!(
            quad_t(&d, Angle::from_radians(FRAC_PI_2), &grid),
            2.0,
            epsilon = 1e-3
        );
    }

    #[test]
    fn quad_expectation_matches_closed_form() {
        let grid = QuadratureGrid::paper(50).unwrap();
        let d = DetectionDensity::projection();
        let p = quad_expectation(
            &d,
            Angle::from_radians(PI / 3.0),
            CorrelationMode::Anticorrelated,
            &grid,
        )
        .unwrap();
        assert_abs_diff_eq!(p.e_hv, -0.696383134383, epsilon = 1e-3);
        assert_abs_diff_eq!(p.e_ref, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn aligned_signed_power_is_fully_correlated() {
        let grid = QuadratureGrid::paper(50).unwrap();
        let p = quad_expectation(
            &DetectionDensity::signed_power(),
            Angle::ZERO,
            CorrelationMode::Correlated,
            &grid,
        )
        .unwrap();
        assert_abs_diff_eq!(p.e_hv, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn signed_power_orthogonal_expectation_is_small() {
        // the flattened density stays within 1.2% of the cosine law
        let grid = QuadratureGrid::paper(50).unwrap();
        let p = quad_expectation(
            &DetectionDensity::signed_power(),
            Angle::from_radians(FRAC_PI_2),
            CorrelationMode::Correlated,
            &grid,
        )
        .unwrap();
        assert!(p.e_hv.abs() <= 0.012, "E(pi/2) = {}", p.e_hv);
    }

    #[test]
    fn paper_grid_replicates_closed_form_within_a_percent() {
        let grid = QuadratureGrid::paper(50).unwrap();
        let d = DetectionDensity::projection();
        for k in 0..50 {
            let phi = Angle::from_radians(PI * k as f64 / 50.0);
            let q = quad_expectation(&d, phi, CorrelationMode::Anticorrelated, &grid).unwrap();
            let pc = projection_curves(phi).unwrap();
            assert!(
                (q.t - pc.t).abs() / pc.t <= 0.01,
                "t mismatch at {phi:?}: {} vs {}",
                q.t,
                pc.t
            );
            let rel_e = (q.e_hv - pc.expectation).abs() / pc.expectation.abs().max(1e-3);
            assert!(rel_e <= 0.01, "E mismatch at {phi:?}: rel {rel_e}");
        }
    }

    #[test]
    fn refinement_converges_on_the_closed_form() {
        // error against the exact rate/expectation decreases with n and is
        // below 1e-3 at n = 1e4 on a 50-point phi grid
        let d = DetectionDensity::projection();
        let mut last_err = f64::INFINITY;
        for n in [50usize, 100, 256, 1024, 10_000] {
            let grid = QuadratureGrid::paper(n).unwrap();
            let mut err: f64 = 0.0;
            for k in 0..=50 {
                let phi = Angle::from_radians(PI * k as f64 / 50.0);
                let c = quad_c(&d, phi, &grid);
                err = err.max((c - PI * phi.radians().cos()).abs());
                let pc = projection_curves(phi).unwrap();
                err = err.max((quad_t(&d, phi, &grid) - pc.t).abs());
            }
            assert!(err < last_err, "error did not shrink at n = {n}: {err}");
            last_err = err;
        }
        assert!(last_err <= 1e-3, "n = 1e4 error {last_err}");
    }

    #[test]
    fn degenerate_rate_is_an_error() {
        // a 4-node full grid puts every product at a cosine zero for
        // phi = pi/2, so t vanishes identically at the discrete level
        let grid = QuadratureGrid::full(4).unwrap();
        let err = quad_expectation(
            &DetectionDensity::projection(),
            Angle::from_radians(FRAC_PI_2),
            CorrelationMode::Anticorrelated,
            &grid,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateRate { .. }));
    }

    #[test]
    fn sweep_uses_the_grid_convention() {
        let cfg = TheoryConfig::new(
            DetectionDensity::projection(),
            CorrelationMode::Anticorrelated,
        );
        let paper = sweep_curve(&cfg).unwrap();
        assert_eq!(paper.len(), 50);
        assert!(paper.points[49].phi.radians() < PI);

        let full = sweep_curve(&cfg.with_grid(GridMode::FullPeriod)).unwrap();
        assert_eq!(full.points[49].phi.radians(), PI);
    }

    #[test]
    fn signed_power_rate_is_a_shallow_valley() {
        // the flattened density's rate dips at the quarter period and peaks
        // at the aligned ends (grid-level wiggle stays within truncation)
        let cfg = TheoryConfig::new(
            DetectionDensity::signed_power(),
            CorrelationMode::Correlated,
        );
        let curve = sweep_curve(&cfg).unwrap();
        let t: Vec<f64> = curve.iter().map(|p| p.t).collect();
        let (argmin, &min) = t
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        assert!((20..=30).contains(&argmin), "valley at node {argmin}");
        assert!(t[0] > 1.05 * min && t[49] > 1.05 * min);
    }

    #[test]
    fn naive_sweep_is_a_straight_line() {
        let cfg = TheoryConfig::new(DetectionDensity::naive(), CorrelationMode::Anticorrelated)
            .with_grid(GridMode::FullPeriod)
            .with_points(10_000, 50);
        let curve = sweep_curve(&cfg).unwrap();
        for p in &curve {
            let affine = 2.0 / PI * p.phi.radians() - 1.0;
            assert_abs_diff_eq!(p.e_hv, affine, epsilon = 1e-3);
        }
    }

    proptest! {
        #[test]
        fn rate_dominates_correlation(
            phi in 0.0..TAU,
            which in 0usize..4,
            n in 2usize..200,
        ) {
            let d = match which {
                0 => DetectionDensity::naive(),
                1 => DetectionDensity::projection(),
                2 => DetectionDensity::signed_power(),
                _ => DetectionDensity::custom(1.7).unwrap(),
            };
            let grid = QuadratureGrid::full(n).unwrap();
            let (c, t) = grid.integrate_pair(&d, phi);
            // triangle inequality holds exactly at the discrete level
            prop_assert!(t >= c.abs());
        }

        #[test]
        fn correlation_is_symmetric_about_pi(
            phi in 0.01..PI - 0.01,
            which in 0usize..3,
        ) {
            let d = match which {
                0 => DetectionDensity::projection(),
                1 => DetectionDensity::signed_power(),
                _ => DetectionDensity::custom(0.6).unwrap(),
            };
            // 255 nodes: N divisible by 4 would put nodes exactly on the
            // cosine zeros, where fractional powers amplify fp residues of
            // opposite parity (~1e-6) and break the pairing
            let grid = QuadratureGrid::full(255).unwrap();
            let a = quad_c(&d, Angle::from_radians(phi), &grid);
            let b = quad_c(&d, Angle::from_radians(TAU - phi), &grid);
            prop_assert!((a - b).abs() <= 1e-10, "c({phi}) = {a} vs c(2pi-phi) = {b}");
        }
    }
}
