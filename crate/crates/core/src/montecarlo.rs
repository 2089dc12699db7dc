//! Event-level simulation of pair emission and probabilistic detection.
//!
//! Per pair: one hidden angle theta uniform on [0, 2pi), then each side
//! draws its own uniform and detects with probability |f| at its local
//! angle: side A at theta, side B at theta - phi. Spins are the signs of
//! f, with the source's correlation sign applied to side B. Coincidences
//! and spin products are tallied per batch.
//!
//! Everything is deterministic given the seed: per-point substreams are
//! derived by mixing (seed, point index), so sweeps can be evaluated in any
//! order or in parallel and produce identical tallies.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::config::{phi_grid_inclusive, TheoryConfig};
use crate::curve::{Curve, CurvePoint};
use crate::density::{qm_expectation, CorrelationMode, DetectionDensity};
use crate::error::{Error, Result};

/// splitmix64-style mix of (seed, index) into an independent substream seed.
pub fn substream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tallies from one simulated batch at a fixed analyzer separation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventBatch {
    pub phi: Angle,
    pub pairs_emitted: u64,
    pub coincidences: u64,
    /// Sum of A*B spin products (+-1 each) over coincidences, with the
    /// source correlation sign already applied to side B.
    pub spin_product_sum: i64,
    pub singles_a: u64,
    pub singles_b: u64,
}

impl EventBatch {
    /// Mean spin product over coincidences.
    pub fn expectation(&self) -> Result<f64> {
        if self.coincidences == 0 {
            return Err(Error::ZeroCoincidence {
                phi: self.phi.radians(),
            });
        }
        Ok(self.spin_product_sum as f64 / self.coincidences as f64)
    }

    /// Pair rate on the integral scale of t(phi): 2pi * coincidence
    /// fraction, directly comparable to the quadrature rate.
    pub fn pair_rate(&self) -> f64 {
        TAU * self.coincidences as f64 / self.pairs_emitted as f64
    }

    /// Standard error of the expectation estimate. Products are +-1, so
    /// the per-sample variance is 1 - E^2.
    pub fn expectation_standard_error(&self) -> Result<f64> {
        let e = self.expectation()?;
        Ok(((1.0 - e * e).max(0.0) / self.coincidences as f64).sqrt())
    }

    /// Standard error of the pair-rate estimate (binomial).
    pub fn pair_rate_standard_error(&self) -> f64 {
        let p = self.coincidences as f64 / self.pairs_emitted as f64;
        TAU * (p * (1.0 - p) / self.pairs_emitted as f64).sqrt()
    }
}

/// Simulate a batch with an arbitrary density evaluator. The evaluator must
/// return values in [-1, 1]; magnitude is the detection probability, sign
/// the spin.
pub fn simulate_batch_with(
    eval: impl Fn(f64) -> f64,
    phi: Angle,
    n_pairs: u64,
    mode: CorrelationMode,
    seed: u64,
) -> EventBatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi_rad = phi.radians();
    let sigma: i64 = if mode.sign() >= 0.0 { 1 } else { -1 };
    let mut coincidences = 0u64;
    let mut spin_product_sum = 0i64;
    let mut singles_a = 0u64;
    let mut singles_b = 0u64;
    for _ in 0..n_pairs {
        // fixed draw order (theta, u_a, u_b) keeps the stream layout
        // independent of detection outcomes
        let theta = rng.random::<f64>() * TAU;
        let u_a = rng.random::<f64>();
        let u_b = rng.random::<f64>();
        let f_a = eval(theta);
        let f_b = eval(theta - phi_rad);
        let detected_a = u_a < f_a.abs();
        let detected_b = u_b < f_b.abs();
        if detected_a {
            singles_a += 1;
        }
        if detected_b {
            singles_b += 1;
        }
        if detected_a && detected_b {
            coincidences += 1;
            let spin_a: i64 = if f_a >= 0.0 { 1 } else { -1 };
            let spin_b: i64 = sigma * if f_b >= 0.0 { 1 } else { -1 };
            spin_product_sum += spin_a * spin_b;
        }
    }
    EventBatch {
        phi,
        pairs_emitted: n_pairs,
        coincidences,
        spin_product_sum,
        singles_a,
        singles_b,
    }
}

/// Simulate one batch for a built-in detection density.
pub fn simulate_batch(
    density: &DetectionDensity,
    phi: Angle,
    n_pairs: u64,
    mode: CorrelationMode,
    seed: u64,
) -> EventBatch {
    simulate_batch_with(|x| density.eval_raw(x), phi, n_pairs, mode, seed)
}

/// A curve point with its Monte Carlo uncertainties and raw tallies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McPoint {
    pub point: CurvePoint,
    pub se_e: f64,
    pub se_t: f64,
    pub batch: EventBatch,
}

/// Monte Carlo sweep: curve plus standard errors per point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McCurve {
    pub points: Vec<McPoint>,
}

impl McCurve {
    pub fn curve(&self) -> Curve {
        Curve::new(self.points.iter().map(|p| p.point).collect())
    }
}

/// Sweep the inclusive phi grid [0, pi], one independent batch per point.
/// Point k uses the substream seed mixed from (cfg.seed, k).
pub fn estimate_curve(cfg: &TheoryConfig) -> Result<McCurve> {
    cfg.validate()?;
    let sigma = cfg.mode.sign();
    let points = phi_grid_inclusive(cfg.phi_points)
        .into_iter()
        .enumerate()
        .map(|(k, phi)| {
            let batch = simulate_batch(
                &cfg.density,
                phi,
                cfg.pairs_per_angle,
                cfg.mode,
                substream_seed(cfg.seed, k as u64),
            );
            let e_hv = batch.expectation()?;
            let t = batch.pair_rate();
            // spin_product_sum already carries sigma; undo it for the raw
            // correlation column so all methods share the c convention
            let c = sigma * TAU * batch.spin_product_sum as f64 / batch.pairs_emitted as f64;
            Ok(McPoint {
                point: CurvePoint {
                    phi,
                    c,
                    t,
                    e_hv,
                    e_ref: qm_expectation(phi, cfg.mode),
                },
                se_e: batch.expectation_standard_error()?,
                se_t: batch.pair_rate_standard_error(),
                batch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(McCurve { points })
}

/// Estimated sides of the three-angle inequality
/// |E(a,b) - E(a,c)| <= 1 + E(b,c) from three independent runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellTrialEstimate {
    pub lhs: f64,
    pub rhs: f64,
    pub se_lhs: f64,
    pub se_rhs: f64,
    pub violated: bool,
}

/// Simulate the three pair settings. E(x, y) depends only on the folded
/// separation y - x; each setting gets its own substream of `seed`.
pub fn bell_trial(
    density: &DetectionDensity,
    a: Angle,
    b: Angle,
    c: Angle,
    n_pairs: u64,
    mode: CorrelationMode,
    seed: u64,
) -> Result<BellTrialEstimate> {
    let seps = [a.separation(b), a.separation(c), b.separation(c)];
    if seps[0].radians() == 0.0 || seps[1].radians() == 0.0 || seps[2].radians() == 0.0 {
        return Err(Error::InvalidConfig(
            "bell trial needs three distinct analyzer angles".to_string(),
        ));
    }
    let mut estimates = [(0.0, 0.0); 3];
    for (i, sep) in seps.iter().enumerate() {
        let batch = simulate_batch(density, *sep, n_pairs, mode, substream_seed(seed, i as u64));
        estimates[i] = (batch.expectation()?, batch.expectation_standard_error()?);
    }
    let (e_ab, se_ab) = estimates[0];
    let (e_ac, se_ac) = estimates[1];
    let (e_bc, se_bc) = estimates[2];
    let lhs = (e_ab - e_ac).abs();
    let rhs = 1.0 + e_bc;
    Ok(BellTrialEstimate {
        lhs,
        rhs,
        se_lhs: (se_ab * se_ab + se_ac * se_ac).sqrt(),
        se_rhs: se_bc,
        violated: lhs > rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn certain_detection_tallies_everything() {
        // |f| = 1 everywhere, correlated source: every pair coincides and
        // every product is +1
        let batch = simulate_batch_with(
            |_| 1.0,
            Angle::from_radians(1.234),
            10_000,
            CorrelationMode::Correlated,
            7,
        );
        assert_eq!(batch.coincidences, 10_000);
        assert_eq!(batch.spin_product_sum, 10_000);
        assert_eq!(batch.singles_a, 10_000);
        assert_eq!(batch.singles_b, 10_000);
        assert_abs_diff_eq!(batch.pair_rate(), TAU);
    }

    #[test]
    fn aligned_projection_is_perfectly_anticorrelated() {
        let batch = simulate_batch(
            &DetectionDensity::projection(),
            Angle::ZERO,
            100_000,
            CorrelationMode::Anticorrelated,
            42,
        );
        // every coincidence has product -1 exactly
        assert_eq!(batch.spin_product_sum, -(batch.coincidences as i64));
        assert_abs_diff_eq!(batch.expectation().unwrap(), -1.0);
    }

    #[test]
    fn projection_expectation_near_closed_form() {
        let batch = simulate_batch(
            &DetectionDensity::projection(),
            Angle::from_radians(FRAC_PI_3),
            1_000_000,
            CorrelationMode::Anticorrelated,
            42,
        );
        let e = batch.expectation().unwrap();
        let se = batch.expectation_standard_error().unwrap();
        assert!(
            (e - (-0.696383134383)).abs() <= 4.0 * se,
            "E = {e}, SE = {se}"
        );
    }

    #[test]
    fn batches_are_deterministic() {
        let run = || {
            simulate_batch(
                &DetectionDensity::signed_power(),
                Angle::from_radians(0.8),
                50_000,
                CorrelationMode::Correlated,
                123,
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn batch_invariants_hold() {
        for seed in 0..5 {
            let batch = simulate_batch(
                &DetectionDensity::signed_power(),
                Angle::from_radians(2.1),
                20_000,
                CorrelationMode::Correlated,
                seed,
            );
            assert!(batch.coincidences <= batch.singles_a.min(batch.singles_b));
            assert!(batch.singles_a.max(batch.singles_b) <= batch.pairs_emitted);
            assert!(batch.spin_product_sum.unsigned_abs() <= batch.coincidences);
        }
    }

    #[test]
    fn singles_rates_match_the_marginal_integral() {
        // singles_a / pairs converges to (1/2pi) * integral of |f|,
        // independent of phi: 2/pi for the projection, 0.809801 for the
        // signed power (high-resolution quadrature values)
        for (d, marginal) in [
            (DetectionDensity::projection(), 2.0 / PI),
            (DetectionDensity::signed_power(), 0.809801427),
        ] {
            for phi in [0.4, 1.9] {
                let batch = simulate_batch(
                    &d,
                    Angle::from_radians(phi),
                    500_000,
                    CorrelationMode::Correlated,
                    99,
                );
                let rate_a = batch.singles_a as f64 / batch.pairs_emitted as f64;
                let se = (marginal * (1.0 - marginal) / batch.pairs_emitted as f64).sqrt();
                assert!(
                    (rate_a - marginal).abs() <= 3.0 * se,
                    "{d:?} at phi = {phi}: {rate_a} vs {marginal}"
                );
            }
        }
    }

    #[test]
    fn naive_density_reproduces_the_affine_law() {
        for phi in [0.5, 1.2, 2.4] {
            let batch = simulate_batch(
                &DetectionDensity::naive(),
                Angle::from_radians(phi),
                200_000,
                CorrelationMode::Anticorrelated,
                17,
            );
            let e = batch.expectation().unwrap();
            let se = batch.expectation_standard_error().unwrap();
            let affine = 2.0 / PI * phi - 1.0;
            assert!((e - affine).abs() <= 4.0 * se, "phi = {phi}: {e} vs {affine}");
        }
    }

    #[test]
    fn sweep_is_order_independent_and_seeded() {
        let cfg = TheoryConfig::new(
            DetectionDensity::projection(),
            CorrelationMode::Anticorrelated,
        )
        .with_points(50, 9)
        .with_pairs(20_000)
        .with_seed(5);
        let sweep = estimate_curve(&cfg).unwrap();
        assert_eq!(sweep.points.len(), 9);
        // each point reproduces independently from its substream
        for (k, p) in sweep.points.iter().enumerate() {
            let again = simulate_batch(
                &cfg.density,
                p.point.phi,
                cfg.pairs_per_angle,
                cfg.mode,
                substream_seed(cfg.seed, k as u64),
            );
            assert_eq!(again, p.batch);
        }
        // e_hv = sigma * c / t holds for the filled curve points
        for p in &sweep.points {
            if p.point.t > 0.0 {
                assert_abs_diff_eq!(
                    p.point.e_hv,
                    cfg.mode.sign() * p.point.c / p.point.t,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn projection_rate_variation_matches_the_closed_band() {
        // the projection rate curve swings about 22% around its band center
        let cfg = TheoryConfig::new(
            DetectionDensity::projection(),
            CorrelationMode::Anticorrelated,
        )
        .with_pairs(100_000)
        .with_seed(31);
        let mc = estimate_curve(&cfg).unwrap();
        let report = crate::analysis::deviation_report(&mc.curve()).unwrap();
        assert_abs_diff_eq!(report.max_rel_dev_t, 0.222, epsilon = 0.02);
        assert_abs_diff_eq!(report.mean_t / 2.0, 1.2854, epsilon = 0.02);
    }

    #[test]
    fn zero_coincidences_is_an_error() {
        // a steep custom density detects almost nothing; a single pair at
        // a quarter period cannot coincide
        let cfg = TheoryConfig::new(
            DetectionDensity::custom(60.0).unwrap(),
            CorrelationMode::Correlated,
        )
        .with_points(50, 5)
        .with_pairs(1)
        .with_seed(0);
        let err = estimate_curve(&cfg).unwrap_err();
        assert!(matches!(err, Error::ZeroCoincidence { .. }));
    }

    #[test]
    fn bell_trial_reproduces_the_closed_form_violation() {
        let est = bell_trial(
            &DetectionDensity::projection(),
            Angle::ZERO,
            Angle::from_radians(FRAC_PI_3),
            Angle::from_radians(2.0 * FRAC_PI_3),
            1_000_000,
            CorrelationMode::Anticorrelated,
            42,
        )
        .unwrap();
        assert!(
            (est.lhs - 1.392766268765).abs() <= 4.0 * est.se_lhs,
            "lhs = {} +- {}",
            est.lhs,
            est.se_lhs
        );
        assert!(
            (est.rhs - 0.303616865617).abs() <= 4.0 * est.se_rhs,
            "rhs = {} +- {}",
            est.rhs,
            est.se_rhs
        );
        assert!(est.violated);
    }

    #[test]
    fn bell_trial_on_the_naive_toy_sits_at_the_bound() {
        // the toy saturates the inequality (lhs = rhs analytically), so the
        // estimate straddles zero within sampling error
        let est = bell_trial(
            &DetectionDensity::naive(),
            Angle::ZERO,
            Angle::from_radians(FRAC_PI_3),
            Angle::from_radians(2.0 * FRAC_PI_3),
            400_000,
            CorrelationMode::Anticorrelated,
            11,
        )
        .unwrap();
        let se = (est.se_lhs * est.se_lhs + est.se_rhs * est.se_rhs).sqrt();
        assert!(
            (est.lhs - est.rhs).abs() <= 4.0 * se,
            "lhs - rhs = {} vs se {}",
            est.lhs - est.rhs,
            se
        );
    }

    #[test]
    fn bell_trial_signed_power_tracks_the_cosine_law() {
        let est = bell_trial(
            &DetectionDensity::signed_power(),
            Angle::ZERO,
            Angle::from_radians(FRAC_PI_3),
            Angle::from_radians(2.0 * FRAC_PI_3),
            1_000_000,
            CorrelationMode::Correlated,
            3,
        )
        .unwrap();
        // quantum reference: |cos(pi/3) - cos(2pi/3)| = 1, 1 + cos(pi/3) = 1.5;
        // the density deviates from the cosine by up to ~2%
        assert_abs_diff_eq!(est.lhs, 1.0, epsilon = 0.05);
        assert_abs_diff_eq!(est.rhs, 1.5, epsilon = 0.05);
    }

    #[test]
    fn bell_trial_rejects_duplicate_angles() {
        let err = bell_trial(
            &DetectionDensity::projection(),
            Angle::ZERO,
            Angle::ZERO,
            Angle::from_radians(1.0),
            100,
            CorrelationMode::Anticorrelated,
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn substreams_differ() {
        assert_ne!(substream_seed(42, 0), substream_seed(42, 1));
        assert_ne!(substream_seed(42, 0), substream_seed(43, 0));
    }

    #[test]
    fn mc_quarter_period_expectation_is_small() {
        let batch = simulate_batch(
            &DetectionDensity::projection(),
            Angle::from_radians(FRAC_PI_2),
            500_000,
            CorrelationMode::Anticorrelated,
            9,
        );
        let e = batch.expectation().unwrap();
        let se = batch.expectation_standard_error().unwrap();
        assert!(e.abs() <= 4.0 * se, "E(pi/2) = {e} +- {se}");
    }
}
