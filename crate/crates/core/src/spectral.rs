//! The autoconvolution route to c(phi) and t(phi).
//!
//! Both integrals are autoconvolutions of f (resp. |f|) because the density
//! is even and periodic: sample one period, take the discrete transform,
//! square it, transform back, and scale by 2pi/N. The whole point of the
//! module is the cross-path theorem checked in the tests: on the identical
//! node set this route and rectangular quadrature agree to rounding.
//!
//! The direct O(N^2) transform is deliberate; desk-scale signals stay at
//! N <= 1024 and a bit-compatible fast transform could be dropped in later.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::curve::{Curve, CurvePoint};
use crate::density::{qm_expectation, CorrelationMode, DetectionDensity};
use crate::error::{Error, Result};
use crate::quadrature::DEGENERATE_RATE_EPS;

/// Samples must mirror (s[k] = s[N-k]) to at least this tolerance before
/// the autoconvolution is trusted to equal the correlation integral.
pub const EVENNESS_TOL: f64 = 1e-9;

/// One period of a real signal sampled at N uniform nodes {2pi k / N}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    samples: Vec<f64>,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::SignalTooShort { n: samples.len() });
        }
        Ok(SampledSignal { samples })
    }

    /// Sample a detection density at the N nodes. Node k > N/2 copies the
    /// value evaluated at the mirror node N - k, so an even density yields
    /// bit-exact symmetric samples; evaluating both sides independently
    /// leaves rounding residues at the cosine zeros that fractional powers
    /// amplify to ~1e-6.
    pub fn from_density(density: &DetectionDensity, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::SignalTooShort { n });
        }
        let samples = (0..n)
            .map(|k| {
                let j = k.min(n - k);
                density.eval(Angle::from_radians(TAU * j as f64 / n as f64))
            })
            .collect();
        Ok(SampledSignal { samples })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::SignalTooShort { n });
        }
        let samples = (0..n).map(|k| f(TAU * k as f64 / n as f64)).collect();
        Ok(SampledSignal { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Node angles {2pi k / N}.
    pub fn nodes(&self) -> Vec<Angle> {
        let n = self.samples.len();
        (0..n)
            .map(|k| Angle::from_radians(TAU * k as f64 / n as f64))
            .collect()
    }

    pub fn abs(&self) -> SampledSignal {
        SampledSignal {
            samples: self.samples.iter().map(|s| s.abs()).collect(),
        }
    }

    /// Largest |s[k] - s[N-k]|; zero for an exactly even signal.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.samples.len();
        (1..n)
            .map(|k| (self.samples[k] - self.samples[n - k]).abs())
            .fold(0.0, f64::max)
    }
}

fn twiddles(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, -TAU * j as f64 / n as f64))
        .collect()
}

/// Forward transform X[m] = sum_k s[k] exp(-2pi i m k / N), direct O(N^2).
pub fn dft(signal: &SampledSignal) -> Vec<Complex64> {
    let n = signal.samples.len();
    let tw = twiddles(n);
    (0..n)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &s) in signal.samples.iter().enumerate() {
                acc += s * tw[m * k % n];
            }
            acc
        })
        .collect()
}

/// Inverse transform with the 1/N normalization; `idft(dft(s)) == s`.
pub fn idft(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    let tw = twiddles(n);
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &x) in spectrum.iter().enumerate() {
                acc += x * tw[m * k % n].conj();
            }
            acc / n as f64
        })
        .collect()
}

/// Autoconvolution including the rounding-level imaginary residue, scaled by
/// 2pi/N so samples approximate the periodic convolution integral.
pub fn autoconvolve_complex(signal: &SampledSignal) -> Vec<Complex64> {
    let spectrum = dft(signal);
    let squared: Vec<Complex64> = spectrum.iter().map(|x| x * x).collect();
    let scale = TAU / signal.samples.len() as f64;
    idft(&squared).into_iter().map(|z| z * scale).collect()
}

/// Autoconvolution of a real signal: inverse transform of the squared
/// spectrum, scaled so sample k approximates
/// integral f(theta) f(2pi k/N - theta) dtheta. For an even periodic signal
/// this equals the correlation integral c at the node.
pub fn autoconvolve(signal: &SampledSignal) -> SampledSignal {
    SampledSignal {
        samples: autoconvolve_complex(signal)
            .into_iter()
            .map(|z| z.re)
            .collect(),
    }
}

/// Expectation curve at the N signal nodes via the transform route.
///
/// Refuses signals that are not even on the grid: for those the
/// autoconvolution is not the correlation integral and would silently
/// disagree with quadrature.
pub fn curve_from_signal(signal: &SampledSignal, mode: CorrelationMode) -> Result<Curve> {
    let asymmetry = signal.max_asymmetry();
    if asymmetry > EVENNESS_TOL {
        return Err(Error::NotEven { asymmetry });
    }
    let c = autoconvolve(signal);
    let t = autoconvolve(&signal.abs());
    let sigma = mode.sign();
    let points = signal
        .nodes()
        .into_iter()
        .zip(c.samples.iter().zip(t.samples.iter()))
        .map(|(phi, (&c, &t))| {
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
                e_hv: sigma * c / t,
                e_ref: qm_expectation(phi, mode),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve::new(points))
}

/// Sample a density at N nodes and run the transform route.
pub fn spectral_curve(
    density: &DetectionDensity,
    n: usize,
    mode: CorrelationMode,
) -> Result<Curve> {
    density.validate()?;
    curve_from_signal(&SampledSignal::from_density(density, n)?, mode)
}
