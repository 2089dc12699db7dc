use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signed power domain: need |base| <= 1 and exponent > 0, got base {base}, exponent {exponent}")]
    SignedPowDomain { base: f64, exponent: f64 },

    #[error("angle {phi} rad is outside the closed-form domain [0, pi]")]
    PhiOutOfRange { phi: f64 },

    #[error("angle {theta} rad is outside [-pi/2, 3pi/2)")]
    ThetaOutOfRange { theta: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("pair rate t({phi}) = {t} is too small to normalize the correlation")]
    DegenerateRate { phi: f64, t: f64 },

    #[error("no coincidences recorded at phi = {phi} rad; increase pairs per angle")]
    ZeroCoincidence { phi: f64 },

    #[error("detection density is not even on the sample grid (max |f(x) - f(-x)| = {asymmetry}); the spectral route requires an even density")]
    NotEven { asymmetry: f64 },

    #[error("sampled signal has {n} samples; the spectral route needs at least 4")]
    SignalTooShort { n: usize },

    #[error("curve is empty")]
    EmptyCurve,

    #[error("bell scan step {step} rad does not divide pi")]
    BadScanStep { step: f64 },
}
