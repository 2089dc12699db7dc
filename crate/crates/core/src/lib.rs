//! Numerical laboratory for probabilistic-detection local hidden variable
//! models of the EPRB correlated-pair experiment.
//!
//! A detection density f(lambda') assigns each hidden angle a detection
//! probability |f| and a spin sign. The correlation integral c(phi), the
//! pair rate t(phi), and the normalized expectation E = sigma c/t are
//! computed along four mutually cross-checking routes:
//!
//! * [`closed_form`]: exact antiderivatives for the naive toy model and
//!   the cosine projection density;
//! * [`quadrature`]: rectangular integration for any density;
//! * [`spectral`]: discrete autoconvolution via the transform of the
//!   sampled density, squared;
//! * [`montecarlo`]: seeded event-level simulation of emissions,
//!   detections, and coincidences.
//!
//! [`analysis`] layers deviation statistics, the three-angle Bell
//! inequality (evaluation and exhaustive grid scans), and the exponent
//! tradeoff frontier of the cos^p density family on top. [`csv`] and
//! [`svg`] render curves to the pinned on-disk formats.

pub mod analysis;
pub mod angle;
pub mod closed_form;
pub mod config;
pub mod csv;
pub mod curve;
pub mod density;
pub mod error;
pub mod manifest;
pub mod montecarlo;
pub mod quadrature;
pub mod spectral;
pub mod svg;

pub use analysis::{BellTriple, DeviationReport, TradeoffPoint};
pub use angle::Angle;
pub use config::{GridMode, Method, TheoryConfig};
pub use curve::{Curve, CurvePoint};
pub use density::{
    qm_expectation, signed_pow, CorrelationMode, DetectionDensity,
    SIGNED_POWER_DEFAULT_EXPONENT,
};
pub use error::{Error, Result};
pub use manifest::RunManifest;
