//! Discrete Lehmer transform of finite samples over the extended real line of
//! breve moments.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod inversion;
pub mod io;
pub mod lambert;
pub mod moment;
pub mod normalize;
pub mod signal;
pub mod transform;

pub use error::{Error, Result};
pub use moment::BreveMoment;
pub use normalize::{normalize, NormalizationPipeline, NormalizationStep, PositiveSample, Sample};
pub use transform::{
    lehmer, lehmer_at, lehmer_derivative, lehmer_nth_derivative, lehmer_spectrum, lehmer_value,
    monotonicity_class, LehmerValue, MonotonicityClass,
};
pub use inversion::{invert, invert_series, InversionMethod, InversionResult};
pub use lambert::lambert_w0;
pub use distributions::{
    breve_cdf, breve_normalize, breve_pdf, empirical_cdf, empirical_pdf, find_modes,
    linear_cdf_coeffs, log_breve_normalize, log_breve_pdf, nonlinear_coeffs, Breve, BreveParams,
    DensityCurve, LinearFamilyCoeffs, LogBreve, Mode, ModeKind,
};
pub use signal::{
    breve_features, breve_spectrogram, breve_spectrogram_with, sliding_windows, BreveSpectrogram,
    Feature, NormalizationScope, Padding, SpectrogramOptions, TimeSeries, WindowPlan,
};
