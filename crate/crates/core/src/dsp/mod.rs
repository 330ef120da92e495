//! Time-series containers, power statistics, random signal synthesis and
//! spectral estimation.

mod record;
mod resample;
mod spectral;
mod stats;
mod synth;

pub use record::MultiChannelRecord;
pub use resample::decimate;
pub use spectral::{csd_matrix, psd, PowerSpectra, SpectralEstimatorOptions, SpectralMatrix, WindowKind};
pub use stats::{power, power_and_rms};
pub use synth::{band_limited_force, derive_seed, gaussian_white};
