//! RMS-scaled additive Gaussian measurement noise and SNR bookkeeping.
//!
//! Each channel `j` receives `N_j = rms(S_j) * NL * W_j`, where `W_j` is an
//! independent standard-normal stream. The streams are not re-normalized to
//! unit sample variance, so the realized SNR scatters slightly around the
//! nominal `-20 log10(NL)` dB.

use serde::{Deserialize, Serialize};

use crate::dsp::{derive_seed, gaussian_white, power, power_and_rms, MultiChannelRecord};
use crate::{OmaError, Result};

/// The noise levels of the reference campaign.
pub const DEFAULT_NOISE_LEVELS: [f64; 7] = [0.05, 0.10, 0.20, 0.50, 0.75, 1.00, 2.00];

/// Nominal SNR in dB for a noise level: `-20 log10(NL)`.
pub fn nl_to_snr_db(noise_level: f64) -> Result<f64> {
    if !(noise_level > 0.0) || !noise_level.is_finite() {
        return Err(OmaError::Domain(format!("noise level must be positive, got {noise_level}")));
    }
    Ok(-20.0 * noise_level.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub noise_level: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(noise_level: f64, seed: u64) -> Result<Self> {
        let spec = NoiseSpec { noise_level, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise_level >= 0.0) || !self.noise_level.is_finite() {
            return Err(OmaError::InvalidParameter(format!(
                "noise level must be finite and non-negative, got {}",
                self.noise_level
            )));
        }
        Ok(())
    }

    /// Seed of the standard-normal stream for one channel.
    pub fn channel_seed(&self, channel: usize) -> u64 {
        derive_seed(self.seed, "noise", &[channel as u64])
    }
}

/// Generate the noise record for `record`; same shape, labels and rate.
pub fn make_noise(record: &MultiChannelRecord, spec: &NoiseSpec) -> Result<MultiChannelRecord> {
    spec.validate()?;
    let n = record.n_samples();
    let mut data = Vec::with_capacity(record.n_channels());
    for (j, signal) in record.channels().iter().enumerate() {
        if spec.noise_level == 0.0 {
            data.push(vec![0.0; n]);
            continue;
        }
        let (_, rms) = power_and_rms(signal)?;
        let scale = rms * spec.noise_level;
        let mut w = gaussian_white(n, spec.channel_seed(j));
        w.iter_mut().for_each(|x| *x *= scale);
        data.push(w);
    }
    MultiChannelRecord::new(record.sample_rate(), record.labels().to_vec(), data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSnr {
    pub signal_power: f64,
    pub noise_power: f64,
    /// `None` when the noise power is zero.
    pub snr: Option<f64>,
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrReport {
    pub noise_level: f64,
    /// `None` for a zero noise level (infinite SNR).
    pub nominal_snr_db: Option<f64>,
    pub channels: Vec<ChannelSnr>,
}

impl SnrReport {
    pub fn from_parts(signal: &MultiChannelRecord, noise: &MultiChannelRecord, noise_level: f64) -> Result<Self> {
        if signal.n_channels() != noise.n_channels() || signal.n_samples() != noise.n_samples() {
            return Err(OmaError::InvalidInput("signal and noise records differ in shape".into()));
        }
        let channels = signal
            .channels()
            .iter()
            .zip(noise.channels())
            .map(|(s, n)| {
                let ps = power(s)?;
                let pn = power(n)?;
                let snr = (pn > 0.0).then(|| ps / pn);
                Ok(ChannelSnr {
                    signal_power: ps,
                    noise_power: pn,
                    snr,
                    snr_db: snr.map(|x| 10.0 * x.log10()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SnrReport {
            noise_level,
            nominal_snr_db: if noise_level > 0.0 { Some(nl_to_snr_db(noise_level)?) } else { None },
            channels,
        })
    }

    pub fn realized_snr_db(&self) -> Vec<Option<f64>> {
        self.channels.iter().map(|c| c.snr_db).collect()
    }
}

/// `record + make_noise(record, spec)` together with the realized SNR.
pub fn corrupt(record: &MultiChannelRecord, spec: &NoiseSpec) -> Result<(MultiChannelRecord, SnrReport)> {
    let noise = make_noise(record, spec)?;
    let report = SnrReport::from_parts(record, &noise, spec.noise_level)?;
    if spec.noise_level == 0.0 {
        return Ok((record.clone(), report));
    }
    let data = record
        .channels()
        .iter()
        .zip(noise.channels())
        .map(|(s, n)| s.iter().zip(n).map(|(a, b)| a + b).collect())
        .collect();
    let noisy = MultiChannelRecord::new(record.sample_rate(), record.labels().to_vec(), data)?;
    Ok((noisy, report))
}
