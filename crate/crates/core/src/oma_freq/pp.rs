use serde::{Deserialize, Serialize};

use super::peaks::{pick_peaks, PeakOptions};
use super::{IdentifiedMode, IdentifiedModeSet, Method, SpectrumCurve};
use crate::dsp::{csd_matrix, MultiChannelRecord, PowerSpectra, SpectralEstimatorOptions, SpectralMatrix};
use crate::linalg::normalize_unit_max;
use crate::{OmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PpOptions {
    pub estimator: SpectralEstimatorOptions,
    pub peaks: PeakOptions,
    /// Reference channel for shape recovery; `None` picks the channel with
    /// the largest power in the search band.
    pub reference_channel: Option<usize>,
}

/// Averaged normalized PSD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anpsd {
    pub curve: SpectrumCurve,
    /// Channels left out because their total power is zero.
    pub excluded: Vec<usize>,
}

/// Normalize each channel PSD to unit integrated power and average.
pub fn anpsd(spectra: &PowerSpectra) -> Result<Anpsd> {
    let totals = spectra.integrated_power();
    let mut excluded = Vec::new();
    let n_lines = spectra.n_lines();
    let mut sum = vec![0.0; n_lines];
    let mut used = 0usize;
    for (c, (values, total)) in spectra.values.iter().zip(&totals).enumerate() {
        if !(*total > 0.0) || !total.is_finite() {
            excluded.push(c);
            continue;
        }
        used += 1;
        for (s, v) in sum.iter_mut().zip(values) {
            *s += v / total;
        }
    }
    if used == 0 {
        return Err(OmaError::NoChannels);
    }
    sum.iter_mut().for_each(|s| *s /= used as f64);
    Ok(Anpsd {
        curve: SpectrumCurve::new(spectra.resolution, sum),
        excluded,
    })
}

/// Channel with the largest auto-spectral power inside the search band.
fn strongest_channel(spectra: &SpectralMatrix, peaks: &PeakOptions) -> usize {
    let (first, last) = peaks
        .line_range(spectra.resolution(), spectra.n_lines())
        .unwrap_or((0, spectra.n_lines().saturating_sub(1)));
    (0..spectra.n_channels())
        .map(|c| (c, (first..=last).map(|k| spectra.get(k, c, c).re).sum::<f64>()))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0
}

/// Peak picking on precomputed spectra.
pub fn pp_from_spectra(spectra: &SpectralMatrix, options: &PpOptions) -> Result<IdentifiedModeSet> {
    let c = spectra.n_channels();
    let reference = match options.reference_channel {
        Some(r) if r >= c => {
            return Err(OmaError::InvalidParameter(format!("reference channel {r} out of range ({c} channels)")))
        }
        Some(r) => r,
        None => strongest_channel(spectra, &options.peaks),
    };
    let averaged = anpsd(&spectra.auto_spectra())?;
    let peaks = pick_peaks(&averaged.curve, &options.peaks)?;

    let mut diagnostics: Vec<String> = averaged
        .excluded
        .iter()
        .map(|ch| format!("channel {ch} has zero power and was left out of the ANPSD"))
        .collect();
    let mut modes = Vec::with_capacity(peaks.len());
    for peak in peaks {
        let k = peak.line;
        let g_rr = spectra.get(k, reference, reference).re;
        if !(g_rr > 0.0) {
            diagnostics.push(format!(
                "peak at {:.3} Hz dropped: reference auto-spectrum is zero",
                peak.frequency
            ));
            continue;
        }
        let mut shape: Vec<f64> = (0..c)
            .map(|j| {
                let g = spectra.get(k, j, reference);
                let sign = if g.re >= 0.0 { 1.0 } else { -1.0 };
                sign * g.norm() / g_rr
            })
            .collect();
        if !normalize_unit_max(&mut shape) {
            diagnostics.push(format!("peak at {:.3} Hz dropped: zero shape", peak.frequency));
            continue;
        }
        modes.push(IdentifiedMode {
            frequency: peak.frequency,
            shape,
            damping: None,
            quality: Some(peak.value),
        });
    }
    let mut set = IdentifiedModeSet::new(Method::Pp, modes);
    set.diagnostics = diagnostics;
    Ok(set)
}

pub fn pp_identify(record: &MultiChannelRecord, options: &PpOptions) -> Result<IdentifiedModeSet> {
    pp_from_spectra(&csd_matrix(record, &options.estimator)?, options)
}
