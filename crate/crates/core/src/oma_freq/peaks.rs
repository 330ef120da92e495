use serde::{Deserialize, Serialize};

use super::SpectrumCurve;
use crate::{OmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PeakOptions {
    /// Minimum height over the median of the search band, in dB.
    pub min_prominence_db: f64,
    /// Minimum distance between accepted peaks, in Hz.
    pub min_separation_hz: f64,
    /// Search band in Hz; `None` searches every line above DC.
    pub band: Option<(f64, f64)>,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            min_prominence_db: 6.0,
            min_separation_hz: 2.0,
            band: None,
        }
    }
}

impl PeakOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_separation_hz > 0.0) {
            return Err(OmaError::InvalidParameter(format!(
                "peak separation must be positive, got {}",
                self.min_separation_hz
            )));
        }
        if !self.min_prominence_db.is_finite() {
            return Err(OmaError::InvalidParameter("peak prominence must be finite".into()));
        }
        if let Some((lo, hi)) = self.band {
            if !(lo >= 0.0 && lo < hi) {
                return Err(OmaError::InvalidParameter(format!("invalid search band [{lo}, {hi}] Hz")));
            }
        }
        Ok(())
    }

    /// Inclusive line range of the search band on a grid, if non-empty.
    pub(crate) fn line_range(&self, resolution: f64, n_lines: usize) -> Option<(usize, usize)> {
        if n_lines < 2 {
            return None;
        }
        let (first, last) = match self.band {
            None => (1, n_lines - 1),
            Some((lo, hi)) => ((lo / resolution).ceil() as usize, ((hi / resolution).floor() as usize).min(n_lines - 1)),
        };
        let first = first.max(1);
        (first <= last).then_some((first, last))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Grid line of the local maximum.
    pub line: usize,
    /// Parabolically refined frequency.
    pub frequency: f64,
    pub value: f64,
}

/// Local maxima of `curve` inside the search band that rise at least
/// `min_prominence_db` over the band median, thinned so no two are closer
/// than `min_separation_hz` (the higher one wins). Sorted by frequency.
pub fn pick_peaks(curve: &SpectrumCurve, options: &PeakOptions) -> Result<Vec<Peak>> {
    options.validate()?;
    let Some((first, last)) = options.line_range(curve.resolution, curve.len()) else {
        return Ok(Vec::new());
    };
    let v = &curve.values;
    let mut band: Vec<f64> = v[first..=last].to_vec();
    band.sort_by(f64::total_cmp);
    let median = band[band.len() / 2];
    let threshold = median * 10f64.powf(options.min_prominence_db / 10.0);

    let mut candidates: Vec<usize> = (first..=last)
        .filter(|&k| {
            let left = if k > 0 { v[k - 1] } else { f64::NEG_INFINITY };
            let right = v.get(k + 1).copied().unwrap_or(f64::NEG_INFINITY);
            v[k] > left && v[k] >= right && v[k] > threshold && v[k] > 0.0
        })
        .collect();
    candidates.sort_by(|&a, &b| v[b].total_cmp(&v[a]).then(a.cmp(&b)));

    let min_lines = options.min_separation_hz / curve.resolution;
    let mut accepted: Vec<usize> = Vec::new();
    for k in candidates {
        if accepted.iter().all(|&a| (a as f64 - k as f64).abs() >= min_lines) {
            accepted.push(k);
        }
    }
    accepted.sort_unstable();
    Ok(accepted
        .into_iter()
        .map(|k| Peak {
            line: k,
            frequency: refine(v, k) * curve.resolution,
            value: v[k],
        })
        .collect())
}

/// Vertex of the parabola through lines `k-1, k, k+1`, in line units.
fn refine(v: &[f64], k: usize) -> f64 {
    if k == 0 || k + 1 >= v.len() {
        return k as f64;
    }
    let (a, b, c) = (v[k - 1], v[k], v[k + 1]);
    let den = a - 2.0 * b + c;
    if den >= 0.0 {
        return k as f64;
    }
    k as f64 + (0.5 * (a - c) / den).clamp(-0.5, 0.5)
}
