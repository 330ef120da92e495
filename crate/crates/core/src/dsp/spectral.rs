use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::MultiChannelRecord;
use crate::{OmaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    #[default]
    Rectangular,
    Hann,
}

/// Segmenting and windowing of the averaged periodogram.
///
/// The default (one rectangular full-length segment) gives a resolution of
/// `1 / T` for a record of duration `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralEstimatorOptions {
    pub window: WindowKind,
    pub segments: usize,
    pub overlap: f64,
}

impl Default for SpectralEstimatorOptions {
    fn default() -> Self {
        SpectralEstimatorOptions {
            window: WindowKind::Rectangular,
            segments: 1,
            overlap: 0.0,
        }
    }
}

const MIN_SEGMENT: usize = 16;

impl SpectralEstimatorOptions {
    pub fn averaged(window: WindowKind, segments: usize, overlap: f64) -> Self {
        SpectralEstimatorOptions {
            window,
            segments,
            overlap,
        }
    }

    /// Segment length and hop for a record of `n` samples.
    pub fn layout(&self, n: usize) -> Result<(usize, usize)> {
        if self.segments == 0 {
            return Err(OmaError::InvalidParameter("at least one segment is required".into()));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(OmaError::InvalidParameter(format!("overlap {} outside [0, 1)", self.overlap)));
        }
        let k = self.segments;
        let len = (n as f64 / (1.0 + (k - 1) as f64 * (1.0 - self.overlap))).floor() as usize;
        if len < MIN_SEGMENT {
            return Err(OmaError::InvalidParameter(format!(
                "{k} segments of a {n}-sample record are shorter than {MIN_SEGMENT} samples"
            )));
        }
        let hop = if k == 1 { 0 } else { (n - len) / (k - 1) };
        Ok((len.min(n), hop))
    }

    fn window(&self, len: usize) -> Vec<f64> {
        match self.window {
            WindowKind::Rectangular => vec![1.0; len],
            WindowKind::Hann => (0..len)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / len as f64).cos())
                .collect(),
        }
    }
}

/// One-sided auto spectra of every channel on a uniform grid starting at 0 Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectra {
    pub resolution: f64,
    /// `[channel][line]`, units^2 / Hz.
    pub values: Vec<Vec<f64>>,
}

impl PowerSpectra {
    pub fn n_lines(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_lines()).map(|k| k as f64 * self.resolution).collect()
    }

    /// `sum(PSD * df)` per channel.
    pub fn integrated_power(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v.iter().sum::<f64>() * self.resolution)
            .collect()
    }
}

/// Cross-spectral density matrix per frequency line.
#[derive(Debug, Clone)]
pub struct SpectralMatrix {
    resolution: f64,
    n_lines: usize,
    n_channels: usize,
    segments: usize,
    // line-major: [line][row][col]
    data: Vec<Complex64>,
}

impl SpectralMatrix {
    /// Build from explicit per-line square matrices on a grid starting at 0 Hz.
    pub fn from_lines(resolution: f64, lines: &[DMatrix<Complex64>]) -> Result<Self> {
        let c = lines.first().map(|m| m.nrows()).unwrap_or(0);
        if c == 0 || lines.iter().any(|m| m.nrows() != c || m.ncols() != c) {
            return Err(OmaError::InvalidInput("spectral lines must be non-empty square matrices of one size".into()));
        }
        if !(resolution > 0.0) {
            return Err(OmaError::InvalidInput(format!("resolution must be positive, got {resolution}")));
        }
        let mut data = Vec::with_capacity(lines.len() * c * c);
        for m in lines {
            for r in 0..c {
                for col in 0..c {
                    data.push(m[(r, col)]);
                }
            }
        }
        Ok(SpectralMatrix {
            resolution,
            n_lines: lines.len(),
            n_channels: c,
            segments: 1,
            data,
        })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    /// Number of averaged segments.
    pub fn segments(&self) -> usize {
        self.segments
    }

    pub fn frequency(&self, line: usize) -> f64 {
        line as f64 * self.resolution
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_lines).map(|k| self.frequency(k)).collect()
    }

    pub fn get(&self, line: usize, row: usize, col: usize) -> Complex64 {
        let c = self.n_channels;
        self.data[line * c * c + row * c + col]
    }

    pub fn line(&self, line: usize) -> DMatrix<Complex64> {
        let c = self.n_channels;
        let start = line * c * c;
        // storage is row-major per line
        DMatrix::from_row_slice(c, c, &self.data[start..start + c * c])
    }

    /// Diagonal of the matrix as auto spectra.
    pub fn auto_spectra(&self) -> PowerSpectra {
        PowerSpectra {
            resolution: self.resolution,
            values: (0..self.n_channels)
                .map(|a| (0..self.n_lines).map(|k| self.get(k, a, a).re).collect())
                .collect(),
        }
    }

    /// `|G_ab|^2 / (G_aa G_bb)` per line; zero where either auto spectrum vanishes.
    pub fn coherence(&self, a: usize, b: usize) -> Vec<f64> {
        (0..self.n_lines)
            .map(|k| {
                let den = self.get(k, a, a).re * self.get(k, b, b).re;
                if den > 0.0 {
                    self.get(k, a, b).norm_sqr() / den
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Windowed one-sided transforms `[segment][channel][line]` with the PSD scale.
struct SegmentTransforms {
    spectra: Vec<Vec<Vec<Complex64>>>,
    resolution: f64,
    n_lines: usize,
}

fn transforms(record: &MultiChannelRecord, options: &SpectralEstimatorOptions) -> Result<SegmentTransforms> {
    let n = record.n_samples();
    let (len, hop) = options.layout(n)?;
    let window = options.window(len);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let fs = record.sample_rate();
    let n_lines = len / 2 + 1;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);

    let mut spectra = Vec::with_capacity(options.segments);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for s in 0..options.segments {
        let start = s * hop;
        let mut per_channel = Vec::with_capacity(record.n_channels());
        for channel in record.channels() {
            for (b, (x, w)) in buf.iter_mut().zip(channel[start..start + len].iter().zip(&window)) {
                *b = Complex64::new(x * w, 0.0);
            }
            fft.process(&mut buf);
            let lines = (0..n_lines)
                .map(|k| {
                    let one_sided = if k == 0 || 2 * k == len { 1.0 } else { 2.0 };
                    buf[k] * (one_sided / (fs * window_power)).sqrt()
                })
                .collect();
            per_channel.push(lines);
        }
        spectra.push(per_channel);
    }
    Ok(SegmentTransforms {
        spectra,
        resolution: fs / len as f64,
        n_lines,
    })
}

/// Averaged one-sided power spectral density of each channel.
pub fn psd(record: &MultiChannelRecord, options: &SpectralEstimatorOptions) -> Result<PowerSpectra> {
    let t = transforms(record, options)?;
    let k = t.spectra.len() as f64;
    let values = (0..record.n_channels())
        .map(|c| {
            (0..t.n_lines)
                .map(|line| t.spectra.iter().map(|seg| seg[c][line].norm_sqr()).sum::<f64>() / k)
                .collect()
        })
        .collect();
    Ok(PowerSpectra {
        resolution: t.resolution,
        values,
    })
}

/// Averaged cross-spectral density matrix `G_ab(f) = E[X_a X_b^*]`.
pub fn csd_matrix(record: &MultiChannelRecord, options: &SpectralEstimatorOptions) -> Result<SpectralMatrix> {
    let t = transforms(record, options)?;
    let c = record.n_channels();
    let k = t.spectra.len() as f64;
    let mut data = vec![Complex64::new(0.0, 0.0); t.n_lines * c * c];
    for seg in &t.spectra {
        for line in 0..t.n_lines {
            let base = line * c * c;
            for a in 0..c {
                let xa = seg[a][line];
                // auto term through norm_sqr so it matches psd() bit for bit
                data[base + a * c + a] += Complex64::new(xa.norm_sqr(), 0.0);
                for b in a + 1..c {
                    data[base + a * c + b] += xa * seg[b][line].conj();
                }
            }
        }
    }
    for line in 0..t.n_lines {
        let base = line * c * c;
        for a in 0..c {
            data[base + a * c + a] /= k;
            for b in a + 1..c {
                data[base + a * c + b] /= k;
                data[base + b * c + a] = data[base + a * c + b].conj();
            }
        }
    }
    Ok(SpectralMatrix {
        resolution: t.resolution,
        n_lines: t.n_lines,
        n_channels: c,
        segments: t.spectra.len(),
        data,
    })
}
