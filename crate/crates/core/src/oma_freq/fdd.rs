use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::peaks::{pick_peaks, PeakOptions};
use super::{IdentifiedMode, IdentifiedModeSet, Method, SpectrumCurve};
use crate::dsp::{csd_matrix, MultiChannelRecord, SpectralEstimatorOptions, SpectralMatrix};
use crate::linalg::real_aligned_shape;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FddOptions {
    pub estimator: SpectralEstimatorOptions,
    pub peaks: PeakOptions,
}

/// Eigenvalues (descending) and eigenvectors of one Hermitian line.
fn decompose(line: DMatrix<Complex64>) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    let eig = SymmetricEigen::try_new(line, 1e-14, 1000)?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Some((values, vectors))
}

/// Singular values of the cross-spectral matrix per line, largest first
/// (`[rank][line]`), plus one diagnostic per line that failed to converge.
pub fn singular_value_curves(spectra: &SpectralMatrix) -> (Vec<SpectrumCurve>, Vec<String>) {
    let c = spectra.n_channels();
    let per_line: Vec<Option<Vec<f64>>> = (0..spectra.n_lines())
        .into_par_iter()
        .map(|k| decompose(spectra.line(k)).map(|(v, _)| v))
        .collect();
    let mut curves = vec![vec![0.0; spectra.n_lines()]; c];
    let mut diagnostics = Vec::new();
    for (k, values) in per_line.into_iter().enumerate() {
        match values {
            Some(v) => v.into_iter().enumerate().for_each(|(r, s)| curves[r][k] = s),
            None => diagnostics.push(format!("line {k} skipped: eigen solver did not converge")),
        }
    }
    let curves = curves
        .into_iter()
        .map(|v| SpectrumCurve::new(spectra.resolution(), v))
        .collect();
    (curves, diagnostics)
}

/// The first singular value curve.
pub fn first_singular_values(spectra: &SpectralMatrix) -> (SpectrumCurve, Vec<String>) {
    let (mut curves, diagnostics) = singular_value_curves(spectra);
    (curves.swap_remove(0), diagnostics)
}

pub fn fdd_from_spectra(spectra: &SpectralMatrix, options: &FddOptions) -> Result<IdentifiedModeSet> {
    let (s1, mut diagnostics) = first_singular_values(spectra);
    let peaks = pick_peaks(&s1, &options.peaks)?;
    let mut modes = Vec::with_capacity(peaks.len());
    for peak in peaks {
        let Some((_, vectors)) = decompose(spectra.line(peak.line)) else {
            continue;
        };
        let first: Vec<Complex64> = vectors.column(0).iter().copied().collect();
        match real_aligned_shape(&first) {
            Some(shape) => modes.push(IdentifiedMode {
                frequency: peak.frequency,
                shape,
                damping: None,
                quality: Some(peak.value),
            }),
            None => diagnostics.push(format!("peak at {:.3} Hz dropped: zero singular vector", peak.frequency)),
        }
    }
    let mut set = IdentifiedModeSet::new(Method::Fdd, modes);
    set.diagnostics = diagnostics;
    Ok(set)
}

pub fn fdd_identify(record: &MultiChannelRecord, options: &FddOptions) -> Result<IdentifiedModeSet> {
    fdd_from_spectra(&csd_matrix(record, &options.estimator)?, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal_metrics::mac;

    #[test]
    fn rank_one_algebra() {
        let phi = [Complex64::new(0.5, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.25, 0.0)];
        let rot = Complex64::from_polar(1.0, 0.7);
        let v = DMatrix::from_iterator(3, 1, phi.iter().map(|p| p * rot));
        let outer = &v * v.adjoint();
        let s: Vec<f64> = (0..40).map(|k| 1.0 + 100.0 * (-((k as f64 - 20.0) / 3.0).powi(2)).exp()).collect();
        let lines: Vec<DMatrix<Complex64>> = s.iter().map(|x| outer.map(|z| z * *x)).collect();
        let spectra = SpectralMatrix::from_lines(0.5, &lines).unwrap();
        let (curves, diag) = singular_value_curves(&spectra);
        assert!(diag.is_empty());
        let norm2 = 0.25 + 1.0 + 0.0625;
        for k in 0..40 {
            assert!((curves[0].values[k] - s[k] * norm2).abs() < 1e-10 * s[k]);
            assert!(curves[1].values[k].abs() < 1e-10 * s[k]);
        }
        let set = fdd_from_spectra(&spectra, &FddOptions::default()).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.modes[0].frequency - 10.0).abs() < 1e-9);
        for (a, b) in set.modes[0].shape.iter().zip([-0.5, 1.0, -0.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(mac(&set.modes[0].shape, &[0.5, -1.0, 0.25]).unwrap() > 1.0 - 1e-12);
    }
}
