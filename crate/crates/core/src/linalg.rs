//! Small dense helpers shared by the identifiers.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::{OmaError, Result};

/// Eigenvalues and right eigenvectors of a real square matrix.
///
/// Complex Schur form `A = Q T Q^H`, then back-substitution on the
/// triangular factor for each eigenvector.
pub(crate) fn eigen_general(a: &DMatrix<f64>) -> Result<Vec<(Complex64, DVector<Complex64>)>> {
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ac: DMatrix<Complex64> = a.map(|x| Complex64::new(x, 0.0));
    let schur = Schur::try_new(ac, f64::EPSILON, 10_000)
        .ok_or_else(|| OmaError::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tiny = scale * f64::EPSILON;

    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = DVector::<Complex64>::zeros(n);
        x[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for m in j + 1..=k {
                s += t[(j, m)] * x[m];
            }
            let mut den = t[(j, j)] - lambda;
            if den.norm() < tiny {
                den = Complex64::new(tiny, 0.0);
            }
            x[j] = -s / den;
        }
        let mut v = &q * x;
        let norm = v.norm();
        if norm > 0.0 {
            v /= Complex64::new(norm, 0.0);
        }
        out.push((lambda, v));
    }
    Ok(out)
}

/// Rotate a complex shape to its dominant real direction, keep the real
/// part and scale so the largest-magnitude entry is +1.
pub(crate) fn real_aligned_shape(v: &[Complex64]) -> Option<Vec<f64>> {
    // maximizes sum(Re(v_j e^{-i theta})^2)
    let s: Complex64 = v.iter().map(|z| z * z).sum();
    let theta = 0.5 * s.arg();
    let rot = Complex64::from_polar(1.0, -theta);
    let mut real: Vec<f64> = v.iter().map(|z| (z * rot).re).collect();
    normalize_unit_max(&mut real).then_some(real)
}

/// Scale so that the largest-magnitude entry equals +1. Returns false for
/// an all-zero (or non-finite) vector.
pub(crate) fn normalize_unit_max(v: &mut [f64]) -> bool {
    let dominant = v.iter().cloned().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(0.0);
    if dominant == 0.0 || !dominant.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= dominant);
    true
}
