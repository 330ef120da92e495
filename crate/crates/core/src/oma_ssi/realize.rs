use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hankel::BlockHankel;
use crate::linalg::{eigen_general, real_aligned_shape};
use crate::{OmaError, Result};

/// Relative singular value below which a direction counts as rank deficient.
const RANK_TOLERANCE: f64 = 1e-12;

/// Left singular vectors and singular values of the projection of future
/// onto past outputs; everything a realization of any order needs.
#[derive(Debug, Clone)]
pub struct SubspaceFactorization {
    pub n_channels: usize,
    pub block_rows: usize,
    pub left: DMatrix<f64>,
    pub singular_values: Vec<f64>,
}

impl SubspaceFactorization {
    /// LQ factorization of the Hankel matrix (via QR of its transpose),
    /// then SVD of the future-past block of the triangular factor.
    pub fn from_hankel(hankel: &BlockHankel) -> Result<Self> {
        let il = hankel.block_rows * hankel.n_channels;
        let r = hankel.transposed.clone().qr().r();
        if r.nrows() < 2 * il {
            return Err(OmaError::InvalidInput("Hankel matrix has fewer columns than rows".into()));
        }
        // L = R^T, so L21 = R[..il, il..]^T
        let l21 = r.view((0, il), (il, il)).transpose();
        Self::from_projection(&l21, hankel.n_channels, hankel.block_rows)
    }

    /// SVD of an explicit projection (or observability) matrix with `il` rows.
    pub fn from_projection(projection: &DMatrix<f64>, n_channels: usize, block_rows: usize) -> Result<Self> {
        if projection.nrows() != n_channels * block_rows || n_channels == 0 || block_rows < 2 {
            return Err(OmaError::InvalidInput(format!(
                "projection has {} rows, expected {} block rows of {} channels",
                projection.nrows(),
                block_rows,
                n_channels
            )));
        }
        let svd = projection.clone().svd(true, false);
        let u = svd.u.ok_or_else(|| OmaError::Numerical("SVD of the projection failed".into()))?;
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let singular_values = order.iter().map(|&k| svd.singular_values[k]).collect();
        let left = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        Ok(SubspaceFactorization {
            n_channels,
            block_rows,
            left,
            singular_values,
        })
    }

    /// Number of singular values above the relative rank tolerance.
    pub fn numerical_rank(&self) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| s > top * RANK_TOLERANCE).count()
    }

    /// Observability matrix estimate `U_n S_n^{1/2}`.
    fn observability(&self, order: usize) -> DMatrix<f64> {
        let mut gamma = self.left.columns(0, order).into_owned();
        for (c, s) in self.singular_values.iter().take(order).enumerate() {
            gamma.column_mut(c).scale_mut(s.sqrt());
        }
        gamma
    }
}

/// A physical pole candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub frequency: f64,
    pub damping: f64,
    /// Real shape with the largest-magnitude entry +1.
    pub shape: Vec<f64>,
    pub discrete_eigenvalue: Complex64,
}

/// Poles of one model order plus what happened on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub requested_order: usize,
    pub order: usize,
    pub poles: Vec<Pole>,
    /// Every discrete eigenvalue of the realized state matrix.
    pub eigenvalues: Vec<Complex64>,
    pub diagnostics: Vec<String>,
}

/// Maximum damping ratio a pole may have and still count as physical.
pub const MAX_DAMPING: f64 = 0.2;

/// State-space realization of one order from the factorization, followed
/// by modal decomposition and the physical-pole filters.
pub fn realize_modes(factorization: &SubspaceFactorization, order: usize, dt: f64) -> Result<Realization> {
    if order == 0 || !order.is_multiple_of(2) {
        return Err(OmaError::InvalidParameter(format!("model order {order} must be a positive even number")));
    }
    if !(dt > 0.0) {
        return Err(OmaError::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let l = factorization.n_channels;
    let il = l * factorization.block_rows;
    let mut diagnostics = Vec::new();
    let rank = factorization.numerical_rank();
    let mut n = order;
    if n > il {
        n = il;
        diagnostics.push(format!("order {order} exceeds {il} (block rows x channels); truncated"));
    }
    if n > rank {
        n = rank - rank % 2;
        diagnostics.push(format!("order {order} exceeds numerical rank {rank}; truncated to {n}"));
    }
    if n == 0 {
        return Ok(Realization {
            requested_order: order,
            order: 0,
            poles: Vec::new(),
            eigenvalues: Vec::new(),
            diagnostics,
        });
    }

    let gamma = factorization.observability(n);
    let c = gamma.rows(0, l).into_owned();
    let upper = gamma.rows(0, il - l).into_owned();
    let lower = gamma.rows(l, il - l).into_owned();
    // least squares for A in upper * A = lower
    let a = upper
        .svd(true, true)
        .solve(&lower, f64::EPSILON * il as f64)
        .map_err(|e| OmaError::Numerical(format!("shift-invariance solve failed: {e}")))?;

    let pairs = eigen_general(&a)?;
    let eigenvalues: Vec<Complex64> = pairs.iter().map(|(mu, _)| *mu).collect();
    let c_complex = c.map(|x| Complex64::new(x, 0.0));
    let mut poles = Vec::new();
    for (mu, psi) in pairs {
        if !(mu.norm() < 1.0) || mu.im <= 0.0 {
            continue;
        }
        let lambda = mu.ln() / dt;
        let modulus = lambda.norm();
        let damping = -lambda.re / modulus;
        if !(damping > 0.0 && damping < MAX_DAMPING) {
            continue;
        }
        let phi: Vec<Complex64> = (&c_complex * psi).iter().copied().collect();
        let Some(shape) = real_aligned_shape(&phi) else {
            continue;
        };
        poles.push(Pole {
            frequency: modulus / (2.0 * std::f64::consts::PI),
            damping,
            shape,
            discrete_eigenvalue: mu,
        });
    }
    poles.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    Ok(Realization {
        requested_order: order,
        order: n,
        poles,
        eigenvalues,
        diagnostics,
    })
}
