use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{GlobalSystem, DEFAULT_DAMPING_RATIO};
use crate::{OmaError, Result};

/// Reference modal parameters of a [`GlobalSystem`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModalSolution {
    /// Natural frequencies in Hz, strictly ascending.
    pub frequencies: Vec<f64>,
    /// Mass-normalized shapes, one column per mode, rows over the free DOFs.
    pub shapes: DMatrix<f64>,
    /// Uniform modal damping ratio.
    pub damping_ratio: f64,
    /// Free-DOF index of every measurement channel, in channel order.
    pub channel_dofs: Vec<usize>,
    pub channel_labels: Vec<String>,
}

impl ModalSolution {
    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn n_channels(&self) -> usize {
        self.channel_dofs.len()
    }

    pub fn omega(&self, mode: usize) -> f64 {
        2.0 * PI * self.frequencies[mode]
    }

    pub fn with_damping(mut self, zeta: f64) -> Self {
        self.damping_ratio = zeta;
        self
    }

    /// Shape of `mode` restricted to the measurement channels.
    pub fn channel_shape(&self, mode: usize) -> Vec<f64> {
        self.channel_dofs.iter().map(|&d| self.shapes[(d, mode)]).collect()
    }

    /// Keep only the lowest `n` modes.
    pub fn truncated(&self, n: usize) -> ModalSolution {
        let n = n.min(self.n_modes());
        ModalSolution {
            frequencies: self.frequencies[..n].to_vec(),
            shapes: self.shapes.columns(0, n).into_owned(),
            damping_ratio: self.damping_ratio,
            channel_dofs: self.channel_dofs.clone(),
            channel_labels: self.channel_labels.clone(),
        }
    }
}

/// Solve `K phi = omega^2 M phi` and return the lowest `n_modes` modes.
///
/// Shapes are mass-normalized and signed so that the largest-magnitude
/// channel entry is positive.
pub fn modal_analysis(system: &GlobalSystem, n_modes: usize) -> Result<ModalSolution> {
    let n = system.n_dofs();
    if n_modes == 0 || n_modes > n {
        return Err(OmaError::InvalidParameter(format!(
            "requested {n_modes} modes from a system with {n} free DOFs"
        )));
    }
    let chol = system
        .mass
        .clone()
        .cholesky()
        .ok_or_else(|| OmaError::Numerical("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    // C = L^-1 K L^-T
    let linv_k = l
        .solve_lower_triangular(&system.stiffness)
        .ok_or_else(|| OmaError::Numerical("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| OmaError::Numerical("singular Cholesky factor".into()))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(c, f64::EPSILON, 0)
        .ok_or_else(|| OmaError::Numerical("symmetric eigen solver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let lt = l.transpose();
    let channel_dofs: Vec<usize> = system.channels.iter().map(|c| c.dof).collect();
    let mut frequencies = Vec::with_capacity(n_modes);
    let mut shapes = DMatrix::zeros(n, n_modes);
    for (col, &idx) in order.iter().take(n_modes).enumerate() {
        let lambda = eig.eigenvalues[idx];
        if lambda <= 0.0 {
            return Err(OmaError::Numerical(format!(
                "non-positive eigenvalue {lambda:e}; model is not restrained"
            )));
        }
        let y: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        let mut phi = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| OmaError::Numerical("singular Cholesky factor".into()))?;
        // y has unit norm, so phi^T M phi = 1 already; renormalize against round-off.
        let modal_mass = phi.dot(&(&system.mass * &phi));
        phi /= modal_mass.sqrt();
        let dominant = channel_dofs
            .iter()
            .map(|&d| phi[d])
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if dominant < 0.0 {
            phi.neg_mut();
        }
        frequencies.push(lambda.sqrt() / (2.0 * PI));
        shapes.set_column(col, &phi);
    }

    if frequencies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(OmaError::Numerical("repeated natural frequencies".into()));
    }

    Ok(ModalSolution {
        frequencies,
        shapes,
        damping_ratio: DEFAULT_DAMPING_RATIO,
        channel_dofs,
        channel_labels: system.channel_labels(),
    })
}
