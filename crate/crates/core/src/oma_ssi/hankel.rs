use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dsp::MultiChannelRecord;
use crate::{OmaError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HankelOptions {
    /// Block rows `i` of the past (and of the future) half.
    pub block_rows: usize,
    /// Even model orders to realize.
    pub orders: Vec<usize>,
    /// Remove each channel's mean first.
    pub detrend: bool,
}

impl Default for HankelOptions {
    fn default() -> Self {
        HankelOptions {
            block_rows: 10,
            orders: (1..=50).map(|k| 2 * k).collect(),
            detrend: true,
        }
    }
}

impl HankelOptions {
    pub fn validate(&self) -> Result<()> {
        if self.block_rows == 0 {
            return Err(OmaError::InvalidParameter("block rows must be positive".into()));
        }
        if let Some(bad) = self.orders.iter().find(|&&n| n == 0 || n % 2 != 0) {
            return Err(OmaError::InvalidParameter(format!("model order {bad} must be a positive even number")));
        }
        Ok(())
    }

    /// Largest admissible order for `n_channels` outputs.
    pub fn max_order(&self, n_channels: usize) -> usize {
        self.block_rows * n_channels
    }
}

/// Transposed block Hankel matrix of past and future outputs.
///
/// Row `t` holds `[y_t; y_{t+1}; ...; y_{t+2i-1}] / sqrt(j)` so that the
/// matrix handed to the QR step is `j x 2il`.
#[derive(Debug, Clone)]
pub struct BlockHankel {
    pub block_rows: usize,
    pub n_channels: usize,
    pub columns: usize,
    pub transposed: DMatrix<f64>,
}

impl BlockHankel {
    /// Rows of the (untransposed) Hankel matrix, `2il`.
    pub fn rows(&self) -> usize {
        2 * self.block_rows * self.n_channels
    }
}

pub fn build_hankel(record: &MultiChannelRecord, options: &HankelOptions) -> Result<BlockHankel> {
    options.validate()?;
    let l = record.n_channels();
    let i = options.block_rows;
    let n = record.n_samples();
    if 2 * i * l > n || n < 2 * i {
        return Err(OmaError::InvalidInput(format!(
            "record of {n} samples is too short for {i} block rows of {l} channels"
        )));
    }
    let j = n - 2 * i + 1;
    let scale = 1.0 / (j as f64).sqrt();
    let channels: Vec<Vec<f64>> = record
        .channels()
        .iter()
        .map(|c| {
            let mean = if options.detrend { c.iter().sum::<f64>() / n as f64 } else { 0.0 };
            c.iter().map(|x| (x - mean) * scale).collect()
        })
        .collect();
    let transposed = DMatrix::from_fn(j, 2 * i * l, |t, row| channels[row % l][t + row / l]);
    Ok(BlockHankel {
        block_rows: i,
        n_channels: l,
        columns: j,
        transposed,
    })
}
