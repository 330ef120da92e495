//! Data-driven stochastic subspace identification (unweighted principal
//! components) with stabilization-diagram mode selection.

mod hankel;
mod realize;
mod stabilization;

use serde::{Deserialize, Serialize};

use crate::dsp::{decimate, MultiChannelRecord};
use crate::oma_freq::{IdentifiedModeSet, Method};
use crate::Result;

pub use hankel::{build_hankel, BlockHankel, HankelOptions};
pub use realize::{realize_modes, Pole, Realization, SubspaceFactorization, MAX_DAMPING};
pub use stabilization::{stabilize, DiagramPole, Stabilization, StabilizationDiagram, StabilityTolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsiOptions {
    pub hankel: HankelOptions,
    pub tolerances: StabilityTolerances,
    /// Report only clusters inside this band (Hz).
    pub band: Option<(f64, f64)>,
    /// Decimation factor applied before the Hankel matrix is built.
    pub decimation: usize,
}

/// Defaults tuned for beam records sampled at 10 kHz: decimate to 2.5 kHz
/// and use 20 block rows so the Hankel window spans the low modes.
impl Default for SsiOptions {
    fn default() -> Self {
        SsiOptions {
            hankel: HankelOptions {
                block_rows: 20,
                ..HankelOptions::default()
            },
            tolerances: StabilityTolerances::default(),
            band: None,
            decimation: 4,
        }
    }
}

/// Hankel matrix, factorization and stabilization diagram for a record.
pub fn stabilization(record: &MultiChannelRecord, options: &SsiOptions) -> Result<Stabilization> {
    let decimated;
    let record = if options.decimation > 1 {
        decimated = decimate(record, options.decimation)?;
        &decimated
    } else {
        record
    };
    let hankel = build_hankel(record, &options.hankel)?;
    let factorization = SubspaceFactorization::from_hankel(&hankel)?;
    drop(hankel);
    let mut result = stabilize(&factorization, &options.hankel.orders, record.dt(), &options.tolerances)?;
    if let Some((lo, hi)) = options.band {
        result.modes.retain(|m| m.frequency >= lo && m.frequency <= hi);
    }
    Ok(result)
}

pub fn ssi_identify(record: &MultiChannelRecord, options: &SsiOptions) -> Result<IdentifiedModeSet> {
    let result = stabilization(record, options)?;
    let mut set = IdentifiedModeSet::new(Method::Ssi, result.modes);
    set.diagnostics = result.diagram.diagnostics;
    Ok(set)
}
