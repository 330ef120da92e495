use serde::{Deserialize, Serialize};

use crate::beam_fem::{
    assemble_model, modal_analysis, transient_response, BeamModel, GlobalSystem, ModalSolution, SupportCondition,
    DEFAULT_DAMPING_RATIO,
};
use crate::dsp::{band_limited_force, derive_seed, MultiChannelRecord};
use crate::{OmaError, Result};

/// One simulated test beam: model, excitation and recording settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BeamSpec {
    pub support: SupportCondition,
    pub n_elements: usize,
    /// Record length in seconds.
    pub duration: f64,
    /// Sampling interval in seconds.
    pub dt: f64,
    pub damping_ratio: f64,
    /// Excitation band in Hz.
    pub force_band: (f64, f64),
    /// RMS of each nodal force in N.
    pub force_rms: f64,
    /// Number of FE modes used as the identification reference.
    pub reference_modes: usize,
}

impl Default for BeamSpec {
    fn default() -> Self {
        BeamSpec {
            support: SupportCondition::CF,
            n_elements: 10,
            duration: 5.0,
            dt: 1e-4,
            damping_ratio: DEFAULT_DAMPING_RATIO,
            force_band: (1.0, 1500.0),
            force_rms: 0.2,
            reference_modes: 5,
        }
    }
}

impl BeamSpec {
    pub fn new(support: SupportCondition) -> Self {
        BeamSpec {
            support,
            ..Default::default()
        }
    }

    pub fn model(&self) -> BeamModel {
        BeamModel::reference(self.support).with_elements(self.n_elements)
    }

    pub fn sample_rate(&self) -> f64 {
        1.0 / self.dt
    }

    pub fn validate(&self) -> Result<()> {
        self.model().validate()?;
        if !(self.duration > 0.0 && self.dt > 0.0 && self.duration > 2.0 * self.dt) {
            return Err(OmaError::InvalidParameter(format!(
                "beam {}: duration {} s and dt {} s are inconsistent",
                self.support, self.duration, self.dt
            )));
        }
        if !(0.0..1.0).contains(&self.damping_ratio) {
            return Err(OmaError::InvalidParameter(format!(
                "beam {}: damping ratio {} outside [0, 1)",
                self.support, self.damping_ratio
            )));
        }
        if self.reference_modes == 0 {
            return Err(OmaError::InvalidParameter("reference mode count must be positive".into()));
        }
        Ok(())
    }
}

/// A beam simulated once: the noise-free record and its FE reference.
#[derive(Debug, Clone)]
pub struct SimulatedBeam {
    pub spec: BeamSpec,
    pub system: GlobalSystem,
    /// Lowest `reference_modes` FE modes.
    pub reference: ModalSolution,
    /// Noise-free channel accelerations.
    pub record: MultiChannelRecord,
}

/// Seed of the force acting at one channel of one beam.
pub fn force_seed(master_seed: u64, support: SupportCondition, channel: usize) -> u64 {
    derive_seed(master_seed, &format!("force/{}", support.as_str()), &[channel as u64])
}

/// Build the FE model, excite every channel with an independent
/// band-limited force and integrate the response over all modes.
pub fn simulate_beam(spec: &BeamSpec, master_seed: u64) -> Result<SimulatedBeam> {
    spec.validate()?;
    let system = assemble_model(&spec.model())?;
    let modal = modal_analysis(&system, system.n_dofs())?.with_damping(spec.damping_ratio);
    if spec.reference_modes > modal.n_modes() {
        return Err(OmaError::InvalidParameter(format!(
            "beam {} has only {} modes, {} requested as reference",
            spec.support,
            modal.n_modes(),
            spec.reference_modes
        )));
    }
    let rate = spec.sample_rate();
    let forces = (0..system.n_channels())
        .map(|c| {
            band_limited_force(
                spec.duration,
                rate,
                spec.force_band,
                spec.force_rms,
                force_seed(master_seed, spec.support, c),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let forces = MultiChannelRecord::new(rate, system.channel_labels(), forces)?;
    let record = transient_response(&system, &modal, &forces, spec.dt, spec.duration)?;
    Ok(SimulatedBeam {
        spec: spec.clone(),
        reference: modal.truncated(spec.reference_modes),
        system,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_simulation_shapes() {
        let spec = BeamSpec {
            duration: 0.2,
            ..BeamSpec::new(SupportCondition::SS)
        };
        let sim = simulate_beam(&spec, 1).unwrap();
        assert_eq!(sim.record.n_channels(), 9);
        assert_eq!(sim.record.n_samples(), 2001);
        assert_eq!(sim.reference.n_modes(), 5);
        assert!(sim.record.channels().iter().flatten().all(|x| x.is_finite()));
        let again = simulate_beam(&spec, 1).unwrap();
        assert_eq!(sim.record, again.record);
        let other = simulate_beam(&spec, 2).unwrap();
        assert_ne!(sim.record, other.record);
    }

    #[test]
    fn invalid_specs() {
        let spec = BeamSpec {
            damping_ratio: 1.5,
            ..BeamSpec::default()
        };
        assert!(simulate_beam(&spec, 0).is_err());
        let spec = BeamSpec {
            reference_modes: 50,
            duration: 0.01,
            ..BeamSpec::default()
        };
        assert!(simulate_beam(&spec, 0).is_err());
    }
}
