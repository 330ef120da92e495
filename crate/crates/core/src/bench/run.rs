use serde::{Deserialize, Serialize};

use super::{simulate_beam, CampaignConfig, SimulatedBeam};
use crate::beam_fem::SupportCondition;
use crate::dsp::{csd_matrix, derive_seed, MultiChannelRecord};
use crate::modal_metrics::{pair_to_reference, ModePairing};
use crate::noise_model::{corrupt, NoiseSpec, SnrReport};
use crate::oma_freq::{fdd_from_spectra, pp_from_spectra, IdentifiedModeSet, Method};
use crate::oma_ssi::ssi_identify;
use crate::{OmaError, Result};

/// Outcome of one identifier in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutcome {
    pub method: Method,
    /// Every identified frequency, paired or not.
    pub frequencies: Vec<f64>,
    pub pairing: Option<ModePairing>,
    /// Shape paired with each reference mode.
    pub paired_shapes: Vec<Option<Vec<f64>>>,
    /// Set when the identifier failed.
    pub error: Option<String>,
}

impl MethodOutcome {
    /// Pairing MAC for a reference mode; 0 when the identifier failed.
    pub fn mac(&self, mode: usize) -> f64 {
        self.pairing.as_ref().map_or(0.0, |p| p.entries[mode].mac)
    }

    pub fn identified_frequency(&self, mode: usize) -> Option<f64> {
        self.pairing.as_ref().and_then(|p| p.entries[mode].frequency)
    }

    pub fn min_mac(&self) -> f64 {
        self.pairing.as_ref().map_or(0.0, |p| p.min_mac())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub beam: SupportCondition,
    pub noise_level: f64,
    pub run: usize,
    pub realized_snr_db: Vec<Option<f64>>,
    pub methods: Vec<MethodOutcome>,
}

impl RunResult {
    pub fn outcome(&self, method: Method) -> Option<&MethodOutcome> {
        self.methods.iter().find(|m| m.method == method)
    }
}

/// Seed of the noise added in one run.
pub fn noise_seed(master_seed: u64, support: SupportCondition, noise_level: f64, run: usize) -> u64 {
    derive_seed(
        master_seed,
        &format!("noise/{}", support.as_str()),
        &[noise_level.to_bits(), run as u64],
    )
}

/// The noisy record a run works on.
pub fn noisy_record(
    config: &CampaignConfig,
    beam: &SimulatedBeam,
    noise_level: f64,
    run: usize,
) -> Result<(MultiChannelRecord, SnrReport)> {
    let spec = NoiseSpec::new(noise_level, noise_seed(config.master_seed, beam.spec.support, noise_level, run))?;
    corrupt(&beam.record, &spec)
}

fn outcome(method: Method, identified: Result<IdentifiedModeSet>, beam: &SimulatedBeam, config: &CampaignConfig) -> MethodOutcome {
    let paired = identified.and_then(|set| {
        let pairing = pair_to_reference(&set, &beam.reference, &config.identifiers.pairing)?;
        Ok((set, pairing))
    });
    match paired {
        Ok((set, pairing)) => MethodOutcome {
            method,
            frequencies: set.frequencies(),
            paired_shapes: pairing
                .entries
                .iter()
                .map(|e| e.identified_index.map(|i| set.modes[i].shape.clone()))
                .collect(),
            pairing: Some(pairing),
            error: None,
        },
        Err(e) => MethodOutcome {
            method,
            frequencies: Vec::new(),
            pairing: None,
            paired_shapes: vec![None; beam.reference.n_modes()],
            error: Some(e.to_string()),
        },
    }
}

/// Corrupt, identify and score one run against an already simulated beam.
pub fn run_prepared(config: &CampaignConfig, beam: &SimulatedBeam, noise_level: f64, run: usize) -> Result<RunResult> {
    let (record, report) = noisy_record(config, beam, noise_level, run)?;
    let ids = &config.identifiers;
    let mut shared = None;
    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let identified = match method {
            Method::Pp | Method::Fdd => {
                let estimator = if method == Method::Pp { ids.pp.estimator } else { ids.fdd.estimator };
                if shared.as_ref().is_none_or(|(e, _)| *e != estimator) {
                    shared = Some((estimator, csd_matrix(&record, &estimator)));
                }
                match &shared.as_ref().unwrap().1 {
                    Ok(spectra) if method == Method::Pp => pp_from_spectra(spectra, &ids.pp),
                    Ok(spectra) => fdd_from_spectra(spectra, &ids.fdd),
                    Err(e) => Err(OmaError::Numerical(e.to_string())),
                }
            }
            Method::Ssi => ssi_identify(&record, &ids.ssi),
        };
        methods.push(outcome(method, identified, beam, config));
    }
    Ok(RunResult {
        beam: beam.spec.support,
        noise_level,
        run,
        realized_snr_db: report.realized_snr_db(),
        methods,
    })
}

/// One simulate, corrupt, identify and score pass, from the configuration alone.
pub fn run_single(config: &CampaignConfig, support: SupportCondition, noise_level: f64, run: usize) -> Result<RunResult> {
    config.validate()?;
    let spec = config
        .beam(support)
        .ok_or_else(|| OmaError::InvalidParameter(format!("beam {support} is not part of the campaign")))?;
    let beam = simulate_beam(spec, config.master_seed)?;
    run_prepared(config, &beam, noise_level, run)
}
