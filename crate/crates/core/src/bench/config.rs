use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BeamSpec;
use crate::beam_fem::SupportCondition;
use crate::modal_metrics::PairingOptions;
use crate::noise_model::DEFAULT_NOISE_LEVELS;
use crate::oma_freq::{FddOptions, Method, PeakOptions, PpOptions};
use crate::oma_ssi::SsiOptions;
use crate::{OmaError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Master seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Runs per noise level in the desk-scale campaign.
pub const DEFAULT_RUNS: usize = 20;

/// Runs per noise level in the full campaign.
pub const FULL_RUNS: usize = 100;

/// Option blocks for the three identifiers and the pairing step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdentifierOptions {
    pub pp: PpOptions,
    pub fdd: FddOptions,
    pub ssi: SsiOptions,
    pub pairing: PairingOptions,
}

impl Default for IdentifierOptions {
    fn default() -> Self {
        let peaks = PeakOptions {
            band: Some(BeamSpec::default().force_band),
            ..Default::default()
        };
        IdentifierOptions {
            pp: PpOptions {
                peaks,
                ..Default::default()
            },
            fdd: FddOptions {
                peaks,
                ..Default::default()
            },
            ssi: SsiOptions::default(),
            pairing: PairingOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignConfig {
    pub schema_version: u32,
    pub beams: Vec<BeamSpec>,
    pub noise_levels: Vec<f64>,
    pub runs: usize,
    pub methods: Vec<Method>,
    pub master_seed: u64,
    pub identifiers: IdentifierOptions,
    /// Where tables are written; the command line may override it.
    pub output_dir: Option<String>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            schema_version: SCHEMA_VERSION,
            beams: SupportCondition::ALL.iter().map(|&s| BeamSpec::new(s)).collect(),
            noise_levels: DEFAULT_NOISE_LEVELS.to_vec(),
            runs: DEFAULT_RUNS,
            methods: Method::ALL.to_vec(),
            master_seed: DEFAULT_SEED,
            identifiers: IdentifierOptions::default(),
            output_dir: None,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(OmaError::InvalidParameter(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.beams.is_empty() || self.methods.is_empty() {
            return Err(OmaError::InvalidParameter("at least one beam and one method are required".into()));
        }
        if self.runs == 0 {
            return Err(OmaError::InvalidParameter("runs must be at least 1".into()));
        }
        if self.noise_levels.is_empty() {
            return Err(OmaError::InvalidParameter("at least one noise level is required".into()));
        }
        if let Some(bad) = self.noise_levels.iter().find(|nl| !(**nl >= 0.0 && nl.is_finite())) {
            return Err(OmaError::InvalidParameter(format!("noise level {bad} must be finite and >= 0")));
        }
        let mut supports: Vec<_> = self.beams.iter().map(|b| b.support).collect();
        supports.sort();
        supports.dedup();
        if supports.len() != self.beams.len() {
            return Err(OmaError::InvalidParameter("each support condition may appear only once".into()));
        }
        for beam in &self.beams {
            beam.validate()?;
        }
        self.identifiers.pp.peaks.validate()?;
        self.identifiers.fdd.peaks.validate()?;
        self.identifiers.ssi.hankel.validate()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: CampaignConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Pretty JSON with every default spelled out.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn beam(&self, support: SupportCondition) -> Option<&BeamSpec> {
        self.beams.iter().find(|b| b.support == support)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = CampaignConfig::default();
        c.validate().unwrap();
        let back = CampaignConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c = CampaignConfig::from_json(r#"{"schema_version": 1, "runs": 3, "methods": ["pp"]}"#).unwrap();
        assert_eq!(c.runs, 3);
        assert_eq!(c.methods, vec![Method::Pp]);
        assert_eq!(c.beams.len(), 4);
        assert_eq!(c.noise_levels.len(), 7);
    }

    #[test]
    fn invalid_configs() {
        for text in [
            r#"{"schema_version": 2}"#,
            r#"{"runs": 0}"#,
            r#"{"methods": []}"#,
            r#"{"noise_levels": [-0.1]}"#,
            r#"{"beams": [{"support": "CF"}, {"support": "CF"}]}"#,
            r#"{"bogus": 1"#,
        ] {
            assert!(CampaignConfig::from_json(text).is_err(), "{text}");
        }
    }
}
