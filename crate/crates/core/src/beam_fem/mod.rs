//! Planar Euler-Bernoulli beam models.
//!
//! Two-node Hermite-cubic elements with consistent mass, four support
//! conditions, a generalized symmetric eigen solver for the reference modes,
//! closed-form continuous-beam frequencies and a modal-superposition transient
//! solver with uniform modal damping.

mod analytical;
mod assembly;
mod element;
mod modal;
mod transient;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::{OmaError, Result};

pub use analytical::{analytical_frequencies, characteristic_roots, recording_duration};
pub use assembly::{assemble_model, Channel, GlobalSystem, NodeDofs};
pub use element::element_matrices;
pub use modal::{modal_analysis, ModalSolution};
pub use transient::{modal_response, transient_response, ModalHistory, SdofRecurrence, SdofState};

/// Default uniform modal damping ratio.
pub const DEFAULT_DAMPING_RATIO: f64 = 0.025;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Pa
    pub elastic_modulus: f64,
    /// kg/m^3
    pub mass_density: f64,
    pub poisson_ratio: f64,
}

impl Material {
    pub fn new(elastic_modulus: f64, mass_density: f64, poisson_ratio: f64) -> Result<Self> {
        let material = Material {
            elastic_modulus,
            mass_density,
            poisson_ratio,
        };
        material.validate()?;
        Ok(material)
    }

    /// Structural steel: E = 200 GPa, 7850 kg/m^3, nu = 0.3.
    pub fn steel() -> Self {
        Material {
            elastic_modulus: 2.0e11,
            mass_density: 7850.0,
            poisson_ratio: 0.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.elastic_modulus > 0.0 && self.elastic_modulus.is_finite()) {
            return Err(OmaError::InvalidParameter(format!(
                "elastic modulus must be positive, got {}",
                self.elastic_modulus
            )));
        }
        if !(self.mass_density > 0.0 && self.mass_density.is_finite()) {
            return Err(OmaError::InvalidParameter(format!(
                "mass density must be positive, got {}",
                self.mass_density
            )));
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(OmaError::InvalidParameter(format!(
                "Poisson ratio must lie in (0, 0.5), got {}",
                self.poisson_ratio
            )));
        }
        Ok(())
    }
}

/// Solid rectangular cross-section, bending about the width axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSection {
    pub width: f64,
    pub height: f64,
}

impl BeamSection {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        let section = BeamSection { width, height };
        section.validate()?;
        Ok(section)
    }

    pub fn square(side: f64) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite()) {
            return Err(OmaError::InvalidParameter(format!(
                "section dimensions must be positive, got {} x {}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn second_moment(&self) -> f64 {
        self.width * self.height.powi(3) / 12.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SupportCondition {
    /// Clamped at x = 0, free at x = L.
    CF,
    /// Pinned at both ends.
    SS,
    /// Clamped at x = 0, pinned at x = L.
    CS,
    /// Clamped at both ends.
    CC,
}

impl SupportCondition {
    pub const ALL: [SupportCondition; 4] = [
        SupportCondition::CF,
        SupportCondition::SS,
        SupportCondition::CS,
        SupportCondition::CC,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SupportCondition::CF => "CF",
            SupportCondition::SS => "SS",
            SupportCondition::CS => "CS",
            SupportCondition::CC => "CC",
        }
    }
}

impl fmt::Display for SupportCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SupportCondition {
    type Err = OmaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CF" => Ok(SupportCondition::CF),
            "SS" => Ok(SupportCondition::SS),
            "CS" => Ok(SupportCondition::CS),
            "CC" => Ok(SupportCondition::CC),
            other => Err(OmaError::InvalidParameter(format!(
                "unknown support condition '{other}' (expected CF, SS, CS or CC)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamModel {
    pub material: Material,
    pub section: BeamSection,
    /// m
    pub span_length: f64,
    pub n_elements: usize,
    pub support: SupportCondition,
}

impl BeamModel {
    pub fn new(
        material: Material,
        section: BeamSection,
        span_length: f64,
        n_elements: usize,
        support: SupportCondition,
    ) -> Result<Self> {
        let model = BeamModel {
            material,
            section,
            span_length,
            n_elements,
            support,
        };
        model.validate()?;
        Ok(model)
    }

    /// 1 m steel beam, 10 x 10 mm section, ten 100 mm elements.
    pub fn reference(support: SupportCondition) -> Self {
        BeamModel {
            material: Material::steel(),
            section: BeamSection {
                width: 0.01,
                height: 0.01,
            },
            span_length: 1.0,
            n_elements: 10,
            support,
        }
    }

    pub fn with_elements(mut self, n_elements: usize) -> Self {
        self.n_elements = n_elements;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.section.validate()?;
        if !(self.span_length > 0.0 && self.span_length.is_finite()) {
            return Err(OmaError::InvalidParameter(format!(
                "span length must be positive, got {}",
                self.span_length
            )));
        }
        if self.n_elements == 0 {
            return Err(OmaError::InvalidParameter("at least one element is required".into()));
        }
        Ok(())
    }

    pub fn element_length(&self) -> f64 {
        self.span_length / self.n_elements as f64
    }

    pub fn flexural_rigidity(&self) -> f64 {
        self.material.elastic_modulus * self.section.second_moment()
    }

    pub fn mass_per_length(&self) -> f64 {
        self.material.mass_density * self.section.area()
    }

    pub fn node_positions(&self) -> Vec<f64> {
        let le = self.element_length();
        (0..=self.n_elements).map(|i| i as f64 * le).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_properties() {
        let s = BeamSection::square(0.01).unwrap();
        assert!((s.area() - 1e-4).abs() < 1e-18);
        let expected = 0.01 * 0.01f64.powi(3) / 12.0;
        assert!(((s.second_moment() - expected) / expected).abs() < 1e-12);
        let rect = BeamSection::new(0.02, 0.005).unwrap();
        assert!(((rect.second_moment() - 0.02 * 0.005f64.powi(3) / 12.0) / rect.second_moment()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Material::new(-1.0, 7850.0, 0.3).is_err());
        assert!(Material::new(2e11, 0.0, 0.3).is_err());
        assert!(Material::new(2e11, 7850.0, 0.5).is_err());
        assert!(Material::new(2e11, 7850.0, 0.0).is_err());
        assert!(BeamSection::new(0.0, 0.01).is_err());
        let model = BeamModel::reference(SupportCondition::CF);
        assert!(model.with_elements(0).validate().is_err());
        assert!(BeamModel { span_length: -1.0, ..model }.validate().is_err());
    }

    #[test]
    fn support_parses_case_insensitively() {
        assert_eq!("cf".parse::<SupportCondition>().unwrap(), SupportCondition::CF);
        assert_eq!("CC".parse::<SupportCondition>().unwrap(), SupportCondition::CC);
        assert!("XX".parse::<SupportCondition>().is_err());
    }

    #[test]
    fn reference_model_flexural_properties() {
        let m = BeamModel::reference(SupportCondition::SS);
        assert!((m.flexural_rigidity() - 166.666_666_666_666_7).abs() < 1e-9);
        assert!((m.mass_per_length() - 0.785).abs() < 1e-12);
        assert!((m.element_length() - 0.1).abs() < 1e-15);
    }
}
