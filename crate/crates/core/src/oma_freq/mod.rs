//! Frequency-domain output-only identification: peak picking on the
//! averaged normalized PSD and frequency domain decomposition of the
//! cross-spectral matrix.

mod fdd;
mod peaks;
mod pp;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{OmaError, Result};

pub use fdd::{fdd_from_spectra, fdd_identify, first_singular_values, singular_value_curves, FddOptions};
pub use peaks::{pick_peaks, Peak, PeakOptions};
pub use pp::{anpsd, pp_from_spectra, pp_identify, Anpsd, PpOptions};

/// Identification method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pp,
    Fdd,
    Ssi,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Pp, Method::Fdd, Method::Ssi];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Pp => "PP",
            Method::Fdd => "FDD",
            Method::Ssi => "SSI",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = OmaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pp" => Ok(Method::Pp),
            "fdd" => Ok(Method::Fdd),
            "ssi" | "ssi-data" => Ok(Method::Ssi),
            other => Err(OmaError::InvalidParameter(format!("unknown method '{other}' (expected pp, fdd or ssi)"))),
        }
    }
}

/// One identified mode. Shapes are real with the largest-magnitude entry +1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiedMode {
    pub frequency: f64,
    pub shape: Vec<f64>,
    pub damping: Option<f64>,
    /// Method-specific strength: spectral peak height, or stable-pole count.
    pub quality: Option<f64>,
}

impl IdentifiedMode {
    pub fn new(frequency: f64, shape: Vec<f64>) -> Self {
        IdentifiedMode {
            frequency,
            shape,
            damping: None,
            quality: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiedModeSet {
    pub method: Method,
    pub modes: Vec<IdentifiedMode>,
    /// Non-fatal problems met during identification.
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl IdentifiedModeSet {
    /// Builds the set with modes sorted by ascending frequency.
    pub fn new(method: Method, mut modes: Vec<IdentifiedMode>) -> Self {
        modes.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
        IdentifiedModeSet {
            method,
            modes,
            diagnostics: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.frequency).collect()
    }
}

/// A real-valued curve on a uniform frequency grid starting at 0 Hz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve {
    pub resolution: f64,
    pub values: Vec<f64>,
}

impl SpectrumCurve {
    pub fn new(resolution: f64, values: Vec<f64>) -> Self {
        SpectrumCurve { resolution, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn frequency(&self, line: usize) -> f64 {
        line as f64 * self.resolution
    }

    /// Rectangle-rule integral over the whole grid.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.resolution
    }

    /// CSV with header `frequency_hz,value`.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "frequency_hz,value")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(writer, "{},{}", self.frequency(k), v)?;
        }
        Ok(())
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(file)
    }
}
