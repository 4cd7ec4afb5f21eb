//! JSON configuration for a composite-reflection run.
//!
//! ```json
//! {
//!   "couplings": [1.0, 2.0, 0.5],
//!   "coupling_phases": [0.0, 0.5, -0.25],
//!   "shape": { "kind": "rectangular" },
//!   "detuning": 0.0,
//!   "hr_phase": 1.0,
//!   "family": "bb",
//!   "n": 3
//! }
//! ```
//!
//! `coupling_phases`, `hr_phase` and `area` are in units of π.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::composite::{Family, PhaseList};
use crate::error::Result;
use crate::npod::{HouseholderTarget, NPodSystem};
use crate::two_level::{PulseShape, DEFAULT_SUBSTEPS};

fn default_family() -> Family {
    Family::Bb
}
fn default_n() -> usize {
    3
}
fn default_variant() -> u32 {
    1
}
fn default_area() -> f64 {
    1.0
}
fn default_substeps() -> usize {
    DEFAULT_SUBSTEPS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HrConfig {
    pub couplings: Vec<f64>,
    /// Defaults to all zeros.
    #[serde(default)]
    pub coupling_phases: Vec<f64>,
    #[serde(default)]
    pub shape: PulseShape,
    #[serde(default)]
    pub detuning: f64,
    pub hr_phase: f64,
    #[serde(default = "default_family")]
    pub family: Family,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_variant")]
    pub variant: u32,
    /// Per-pulse rms area.
    #[serde(default = "default_area")]
    pub area: f64,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
}

impl HrConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text)?;
        if cfg.coupling_phases.is_empty() {
            cfg.coupling_phases = vec![0.0; cfg.couplings.len()];
        }
        cfg.system()?;
        cfg.phase_list()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Config describing `sys` and `target`'s phase; remaining fields default.
    pub fn from_parts(sys: &NPodSystem, target: &HouseholderTarget) -> Self {
        Self {
            couplings: sys.couplings.clone(),
            coupling_phases: sys.coupling_phases.iter().map(|b| b / PI).collect(),
            shape: sys.shape.clone(),
            detuning: sys.detuning,
            hr_phase: target.hr_phase / PI,
            family: default_family(),
            n: default_n(),
            variant: default_variant(),
            area: default_area(),
            substeps: default_substeps(),
        }
    }

    pub fn system(&self) -> Result<NPodSystem> {
        NPodSystem::new(
            self.couplings.clone(),
            self.coupling_phases.iter().map(|b| b * PI).collect(),
            self.shape.clone(),
            self.detuning,
        )
    }

    pub fn target(&self) -> Result<HouseholderTarget> {
        HouseholderTarget::new(self.system()?.bright_vector(), self.hr_phase * PI)
    }

    pub fn phase_list(&self) -> Result<PhaseList> {
        PhaseList::new(self.family, self.n, self.variant)
    }
}
