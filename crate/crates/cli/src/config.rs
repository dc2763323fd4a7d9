//! JSON run configuration. Flags override file values; unknown keys
//! are rejected so that experiment manifests stay trustworthy.

use serde::Deserialize;
use tanner_core::rdsim::{ClassifierTolerances, FieldIc, IcSpec, Perturbation};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub params: ParamSection,
    /// Domain-scale search window for coincidence hunting.
    pub l_window: Option<[f64; 2]>,
    pub diagram: Option<DiagramSection>,
    pub sim: Option<SimSection>,
    #[serde(default)]
    pub classifier: Option<ClassifierTolerances>,
    pub sweep: Option<SweepSection>,
    pub classify: Option<ClassifySection>,
    pub alpha: Option<[f64; 2]>,
    pub integrality_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSection {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub r: Option<f64>,
    pub l: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSection {
    pub r_min: f64,
    pub r_max: f64,
    pub l_min: f64,
    pub l_max: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    256
}

/// Initial-condition field spec whose base defaults to the coexistence
/// equilibrium.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldIcSection {
    pub base: Option<f64>,
    #[serde(default)]
    pub terms: Vec<Perturbation>,
}

impl FieldIcSection {
    pub fn resolve(&self, equilibrium: f64) -> FieldIc {
        FieldIc {
            base: self.base.unwrap_or(equilibrium),
            terms: self.terms.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcSection {
    #[serde(default)]
    pub u: FieldIcSection,
    #[serde(default)]
    pub v: FieldIcSection,
}

impl IcSection {
    pub fn resolve(&self, equilibrium: f64) -> IcSpec {
        IcSpec {
            u: self.u.resolve(equilibrium),
            v: self.v.resolve(equilibrium),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub save_stride: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default)]
    pub ic: IcSection,
    #[serde(default)]
    pub probes: Vec<f64>,
    #[serde(default = "default_modes")]
    pub n_modes: usize,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            t_end: default_t_end(),
            save_stride: default_stride(),
            m: default_m(),
            ic: IcSection::default(),
            probes: Vec::new(),
            n_modes: default_modes(),
        }
    }
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t_end() -> f64 {
    5000.0
}

fn default_stride() -> usize {
    1000
}

fn default_m() -> usize {
    128
}

fn default_modes() -> usize {
    16
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledIc {
    pub label: String,
    pub ic: IcSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Parameter offsets from the located critical point.
    pub points: Vec<[f64; 2]>,
    pub ics: Vec<LabeledIc>,
    #[serde(default)]
    pub sim: SimSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    pub run_dir: String,
}

impl Config {
    pub fn load(path: &str) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        serde_json::from_str(&text).map_err(|e| format!("config {path}: {e}"))
    }
}
