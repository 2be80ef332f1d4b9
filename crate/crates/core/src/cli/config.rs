use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bb_synthesis::{SynthesisOptions, TargetSpec};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};
use crate::models;
use crate::open_system::{DensityMatrix, PulseGroup, SystemBathModel};
use crate::optimizer::{CostSettings, LearningLoopConfig};

/// Named model with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum PresetModel {
    Dephasing {
        g: f64,
        #[serde(default = "one")]
        polarization: f64,
    },
    DephasingWithBathDynamics {
        g: f64,
        omega: f64,
        bath_bloch: [f64; 3],
    },
    DephasingBitFlip {
        g: f64,
        g_flip: f64,
        bath_bloch: [f64; 3],
    },
    HeisenbergDephasing {
        j: f64,
        g1: f64,
        g2: f64,
    },
    ZeroNoise {
        #[serde(default = "one_qubit")]
        num_qubits: usize,
    },
}

fn one() -> f64 {
    1.0
}

fn one_qubit() -> usize {
    1
}

impl PresetModel {
    pub fn build(&self) -> Result<SystemBathModel> {
        match *self {
            Self::Dephasing { g, polarization } => models::dephasing(g, polarization),
            Self::DephasingWithBathDynamics { g, omega, bath_bloch } => {
                models::dephasing_with_bath_dynamics(g, omega, bath_bloch)
            }
            Self::DephasingBitFlip { g, g_flip, bath_bloch } => models::dephasing_bit_flip(g, g_flip, bath_bloch),
            Self::HeisenbergDephasing { j, g1, g2 } => models::heisenberg_dephasing(j, g1, g2),
            Self::ZeroNoise { num_qubits } => models::zero_noise(num_qubits),
        }
    }
}

/// A model given by preset, by file, or inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSource {
    Preset(PresetModel),
    File { file: PathBuf },
    Inline(Box<SystemBathModel>),
}

/// A pulse set inline or from a JSON file; synthesis and optimizer
/// outputs are accepted as files too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    File { file: PathBuf },
    Inline(PulseGroup),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupFile {
    Synthesis { group: PulseGroup },
    Outcome { best_group: PulseGroup },
    Plain(PulseGroup),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    /// "plus", "zero" or "mixed" on every qubit.
    Named(String),
    Bloch([f64; 3]),
    Matrix(#[serde(with = "crate::json::complex_matrix")] CMat),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationSettings {
    pub initial_state: InitialState,
    pub duration: f64,
    /// Samples of the free trajectory; ignored when a pulse set is given.
    pub steps: usize,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            initial_state: InitialState::Named("plus".into()),
            duration: 1.0,
            steps: 100,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSettings {
    pub dir: Option<PathBuf>,
}

fn default_target() -> TargetSpec {
    TargetSpec::storage(0)
}

/// One experiment: a model, what to do with it, and where to write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSource,
    #[serde(default = "default_target")]
    pub target: TargetSpec,
    pub probe_time: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub simulation: SimulationSettings,
    #[serde(default)]
    pub synthesis: SynthesisOptions,
    #[serde(default)]
    pub cost: CostSettings,
    #[serde(default, rename = "loop")]
    pub learning: Option<LearningLoopConfig>,
    #[serde(default)]
    pub group: Option<GroupSource>,
    #[serde(default)]
    pub outputs: OutputSettings,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.probe_time.is_finite() && self.probe_time > 0.0) {
            return Err(Error::Config(format!("probe_time must be positive, got {}", self.probe_time)));
        }
        for p in [self.model_file(), self.group_file()].into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::Config(format!("referenced file {} does not exist", p.display())));
            }
        }
        let sim = &self.simulation;
        if sim.duration.is_nan() || sim.duration <= 0.0 || sim.steps == 0 {
            return Err(Error::Config("simulation needs duration > 0 and steps ≥ 1".into()));
        }
        Ok(())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn model_file(&self) -> Option<PathBuf> {
        match &self.model {
            ModelSource::File { file } => Some(self.resolve(file)),
            _ => None,
        }
    }

    fn group_file(&self) -> Option<PathBuf> {
        match &self.group {
            Some(GroupSource::File { file }) => Some(self.resolve(file)),
            _ => None,
        }
    }

    pub fn build_model(&self) -> Result<SystemBathModel> {
        let to_config = |e: Error| Error::Config(format!("model: {e}"));
        match &self.model {
            ModelSource::Preset(p) => p.build().map_err(to_config),
            ModelSource::Inline(m) => Ok((**m).clone()),
            ModelSource::File { .. } => {
                let path = self.model_file().expect("file source");
                crate::json::read_file(&path).map_err(to_config)
            }
        }
    }

    pub fn build_group(&self) -> Result<Option<PulseGroup>> {
        match &self.group {
            None => Ok(None),
            Some(GroupSource::Inline(g)) => Ok(Some(g.clone())),
            Some(GroupSource::File { .. }) => load_group(&self.group_file().expect("file source")).map(Some),
        }
    }

    pub fn initial_state(&self, num_qubits: usize) -> Result<DensityMatrix> {
        let bad = |what: &str| Error::Config(format!("initial_state: {what}"));
        let single = match &self.simulation.initial_state {
            InitialState::Named(name) => match name.as_str() {
                "plus" => return Ok(DensityMatrix::plus(num_qubits)),
                "mixed" => return Ok(DensityMatrix::maximally_mixed(1 << num_qubits)),
                "zero" => {
                    let mut amps = vec![c(0.0, 0.0); 1 << num_qubits];
                    amps[0] = c(1.0, 0.0);
                    return DensityMatrix::from_pure(&amps);
                }
                other => return Err(bad(&format!("unknown state {other:?}"))),
            },
            InitialState::Bloch(r) => DensityMatrix::bloch(*r).map_err(|e| bad(&e.to_string()))?,
            InitialState::Matrix(m) => return DensityMatrix::new(m.clone()).map_err(|e| bad(&e.to_string())),
        };
        let factors: Vec<CMat> = (0..num_qubits).map(|_| single.matrix().clone()).collect();
        DensityMatrix::new(crate::linalg::kron_all(factors.iter()))
    }
}

/// Reads a pulse set from a plain group file, a synthesis result or an
/// optimizer outcome.
pub fn load_group(path: &Path) -> Result<PulseGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed: GroupFile =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: not a pulse set: {e}", path.display())))?;
    Ok(match parsed {
        GroupFile::Synthesis { group } => group,
        GroupFile::Outcome { best_group } => best_group,
        GroupFile::Plain(g) => g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_config_parses() {
        let cfg = ExperimentConfig::from_json(
            r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0.01}"#,
            ".",
        )
        .unwrap();
        assert_eq!(cfg.target, TargetSpec::storage(0));
        assert_eq!(cfg.build_model().unwrap().system_dim(), 2);
    }

    #[test]
    fn validation_errors_are_config_errors() {
        let bad = [
            r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0}"#,
            r#"{"model": {"file": "nowhere.json"}, "probe_time": 0.01}"#,
            r#"{"model": {"preset": "dephasing", "g": 1.0}, "probe_time": 0.01, "extra": 1}"#,
            r#"{"model": "#,
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::from_json(text, "."), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn inline_model_round_trip() {
        let m = models::dephasing(0.5, 0.8).unwrap();
        let text = format!(r#"{{"model": {}, "probe_time": 0.01}}"#, crate::json::to_string(&m).unwrap());
        let cfg = ExperimentConfig::from_json(&text, ".").unwrap();
        assert_eq!(cfg.build_model().unwrap(), m);
    }

    #[test]
    fn product_initial_states() {
        let cfg = ExperimentConfig::from_json(
            r#"{"model": {"preset": "zero_noise", "num_qubits": 2}, "probe_time": 0.01,
                "simulation": {"initial_state": [0, 0, 1]}}"#,
            ".",
        )
        .unwrap();
        let rho = cfg.initial_state(2).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }
}
