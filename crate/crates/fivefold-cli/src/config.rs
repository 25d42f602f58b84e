//! Scenario configuration: TOML (or JSON) with every section optional and unknown keys rejected.

use std::path::Path;

use fivefold::curvature::CommutatorConvention;
use fivefold::electro::Branch;
use fivefold::gravity::Constants;
use fivefold::lattice::MetricPreset;
use serde::{Deserialize, Serialize};

use crate::suites::SUITES;

/// Configuration problems; always mapped to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<fivefold::Error> for ConfigError {
    fn from(e: fivefold::Error) -> Self {
        ConfigError(e.to_string())
    }
}

/// Full scenario description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Seed for every random field and sample.
    pub seed: u64,
    /// Suites to run; `None` runs all of them, an empty list runs nothing.
    pub suites: Option<Vec<String>>,
    /// Random instances for the pointwise algebraic checks.
    pub samples: usize,
    pub grid: GridConfig,
    pub metric: MetricConfig,
    pub torsion: TorsionConfig,
    pub constants: ConstantsConfig,
    pub conventions: ConventionConfig,
    pub evolution: EvolutionConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 7,
            suites: None,
            samples: 1000,
            grid: GridConfig::default(),
            metric: MetricConfig::default(),
            torsion: TorsionConfig::default(),
            constants: ConstantsConfig::default(),
            conventions: ConventionConfig::default(),
            evolution: EvolutionConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Refinement ladder. Lattices are periodic `(n, n, t, t)` tori of side `2π`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Points `n` along the two refined axes, one entry per level.
    pub levels: Vec<usize>,
    /// Points `t` along the two remaining axes.
    pub transverse: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            levels: vec![16, 32, 64],
            transverse: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct MetricConfig {
    /// `flat`, `conformal` or `diagonal-wave`.
    pub preset: String,
    pub amplitude: f64,
    pub wave: [f64; 4],
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            preset: "conformal".into(),
            amplitude: 0.1,
            wave: [1.0, 1.0, 0.0, 0.0],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct TorsionConfig {
    /// `zero`, `constant` or `trig`.
    pub preset: String,
    pub amplitude: f64,
}

impl Default for TorsionConfig {
    fn default() -> Self {
        TorsionConfig {
            preset: "trig".into(),
            amplitude: 0.1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub kappa: f64,
    pub k: f64,
    pub varrho: f64,
    pub omega: f64,
    pub xi_sign: i8,
    pub epsilon_sign: i8,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            kappa: 1.0,
            k: 1.0,
            varrho: 0.8,
            omega: 0.0,
            xi_sign: 1,
            epsilon_sign: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ConventionConfig {
    /// Bivector-field commutator used by the Jacobi and Bianchi checks.
    pub commutator: String,
    /// Convention under which the printed 𝒵𝒵 curvature block is expected.
    pub printed_zz_block: String,
}

impl Default for ConventionConfig {
    fn default() -> Self {
        ConventionConfig {
            commutator: "halved".into(),
            printed_zz_block: "corrected".into(),
        }
    }
}

/// 1+1D evolver scenario.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionConfig {
    /// `photon`, `massive` or `kaluza-klein`.
    pub branch: String,
    /// Wave number along the evolved axis (an integer keeps the wave periodic).
    pub wavenumber: f64,
    pub points: usize,
    pub dt: f64,
    pub steps: usize,
    /// Keep every `every`-th state.
    pub every: usize,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            branch: "massive".into(),
            wavenumber: 0.0,
            points: 256,
            dt: 0.005,
            steps: 6000,
            every: 1,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Directory for `report.json` and `report.csv`; overridden by `--out`.
    pub dir: Option<String>,
}

/// Torsion field family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TorsionPreset {
    Zero,
    Constant(f64),
    Trig(f64),
}

/// Validated view of a [`ScenarioConfig`].
#[derive(Clone, Debug)]
pub struct Settings {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<String>,
    pub levels: Vec<usize>,
    pub transverse: usize,
    pub metric: MetricPreset<f64>,
    pub torsion: TorsionPreset,
    pub constants: Constants<f64>,
    pub commutator: CommutatorConvention,
    pub printed_zz_block: CommutatorConvention,
    pub evolution: EvolutionConfig,
    pub evolution_branch: Branch,
}

impl ScenarioConfig {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| ConfigError(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| ConfigError(e.to_string()))
        }
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Checks every field and resolves names.
    pub fn settings(&self) -> Result<Settings, ConfigError> {
        let suites = match &self.suites {
            None => SUITES.iter().map(|s| s.to_string()).collect(),
            Some(list) => list.clone(),
        };
        for s in &suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(ConfigError(format!("unknown suite '{s}'")));
            }
        }
        let g = &self.grid;
        if g.levels.is_empty() {
            return Err(ConfigError("grid.levels must not be empty".into()));
        }
        if g.levels.iter().chain([&g.transverse]).any(|&n| n < 5) {
            return Err(ConfigError(
                "every grid axis needs at least 5 points".into(),
            ));
        }
        if g.levels.windows(2).any(|w| w[1] != 2 * w[0]) {
            return Err(ConfigError(
                "grid.levels must double from level to level".into(),
            ));
        }
        let m = &self.metric;
        let metric = MetricPreset::from_name(&m.preset, m.amplitude, m.wave)?;
        let t = &self.torsion;
        if !t.amplitude.is_finite() || t.amplitude < 0.0 {
            return Err(ConfigError(
                "torsion.amplitude must be finite and non-negative".into(),
            ));
        }
        let torsion = match t.preset.as_str() {
            "zero" => TorsionPreset::Zero,
            "constant" => TorsionPreset::Constant(t.amplitude),
            "trig" => TorsionPreset::Trig(t.amplitude),
            other => return Err(ConfigError(format!("unknown torsion preset '{other}'"))),
        };
        let c = &self.constants;
        let constants = Constants::new(c.k, c.kappa, c.varrho, c.epsilon_sign, c.omega, c.xi_sign)?;
        let e = &self.evolution;
        let evolution_branch = Branch::from_name(&e.branch)?;
        if e.points < 8 || e.steps == 0 || e.every == 0 || !(e.dt > 0.0) {
            return Err(ConfigError(
                "evolution needs points >= 8, steps > 0, every > 0 and dt > 0".into(),
            ));
        }
        if self.samples == 0 {
            return Err(ConfigError("samples must be positive".into()));
        }
        Ok(Settings {
            seed: self.seed,
            samples: self.samples,
            suites,
            levels: g.levels.clone(),
            transverse: g.transverse,
            metric,
            torsion,
            constants,
            commutator: CommutatorConvention::from_name(&self.conventions.commutator)?,
            printed_zz_block: CommutatorConvention::from_name(&self.conventions.printed_zz_block)?,
            evolution: e.clone(),
            evolution_branch,
        })
    }
}
