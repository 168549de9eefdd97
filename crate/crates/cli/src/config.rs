//! Experiment configuration files.
//!
//! ```json
//! {
//!   "problems": ["inst_a.json"],
//!   "setting": "standard",
//!   "deltas": [0.1],
//!   "t": [2, "inf"],
//!   "bounds": ["avg-mi", "sd-moment"]
//! }
//! ```
//!
//! Problem paths are resolved against the directory of the config file.

use std::fmt;
use std::path::{Path, PathBuf};

use infodens::bounds::{BoundId, BoundSpec, Gamma, Setting};
use infodens::models::Problem;
use infodens::Order;
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SettingDoc {
    #[default]
    Standard,
    Subset,
}

impl SettingDoc {
    pub fn setting(self) -> Setting {
        match self {
            SettingDoc::Standard => Setting::Standard,
            SettingDoc::Subset => Setting::Subset,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SettingDoc::Standard => "standard",
            SettingDoc::Subset => "subset",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDoc {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ExpInequality,
    Coverage,
    Chain,
    Ordering,
    GapIdentity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::ExpInequality,
        Suite::Coverage,
        Suite::Chain,
        Suite::Ordering,
        Suite::GapIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::ExpInequality => "exp-inequality",
            Suite::Coverage => "coverage",
            Suite::Chain => "chain",
            Suite::Ordering => "ordering",
            Suite::GapIdentity => "gap-identity",
        }
    }
}

/// Deliberately understated constants, used to check that the
/// exponential-inequality suite catches a wrong sub-Gaussian parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Use `σ/4` in the standard-setting check.
    SigmaQuarter,
    /// Use `C/4` in the random-subset check.
    CQuarter,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    /// Random instances per setting for every suite except the
    /// exponential inequalities.
    #[serde(default = "default_instances")]
    pub instances: u64,
    /// Random instances per setting for the exponential inequalities.
    #[serde(default = "default_exp_instances")]
    pub exp_instances: u64,
    #[serde(default)]
    pub fault: Option<Fault>,
}

impl Default for VerifyDoc {
    fn default() -> Self {
        Self {
            suites: all_suites(),
            instances: default_instances(),
            exp_instances: default_exp_instances(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Delta,
    T,
    Alpha,
    Beta,
    N,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Delta => "delta",
            Axis::T => "t",
            Axis::Alpha => "alpha",
            Axis::Beta => "beta",
            Axis::N => "n",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub axis: Axis,
    pub values: Vec<AxisValue>,
}

/// A sweep coordinate: a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisValue(pub f64);

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<'de> Deserialize<'de> for AxisValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(AxisValue(x)),
            Raw::Str(s) if s == "inf" => Ok(AxisValue(f64::INFINITY)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "sweep values must be numbers or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(f64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDoc(pub Gamma);

impl<'de> Deserialize<'de> for GammaDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(g) => Ok(GammaDoc(Gamma::Fixed(g))),
            Raw::Str(s) if s == "auto" => Ok(GammaDoc(Gamma::Auto)),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "gamma must be a number or \"auto\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub problems: Vec<PathBuf>,
    #[serde(default)]
    pub setting: SettingDoc,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_t")]
    pub t: Vec<Order>,
    #[serde(default = "default_alpha")]
    pub alpha: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: Vec<GammaDoc>,
    /// Bound names, optionally prefixed by `gen:`. Absent means every bound
    /// of the setting, with the composed `gen:` variants.
    #[serde(default)]
    pub bounds: Option<Vec<String>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputDoc,
    #[serde(default)]
    pub verify: VerifyDoc,
    #[serde(default)]
    pub sweep: Option<SweepDoc>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

fn default_instances() -> u64 {
    50
}

fn default_exp_instances() -> u64 {
    200
}

fn default_deltas() -> Vec<f64> {
    vec![0.3, 0.1, 0.05]
}

fn default_t() -> Vec<Order> {
    vec![Order::Finite(2.0)]
}

fn default_alpha() -> Vec<f64> {
    vec![2.0]
}

fn default_gamma() -> Vec<GammaDoc> {
    vec![GammaDoc(Gamma::Auto)]
}

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.deltas.is_empty()
            || self.t.is_empty()
            || self.alpha.is_empty()
            || self.gamma.is_empty()
        {
            return Err(config_error("parameter grids must be nonempty"));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
            return Err(config_error(format!("delta {d} is outside (0, 1)")));
        }
        for t in &self.t {
            t.check().map_err(|e| config_error(e.to_string()))?;
        }
        if let Some(a) = self.alpha.iter().find(|a| !(**a > 1.0 && a.is_finite())) {
            return Err(config_error(format!("alpha {a} must be finite and > 1")));
        }
        if let Some(GammaDoc(Gamma::Fixed(g))) = self
            .gamma
            .iter()
            .find(|g| matches!(g.0, Gamma::Fixed(v) if !v.is_finite()))
        {
            return Err(config_error(format!("gamma {g} must be finite")));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(config_error("sweep values must be nonempty"));
            }
        }
        self.bound_specs()?;
        Ok(())
    }

    /// Selected bounds, expanded over the parameter grids.
    pub fn bound_specs(&self) -> Result<Vec<BoundSpec>, CliError> {
        let setting = self.setting.setting();
        let base: Vec<BoundSpec> = match &self.bounds {
            None => BoundId::ALL
                .into_iter()
                .filter(|id| id.setting() == setting)
                .flat_map(|id| {
                    let spec = BoundSpec::new(id);
                    std::iter::once(spec).chain(spec.to_gen().ok())
                })
                .collect(),
            Some(names) if names.is_empty() => {
                return Err(config_error("bound selection is empty"));
            }
            Some(names) => names
                .iter()
                .map(|n| {
                    n.parse::<BoundSpec>()
                        .map_err(|e| config_error(e.to_string()))
                })
                .collect::<Result<_, _>>()?,
        };
        if let Some(b) = base.iter().find(|b| b.id.setting() != setting) {
            return Err(config_error(format!(
                "bound {} does not belong to the {} setting",
                b.label(),
                self.setting.as_str()
            )));
        }
        Ok(self.expand(&base))
    }

    /// Expands each spec over the `t`, `α` and `γ` grids it reads.
    pub fn expand(&self, base: &[BoundSpec]) -> Vec<BoundSpec> {
        let mut out = Vec::new();
        for &spec in base {
            let ts: Vec<Order> = if spec.id.uses_t() {
                self.t.clone()
            } else {
                vec![spec.t]
            };
            let alphas: Vec<f64> = if spec.id.uses_alpha() {
                self.alpha.clone()
            } else {
                vec![spec.alpha]
            };
            let gammas: Vec<Gamma> = if spec.id.uses_gamma() {
                self.gamma.iter().map(|g| g.0).collect()
            } else {
                vec![spec.gamma]
            };
            for &t in &ts {
                for &a in &alphas {
                    for &g in &gammas {
                        out.push(spec.with_t(t).with_alpha(a).with_gamma(g));
                    }
                }
            }
        }
        out
    }

    pub fn problem_paths(&self) -> Vec<PathBuf> {
        self.problems
            .iter()
            .map(|p| self.base_dir.join(p))
            .collect()
    }

    pub fn load_problems(&self) -> Result<Vec<(String, Problem)>, CliError> {
        self.problem_paths()
            .into_iter()
            .map(|p| {
                let problem = Problem::from_path(&p)
                    .map_err(|e| config_error(format!("{}: {e}", p.display())))?;
                let name = problem.name.clone().unwrap_or_else(|| {
                    p.file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default()
                });
                Ok((name, problem))
            })
            .collect()
    }
}
