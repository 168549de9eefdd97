//! Per-bound rows with exact ground truth alongside.

use infodens::bounds::{BoundSpec, Flavor, Scope};
use infodens::models::Problem;
use infodens::verify::{
    exact_gen_distribution, exact_gen_hat_distribution, exact_subset_gen_distribution, profile,
    AnySystem, GenDistribution,
};
use infodens::{StandardSystem, SubsetSystem};
use serde::Serialize;

use crate::config::{ExperimentConfig, SettingDoc};
use crate::output::{float, opt_float};
use crate::{CliError, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub schema_version: u32,
    pub problem: String,
    pub setting: &'static str,
    pub bound_id: String,
    pub flavor: &'static str,
    pub scope: &'static str,
    #[serde(serialize_with = "opt_float")]
    pub delta: Option<f64>,
    pub t: Option<String>,
    #[serde(serialize_with = "opt_float")]
    pub alpha: Option<f64>,
    #[serde(serialize_with = "opt_float")]
    pub gamma: Option<f64>,
    #[serde(serialize_with = "opt_float")]
    pub sigma: Option<f64>,
    #[serde(serialize_with = "opt_float")]
    pub range_constant: Option<f64>,
    pub n: usize,
    /// The bound; for data-dependent bounds, its mean over feasible
    /// outcomes. `inf` when nowhere feasible.
    #[serde(serialize_with = "float")]
    pub epsilon: f64,
    pub feasible: bool,
    #[serde(serialize_with = "float")]
    pub infeasible_prob: f64,
    /// Exact probability that the bound fails.
    #[serde(serialize_with = "float")]
    pub violation_prob: f64,
    #[serde(serialize_with = "float")]
    pub abs_expected_gen: f64,
    /// Exact `(1 − δ)`-quantile of the controlled `|gen|` or `|ĝen|`.
    #[serde(serialize_with = "opt_float")]
    pub truth_quantile: Option<f64>,
    pub reason: Option<String>,
}

/// An assembled system in either setting.
pub enum System {
    Standard(StandardSystem),
    Subset(SubsetSystem),
}

impl System {
    pub fn build(problem: &Problem, setting: SettingDoc) -> Result<Self, CliError> {
        Ok(match setting {
            SettingDoc::Standard => System::Standard(problem.standard()?),
            SettingDoc::Subset => System::Subset(problem.subset()?),
        })
    }

    pub fn any(&self) -> AnySystem<'_> {
        match self {
            System::Standard(s) => AnySystem::Standard(s),
            System::Subset(s) => AnySystem::Subset(s),
        }
    }
}

struct Truth {
    abs_expected_gen: f64,
    /// `|gen|` in the standard setting, `|ĝen|` in the subset setting.
    primary: GenDistribution,
    /// `|gen(W, Z(S))|` in the subset setting.
    subset_gen: Option<GenDistribution>,
}

impl Truth {
    fn of(sys: &System) -> Self {
        match sys {
            System::Standard(s) => Truth {
                abs_expected_gen: s.expected_gen().abs(),
                primary: exact_gen_distribution(s).abs(),
                subset_gen: None,
            },
            System::Subset(s) => Truth {
                abs_expected_gen: s.expected_gen().abs(),
                primary: exact_gen_hat_distribution(s).abs(),
                subset_gen: Some(exact_subset_gen_distribution(s).abs()),
            },
        }
    }

    fn quantile(&self, spec: &BoundSpec, delta: f64) -> f64 {
        let d = match (&self.subset_gen, spec.to_gen) {
            (Some(g), true) => g,
            _ => &self.primary,
        };
        d.quantile(1.0 - delta)
    }
}

/// Rows for every selected bound on one system. Average bounds get a
/// single row; probabilistic bounds get one row per `δ`.
pub fn system_rows(
    name: &str,
    sys: &System,
    setting: SettingDoc,
    specs: &[BoundSpec],
    deltas: &[f64],
) -> Result<Vec<ReportRow>, CliError> {
    let truth = Truth::of(sys);
    let mut rows = Vec::new();
    for spec in specs {
        let grid: Vec<Option<f64>> = if spec.id.is_probabilistic() {
            deltas.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for delta in grid {
            let p = profile(sys.any(), spec, delta.unwrap_or(0.5))?;
            let r = &p.template;
            let (epsilon, feasible) = match r.scope {
                Scope::DataDependent => (
                    p.mean_epsilon().unwrap_or(f64::INFINITY),
                    p.infeasible_prob() == 0.0,
                ),
                Scope::DataIndependent => (r.value(), r.feasible),
            };
            rows.push(ReportRow {
                schema_version: SCHEMA_VERSION,
                problem: name.to_string(),
                setting: setting.as_str(),
                bound_id: spec.label(),
                flavor: r.flavor.as_str(),
                scope: r.scope.as_str(),
                delta,
                t: r.params.t.map(|t| t.to_string()),
                alpha: r.params.alpha,
                gamma: r.params.gamma,
                sigma: r.params.sigma,
                range_constant: r.params.range_constant,
                n: r.params.n,
                epsilon,
                feasible,
                infeasible_prob: p.infeasible_prob(),
                violation_prob: p.violation_prob(),
                abs_expected_gen: truth.abs_expected_gen,
                truth_quantile: (r.flavor != Flavor::Average)
                    .then(|| truth.quantile(spec, delta.unwrap_or(0.5))),
                reason: r.reason.clone(),
            });
        }
    }
    Ok(rows)
}

pub fn report_rows(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>, CliError> {
    let problems = cfg.load_problems()?;
    if problems.is_empty() {
        return Err(CliError::Config("no problems given".into()));
    }
    let specs = cfg.bound_specs()?;
    let mut rows = Vec::new();
    for (name, problem) in &problems {
        let sys = System::build(problem, cfg.setting)?;
        rows.extend(system_rows(name, &sys, cfg.setting, &specs, &cfg.deltas)?);
    }
    Ok(rows)
}
