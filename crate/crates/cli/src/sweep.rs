//! Long-format sweeps of the bounds along one parameter axis.

use infodens::info::{cond_mutual_information, mutual_information, supersample_mutual_information};
use infodens::models::LearnerSpec;
use infodens::Order;
use serde::Serialize;

use crate::config::{Axis, AxisValue, ExperimentConfig};
use crate::output::{float, opt_float};
use crate::report::{system_rows, System};
use crate::{CliError, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub schema_version: u32,
    pub problem: String,
    pub setting: &'static str,
    pub axis: &'static str,
    pub axis_value: String,
    pub bound_id: String,
    #[serde(serialize_with = "opt_float")]
    pub delta: Option<f64>,
    pub t: Option<String>,
    #[serde(serialize_with = "opt_float")]
    pub alpha: Option<f64>,
    #[serde(serialize_with = "float")]
    pub epsilon: f64,
    pub feasible: bool,
    #[serde(serialize_with = "float")]
    pub abs_expected_gen: f64,
    #[serde(serialize_with = "opt_float")]
    pub truth_quantile: Option<f64>,
    /// `I(W; Z)` in the standard setting.
    #[serde(serialize_with = "opt_float")]
    pub mutual_information: Option<f64>,
    /// `I(W; Z̃)` in the subset setting.
    #[serde(serialize_with = "opt_float")]
    pub supersample_mi: Option<f64>,
    /// `I(W; S | Z̃)` in the subset setting.
    #[serde(serialize_with = "opt_float")]
    pub cond_mi: Option<f64>,
}

fn finite(axis: Axis, v: AxisValue) -> Result<f64, CliError> {
    if v.0.is_finite() {
        Ok(v.0)
    } else {
        Err(CliError::Config(format!(
            "axis {} needs finite values",
            axis.as_str()
        )))
    }
}

pub fn sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("missing \"sweep\" section".into()))?;
    let problems = cfg.load_problems()?;
    if problems.is_empty() {
        return Err(CliError::Config("no problems given".into()));
    }
    let axis = sweep.axis;
    let mut rows = Vec::new();
    for (name, problem) in &problems {
        for &value in &sweep.values {
            let mut c = cfg.clone();
            let mut p = problem.clone();
            match axis {
                Axis::Delta => c.deltas = vec![finite(axis, value)?],
                Axis::T => {
                    c.t = vec![if value.0 == f64::INFINITY {
                        Order::Infinite
                    } else {
                        Order::Finite(value.0)
                    }]
                }
                Axis::Alpha => c.alpha = vec![finite(axis, value)?],
                Axis::Beta => {
                    p.learner = LearnerSpec::Gibbs {
                        beta: finite(axis, value)?,
                    }
                }
                Axis::N => {
                    let n = finite(axis, value)?;
                    if !(n >= 1.0 && n.fract() == 0.0) {
                        return Err(CliError::Config(format!(
                            "n = {n} must be a positive integer"
                        )));
                    }
                    p.n = n as usize;
                }
            }
            c.validate()?;
            let sys = System::build(&p, c.setting)?;
            let (mi, zt_mi, cmi) = match &sys {
                System::Standard(s) => (Some(mutual_information(s)?), None, None),
                System::Subset(s) => (
                    None,
                    Some(supersample_mutual_information(s)?),
                    Some(cond_mutual_information(s)?),
                ),
            };
            for r in system_rows(name, &sys, c.setting, &c.bound_specs()?, &c.deltas)? {
                rows.push(SweepRow {
                    schema_version: SCHEMA_VERSION,
                    problem: r.problem,
                    setting: r.setting,
                    axis: axis.as_str(),
                    axis_value: value.to_string(),
                    bound_id: r.bound_id,
                    delta: r.delta,
                    t: r.t,
                    alpha: r.alpha,
                    epsilon: r.epsilon,
                    feasible: r.feasible,
                    abs_expected_gen: r.abs_expected_gen,
                    truth_quantile: r.truth_quantile,
                    mutual_information: mi,
                    supersample_mi: zt_mi,
                    cond_mi: cmi,
                });
            }
        }
    }
    Ok(rows)
}
