//! Closed-form generalization bounds.
//!
//! Every bound has the shape `ε = sqrt(scale · radicand)` where the scale
//! is `2σ²/n` in the standard setting and `2C/n` in the random-subset
//! setting. A negative radicand is reported as an infeasible result rather
//! than an error.

mod id;
mod standard;
mod subset;

use serde::Serialize;

pub use crate::info::Order;
pub use crate::models::{delta_constant, range_constant, RangeConstant, RangeMode};
pub use id::{BoundId, BoundSpec, Setting};
pub use standard::{
    avg_mi_bound, chain_report, pacb_bound, pacb_moment_bound, sd_density_bound, sd_leakage_bound,
    sd_moment_bound, sd_renyi_bound, sd_tail_bound, tail_relaxations, ChainReport,
};
pub use subset::{
    cmi_avg_bound, cond_alpha_mi_bound, cond_alpha_mi_leakage_bound, cond_alpha_mi_renyi_bound,
    cond_pacb_bound, cond_pacb_moment_bound, cond_sd_density_bound, cond_sd_leakage_bound,
    cond_sd_moment_bound, cond_sd_renyi_pair_bound, cond_tail_bound, cond_tail_relaxations,
    genhat_to_gen, holder_event_bound, leakage_ordering_check, HolderExponents, LeakageOrdering,
};

pub(crate) use standard::{
    density_bound, sd_tail_from_table, standard_scale, with_delta as standard_params,
};
pub(crate) use subset::{cond_tail_from_table, subset_scale, with_delta as subset_params};

/// What the bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// `|E[gen]| ≤ ε`.
    Average,
    /// `|E_{P_{W|Z}}[gen]| ≤ ε` with probability `1 − δ` over the data.
    PacBayes,
    /// `|gen| ≤ ε` with probability `1 − δ` over hypothesis and data.
    SingleDraw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    DataDependent,
    DataIndependent,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Average => "average",
            Flavor::PacBayes => "pac-bayes",
            Flavor::SingleDraw => "single-draw",
        }
    }
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::DataDependent => "data-dependent",
            Scope::DataIndependent => "data-independent",
        }
    }
}

/// Parameters a bound was evaluated at. Unused entries are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct BoundParams {
    pub delta: Option<f64>,
    pub t: Option<Order>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub sigma: Option<f64>,
    pub range_constant: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub bound_id: String,
    pub flavor: Flavor,
    pub scope: Scope,
    /// `None` exactly when the bound is infeasible.
    pub epsilon: Option<f64>,
    pub feasible: bool,
    pub reason: Option<String>,
    pub params: BoundParams,
}

impl BoundResult {
    /// `sqrt(scale · radicand)`, infeasible when the radicand is negative
    /// or not finite.
    pub(crate) fn from_radicand(
        id: BoundId,
        params: BoundParams,
        scale: f64,
        radicand: f64,
    ) -> Self {
        if radicand.is_nan() || radicand == f64::INFINITY {
            Self::infeasible(id, params, "radicand is not finite")
        } else if radicand < 0.0 {
            Self::infeasible(id, params, "negative radicand")
        } else {
            Self::feasible(id, params, (scale * radicand).sqrt())
        }
    }

    pub(crate) fn feasible(id: BoundId, params: BoundParams, epsilon: f64) -> Self {
        Self {
            bound_id: id.as_str().to_string(),
            flavor: id.flavor(),
            scope: id.scope(),
            epsilon: Some(epsilon),
            feasible: true,
            reason: None,
            params,
        }
    }

    pub(crate) fn infeasible(id: BoundId, params: BoundParams, reason: &str) -> Self {
        Self {
            bound_id: id.as_str().to_string(),
            flavor: id.flavor(),
            scope: id.scope(),
            epsilon: None,
            feasible: false,
            reason: Some(reason.to_string()),
            params,
        }
    }

    /// `ε`, or `+∞` when infeasible.
    pub fn value(&self) -> f64 {
        self.epsilon.unwrap_or(f64::INFINITY)
    }

    /// Whether `|x| ≤ ε + 1e-12`; always false when infeasible.
    pub fn covers(&self, x: f64) -> bool {
        self.epsilon.is_some_and(|e| x.abs() <= e + 1e-12)
    }
}

/// Threshold choice for the tail bounds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gamma {
    Fixed(f64),
    /// Minimize over the attained density values and their `±1e-9`
    /// perturbations.
    #[default]
    Auto,
}

/// Perturbation applied around each attained density value in auto mode.
pub const GAMMA_STEP: f64 = 1e-9;

/// Shared evaluation of `ε² = scale·(γ + log(2/(δ − P[ι ≥ γ])))`.
pub(crate) fn tail_bound(
    id: BoundId,
    params: BoundParams,
    scale: f64,
    tbl: &crate::info::DensityTable,
    delta: f64,
    gamma: Gamma,
) -> BoundResult {
    let steps = tbl.tail_steps();
    let eval = |g: f64| {
        let slack = delta - steps.tail(g);
        if slack <= 0.0 {
            None
        } else {
            let r = g + (2.0 / slack).ln();
            (r >= 0.0).then_some(r)
        }
    };
    let chosen = match gamma {
        Gamma::Fixed(g) => eval(g).map(|r| (g, r)),
        Gamma::Auto => steps
            .values()
            .iter()
            .flat_map(|&v| [v - GAMMA_STEP, v, v + GAMMA_STEP])
            .filter_map(|g| eval(g).map(|r| (g, r)))
            .min_by(|a, b| a.1.total_cmp(&b.1)),
    };
    match chosen {
        Some((g, r)) => BoundResult::from_radicand(
            id,
            BoundParams {
                gamma: Some(g),
                ..params
            },
            scale,
            r,
        ),
        None => {
            let g = match gamma {
                Gamma::Fixed(g) => Some(g),
                Gamma::Auto => None,
            };
            BoundResult::infeasible(
                id,
                BoundParams { gamma: g, ..params },
                "P[ι ≥ γ] ≥ δ or negative radicand for every admissible γ",
            )
        }
    }
}

/// `α/(α−1)`; the Hölder conjugate of `α > 1`.
pub fn conjugate(alpha: f64) -> crate::Result<f64> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(alpha / (alpha - 1.0))
    } else {
        Err(crate::Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "Hölder exponent must be finite and greater than 1",
        })
    }
}
