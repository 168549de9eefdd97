use serde::Serialize;

use super::COVERAGE_TOL;
use crate::bounds::{
    self, cond_tail_from_table, density_bound, sd_tail_from_table, standard_params, standard_scale,
    subset_params, subset_scale, BoundId, BoundParams, BoundResult, BoundSpec, Setting,
};
use crate::info::{conditional_density, information_density};
use crate::models::{StandardSystem, SubsetSystem};
use crate::prob::logspace::kahan_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub enum AnySystem<'a> {
    Standard(&'a StandardSystem),
    Subset(&'a SubsetSystem),
}

impl<'a> From<&'a StandardSystem> for AnySystem<'a> {
    fn from(s: &'a StandardSystem) -> Self {
        AnySystem::Standard(s)
    }
}

impl<'a> From<&'a SubsetSystem> for AnySystem<'a> {
    fn from(s: &'a SubsetSystem) -> Self {
        AnySystem::Subset(s)
    }
}

/// One outcome of the probability space a bound is stated over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Outcome {
    pub mass: f64,
    /// The controlled quantity, before taking absolute values.
    pub quantity: f64,
    /// `None` when the bound is infeasible at this outcome.
    pub epsilon: Option<f64>,
}

impl Outcome {
    pub fn violated(&self) -> bool {
        self.epsilon
            .is_none_or(|e| self.quantity.abs() > e + COVERAGE_TOL)
    }
}

/// A bound evaluated at every outcome of its probability space: data
/// vectors for PAC-Bayes bounds, joint atoms for single-draw bounds and a
/// single deterministic outcome for average bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    /// Result at the first outcome; carries the id, flavor and parameters.
    pub template: BoundResult,
    pub outcomes: Vec<Outcome>,
}

impl Profile {
    pub fn violation_prob(&self) -> f64 {
        kahan_sum(
            self.outcomes
                .iter()
                .filter(|o| o.violated())
                .map(|o| o.mass),
        )
    }

    pub fn infeasible_prob(&self) -> f64 {
        kahan_sum(
            self.outcomes
                .iter()
                .filter(|o| o.epsilon.is_none())
                .map(|o| o.mass),
        )
    }

    /// `E[ε | feasible]`, or `None` if the bound is nowhere feasible.
    pub fn mean_epsilon(&self) -> Option<f64> {
        let feasible: Vec<_> = self
            .outcomes
            .iter()
            .filter(|o| o.epsilon.is_some())
            .collect();
        let mass = kahan_sum(feasible.iter().map(|o| o.mass));
        (mass > 0.0).then(|| kahan_sum(feasible.iter().map(|o| o.mass * o.epsilon.unwrap())) / mass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub bound_id: String,
    pub delta: f64,
    pub exact_violation_prob: f64,
    pub infeasible_prob: f64,
    pub holds: bool,
}

/// Exact probability that a bound fails, with infeasible outcomes counted
/// as failures. Average bounds are deterministic, so their violation
/// probability is 0 or 1.
pub fn coverage<'a, S: Into<AnySystem<'a>>>(
    sys: S,
    spec: &BoundSpec,
    delta: f64,
) -> Result<CoverageReport> {
    let p = profile(sys, spec, delta)?;
    let v = p.violation_prob();
    Ok(CoverageReport {
        bound_id: spec.label(),
        delta,
        exact_violation_prob: v,
        infeasible_prob: p.infeasible_prob(),
        holds: v <= delta + COVERAGE_TOL,
    })
}

/// Evaluates a bound at every outcome of its probability space.
pub fn profile<'a, S: Into<AnySystem<'a>>>(
    sys: S,
    spec: &BoundSpec,
    delta: f64,
) -> Result<Profile> {
    crate::error::check_delta(delta)?;
    match (sys.into(), spec.id.setting()) {
        (AnySystem::Standard(s), Setting::Standard) => standard_profile(s, spec, delta),
        (AnySystem::Subset(s), Setting::Subset) => subset_profile(s, spec, delta),
        (AnySystem::Standard(_), Setting::Subset) => Err(Error::UnknownBound(format!(
            "{} needs a random-subset problem",
            spec.label()
        ))),
        (AnySystem::Subset(_), Setting::Standard) => Err(Error::UnknownBound(format!(
            "{} needs a standard problem",
            spec.label()
        ))),
    }
}

fn constant(template: BoundResult, outcomes: impl Iterator<Item = (f64, f64)>) -> Profile {
    let outcomes = outcomes
        .map(|(mass, quantity)| Outcome {
            mass,
            quantity,
            epsilon: template.epsilon,
        })
        .collect();
    Profile { template, outcomes }
}

fn varying(outcomes: Vec<(f64, f64, BoundResult)>) -> Result<Profile> {
    let template = outcomes
        .first()
        .map(|o| o.2.clone())
        .ok_or(Error::EmptySupport)?;
    let outcomes = outcomes
        .into_iter()
        .map(|(mass, quantity, r)| Outcome {
            mass,
            quantity,
            epsilon: r.epsilon,
        })
        .collect();
    Ok(Profile { template, outcomes })
}

fn standard_fixed(sys: &StandardSystem, spec: &BoundSpec, delta: f64) -> Result<BoundResult> {
    match spec.id {
        BoundId::AvgMi => bounds::avg_mi_bound(sys),
        BoundId::PacbMoment => bounds::pacb_moment_bound(sys, delta, spec.t),
        BoundId::SdMoment => bounds::sd_moment_bound(sys, delta, spec.t),
        BoundId::SdLeakage => bounds::sd_leakage_bound(sys, delta),
        BoundId::SdRenyi => bounds::sd_renyi_bound(sys, delta, spec.alpha),
        BoundId::SdTail => bounds::sd_tail_bound(sys, delta, spec.gamma),
        BoundId::SdTailMoment => Ok(bounds::tail_relaxations(sys, delta, spec.t)?.0),
        BoundId::SdTailLeakage => Ok(bounds::tail_relaxations(sys, delta, spec.t)?.1),
        other => Err(Error::UnknownBound(format!(
            "{other} is not a data-independent standard bound"
        ))),
    }
}

fn standard_profile(sys: &StandardSystem, spec: &BoundSpec, delta: f64) -> Result<Profile> {
    let pac_outcomes = || {
        sys.samples()
            .support()
            .map(|x| (sys.samples().mass(x), sys.posterior_gen(x)))
            .collect::<Vec<_>>()
    };
    let atoms = || {
        let mut v = Vec::with_capacity(sys.n_atoms());
        for w in 0..sys.n_hypotheses() {
            for x in sys.samples().support() {
                let m = sys.joint_mass(w, x);
                if m > 0.0 {
                    v.push((w, x, m));
                }
            }
        }
        v
    };
    match spec.id {
        BoundId::AvgMi => {
            let r = bounds::avg_mi_bound(sys)?;
            Ok(constant(r, std::iter::once((1.0, sys.expected_gen()))))
        }
        BoundId::Pacb => varying(
            pac_outcomes()
                .into_iter()
                .zip(sys.samples().support())
                .map(|((m, q), x)| Ok((m, q, bounds::pacb_bound(sys, x, delta)?)))
                .collect::<Result<_>>()?,
        ),
        BoundId::SdDensity => {
            let tbl = information_density(sys)?;
            let scale = standard_scale(sys);
            let params = standard_params(sys, delta)?;
            varying(
                atoms()
                    .into_iter()
                    .map(|(w, x, m)| {
                        let iota = tbl.value_at(sys.atom(w, x)).unwrap_or(f64::NEG_INFINITY);
                        (
                            m,
                            sys.gen(w, x),
                            density_bound(BoundId::SdDensity, params, scale, iota, delta),
                        )
                    })
                    .collect(),
            )
        }
        BoundId::SdTail => {
            let tbl = information_density(sys)?;
            let r = sd_tail_from_table(sys, &tbl, delta, spec.gamma)?;
            Ok(constant(
                r,
                atoms().into_iter().map(|(w, x, m)| (m, sys.gen(w, x))),
            ))
        }
        BoundId::PacbMoment => {
            let r = standard_fixed(sys, spec, delta)?;
            Ok(constant(r, pac_outcomes().into_iter()))
        }
        _ => {
            let r = standard_fixed(sys, spec, delta)?;
            Ok(constant(
                r,
                atoms().into_iter().map(|(w, x, m)| (m, sys.gen(w, x))),
            ))
        }
    }
}

fn subset_fixed(sys: &SubsetSystem, spec: &BoundSpec, delta: f64) -> Result<BoundResult> {
    match spec.id {
        BoundId::CmiAvg => bounds::cmi_avg_bound(sys),
        BoundId::CondPacbMoment => bounds::cond_pacb_moment_bound(sys, delta, spec.t),
        BoundId::CondSdMoment => bounds::cond_sd_moment_bound(sys, delta, spec.t),
        BoundId::CondSdLeakage => bounds::cond_sd_leakage_bound(sys, delta),
        BoundId::CondSdRenyiPair => bounds::cond_sd_renyi_pair_bound(sys, delta, spec.alpha),
        BoundId::CondTail => bounds::cond_tail_bound(sys, delta, spec.gamma),
        BoundId::CondTailMoment => Ok(bounds::cond_tail_relaxations(sys, delta, spec.t)?.0),
        BoundId::CondTailLeakage => Ok(bounds::cond_tail_relaxations(sys, delta, spec.t)?.1),
        BoundId::CondAlphaMi => bounds::cond_alpha_mi_bound(sys, delta, spec.alpha),
        BoundId::CondAlphaMiLeakage => bounds::cond_alpha_mi_leakage_bound(sys, delta),
        BoundId::CondAlphaMiRenyi => bounds::cond_alpha_mi_renyi_bound(sys, delta, spec.alpha),
        other => Err(Error::UnknownBound(format!(
            "{other} is not a data-independent random-subset bound"
        ))),
    }
}

/// Applies the `ĝen → gen` penalty when the spec asks for it. The inner
/// bound is evaluated at `δ/2` by the caller-supplied closure.
fn maybe_to_gen<F>(
    sys: &SubsetSystem,
    spec: &BoundSpec,
    delta: f64,
    inner: F,
) -> Result<BoundResult>
where
    F: FnOnce(f64) -> Result<BoundResult>,
{
    if spec.to_gen {
        bounds::genhat_to_gen(inner, sys.loss(), sys.n(), delta)
    } else {
        inner(delta)
    }
}

fn subset_profile(sys: &SubsetSystem, spec: &BoundSpec, delta: f64) -> Result<Profile> {
    let to_gen = spec.to_gen;
    let quantity = |w: usize, zt: usize, s: usize| {
        if to_gen {
            sys.gen(w, zt, s)
        } else {
            sys.gen_hat(w, zt, s)
        }
    };
    let pac_outcomes = || {
        let mut v = Vec::new();
        for zt in sys.supersamples().support() {
            for s in 0..sys.n_selectors() {
                let m = sys.supersamples().mass(zt) * sys.selector_mass();
                v.push((zt, s, m, sys.posterior_mean(zt, s, |w| quantity(w, zt, s))));
            }
        }
        v
    };
    let atoms = || {
        let mut v = Vec::new();
        for w in 0..sys.n_hypotheses() {
            for zt in sys.supersamples().support() {
                for s in 0..sys.n_selectors() {
                    let m = sys.joint_mass(w, zt, s);
                    if m > 0.0 {
                        v.push((m, quantity(w, zt, s), (w, zt, s)));
                    }
                }
            }
        }
        v
    };
    match spec.id {
        BoundId::CmiAvg => {
            let r = bounds::cmi_avg_bound(sys)?;
            Ok(constant(r, std::iter::once((1.0, sys.expected_gen()))))
        }
        BoundId::CondPacb => varying(
            pac_outcomes()
                .into_iter()
                .map(|(zt, s, m, q)| {
                    let r =
                        maybe_to_gen(sys, spec, delta, |d| bounds::cond_pacb_bound(sys, zt, s, d))?;
                    Ok((m, q, r))
                })
                .collect::<Result<_>>()?,
        ),
        BoundId::CondSdDensity => {
            let tbl = conditional_density(sys)?;
            let scale = subset_scale(sys);
            let params = subset_params(sys, delta)?;
            varying(
                atoms()
                    .into_iter()
                    .map(|(m, q, (w, zt, s))| {
                        let iota = tbl
                            .value_at(sys.atom(w, zt, s))
                            .unwrap_or(f64::NEG_INFINITY);
                        let r = maybe_to_gen(sys, spec, delta, |d| {
                            Ok(density_bound(
                                BoundId::CondSdDensity,
                                BoundParams {
                                    delta: Some(d),
                                    ..params
                                },
                                scale,
                                iota,
                                d,
                            ))
                        })?;
                        Ok((m, q, r))
                    })
                    .collect::<Result<_>>()?,
            )
        }
        BoundId::CondTail => {
            let tbl = conditional_density(sys)?;
            let r = maybe_to_gen(sys, spec, delta, |d| {
                cond_tail_from_table(sys, &tbl, d, spec.gamma)
            })?;
            Ok(constant(r, atoms().into_iter().map(|(m, q, _)| (m, q))))
        }
        BoundId::CondPacbMoment => {
            let r = maybe_to_gen(sys, spec, delta, |d| subset_fixed(sys, spec, d))?;
            Ok(constant(
                r,
                pac_outcomes().into_iter().map(|(_, _, m, q)| (m, q)),
            ))
        }
        _ => {
            let r = maybe_to_gen(sys, spec, delta, |d| subset_fixed(sys, spec, d))?;
            Ok(constant(r, atoms().into_iter().map(|(m, q, _)| (m, q))))
        }
    }
}
