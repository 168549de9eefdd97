use std::f64::consts::LN_2;

use serde::Serialize;

use super::standard::{density_bound, moment_radicand, renyi_pair};
use super::{conjugate, tail_bound, BoundId, BoundParams, BoundResult, Gamma, Order};
use crate::error::check_delta;
use crate::info::{
    cond_alpha_mi, cond_maximal_leakage, conditional_density, lt_norm, maximal_leakage,
    posterior_kl_subset, DensityTable,
};
use crate::models::{LossTable, SubsetSystem};
use crate::prob::logspace::{ln_mass, log_sum_exp};
use crate::{Error, Result};

/// `2C/n`, with `C` the system's range constant.
pub(crate) fn subset_scale(sys: &SubsetSystem) -> f64 {
    2.0 * sys.range_constant().value / sys.n() as f64
}

fn params(sys: &SubsetSystem) -> BoundParams {
    BoundParams {
        range_constant: Some(sys.range_constant().value),
        n: sys.n(),
        ..BoundParams::default()
    }
}

pub(crate) fn with_delta(sys: &SubsetSystem, delta: f64) -> Result<BoundParams> {
    check_delta(delta)?;
    Ok(BoundParams {
        delta: Some(delta),
        ..params(sys)
    })
}

/// `ε = sqrt(2C/n · I(W; S | Z̃))` bounding `|E[gen(W, Z(S))]|`.
pub fn cmi_avg_bound(sys: &SubsetSystem) -> Result<BoundResult> {
    let cmi = conditional_density(sys)?.mean().max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::CmiAvg,
        params(sys),
        subset_scale(sys),
        cmi,
    ))
}

/// `ε(z̃, s) = sqrt(2C/n · (D(P_{W|z̃,s} ‖ P_{W|z̃}) + log(1/δ)))`.
pub fn cond_pacb_bound(sys: &SubsetSystem, zt: usize, s: usize, delta: f64) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let kl = posterior_kl_subset(sys, zt, s)?.max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::CondPacb,
        p,
        subset_scale(sys),
        kl - delta.ln(),
    ))
}

/// `ε = sqrt(2C/n · (‖D(P_{W|Z̃S} ‖ P_{W|Z̃})‖_t/(δ/2)^{1/t} + log(2/δ)))`.
pub fn cond_pacb_moment_bound(sys: &SubsetSystem, delta: f64, t: Order) -> Result<BoundResult> {
    let p = BoundParams {
        t: Some(t),
        ..with_delta(sys, delta)?
    };
    t.check()?;
    let mut kls = Vec::new();
    let mut masses = Vec::new();
    for zt in sys.supersamples().support() {
        for s in 0..sys.n_selectors() {
            kls.push(posterior_kl_subset(sys, zt, s)?.max(0.0));
            masses.push(sys.supersamples().mass(zt) * sys.selector_mass());
        }
    }
    let norm = lt_norm(&kls, &masses, t)?;
    Ok(BoundResult::from_radicand(
        BoundId::CondPacbMoment,
        p,
        subset_scale(sys),
        norm / t.root_of(delta / 2.0) + (2.0 / delta).ln(),
    ))
}

/// `ε(w, z̃, s) = sqrt(2C/n · (ι(w, s | z̃) + log(1/δ)))`; infeasible when
/// the radicand is negative.
pub fn cond_sd_density_bound(
    sys: &SubsetSystem,
    w: usize,
    zt: usize,
    s: usize,
    delta: f64,
) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let tbl = conditional_density(sys)?;
    let iota = tbl
        .value_at(sys.atom(w, zt, s))
        .unwrap_or(f64::NEG_INFINITY);
    Ok(density_bound(
        BoundId::CondSdDensity,
        p,
        subset_scale(sys),
        iota,
        delta,
    ))
}

/// `ε = sqrt(2C/n · (I(W; S | Z̃) + M̃_t/(δ/2)^{1/t} + log(2/δ)))`.
pub fn cond_sd_moment_bound(sys: &SubsetSystem, delta: f64, t: Order) -> Result<BoundResult> {
    let p = BoundParams {
        t: Some(t),
        ..with_delta(sys, delta)?
    };
    let tbl = conditional_density(sys)?;
    Ok(BoundResult::from_radicand(
        BoundId::CondSdMoment,
        p,
        subset_scale(sys),
        moment_radicand(&tbl, delta, t)? + (2.0 / delta).ln(),
    ))
}

/// `ε = sqrt(2C/n · (L(S → W | Z̃) + 2 log(2/δ)))`.
pub fn cond_sd_leakage_bound(sys: &SubsetSystem, delta: f64) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let l = cond_maximal_leakage(sys)?.max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::CondSdLeakage,
        p,
        subset_scale(sys),
        l + 2.0 * (2.0 / delta).ln(),
    ))
}

/// `ε = sqrt(2C/n · (((α−1)/α) D̃_α + ((γ−1)/γ) D̃_γ + 2 log(2/δ)))` with
/// conditional Rényi divergences and `γ = α/(α−1)`.
pub fn cond_sd_renyi_pair_bound(sys: &SubsetSystem, delta: f64, alpha: f64) -> Result<BoundResult> {
    let g = conjugate(alpha)?;
    let p = BoundParams {
        alpha: Some(alpha),
        gamma: Some(g),
        ..with_delta(sys, delta)?
    };
    let tbl = conditional_density(sys)?;
    Ok(BoundResult::from_radicand(
        BoundId::CondSdRenyiPair,
        p,
        subset_scale(sys),
        renyi_pair(&tbl, alpha, g)? + 2.0 * (2.0 / delta).ln(),
    ))
}

/// `ε = sqrt(2C/n · (γ + log(2/(δ − P[ι(W, S | Z̃) ≥ γ]))))`.
pub fn cond_tail_bound(sys: &SubsetSystem, delta: f64, gamma: Gamma) -> Result<BoundResult> {
    let tbl = conditional_density(sys)?;
    cond_tail_from_table(sys, &tbl, delta, gamma)
}

pub(crate) fn cond_tail_from_table(
    sys: &SubsetSystem,
    tbl: &DensityTable,
    delta: f64,
    gamma: Gamma,
) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    Ok(tail_bound(
        BoundId::CondTail,
        p,
        subset_scale(sys),
        tbl,
        delta,
        gamma,
    ))
}

/// Moment and leakage relaxations of the conditional tail bound. Each
/// exceeds its direct counterpart by `(2C/n) ln 2` inside the square root.
pub fn cond_tail_relaxations(
    sys: &SubsetSystem,
    delta: f64,
    t: Order,
) -> Result<(BoundResult, BoundResult)> {
    let p = with_delta(sys, delta)?;
    let scale = subset_scale(sys);
    let tbl = conditional_density(sys)?;
    let moment = BoundResult::from_radicand(
        BoundId::CondTailMoment,
        BoundParams { t: Some(t), ..p },
        scale,
        moment_radicand(&tbl, delta, t)? + (4.0 / delta).ln(),
    );
    let l = cond_maximal_leakage(sys)?.max(0.0);
    let leakage = BoundResult::from_radicand(
        BoundId::CondTailLeakage,
        p,
        scale,
        l + LN_2 + 2.0 * (2.0 / delta).ln(),
    );
    Ok((moment, leakage))
}

/// The three Hölder exponents `(α, α′, α̃)`, each greater than 1. Their
/// conjugates are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderExponents {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub alpha_tilde: f64,
}

impl Default for HolderExponents {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            alpha_prime: 2.0,
            alpha_tilde: 2.0,
        }
    }
}

/// Upper bound on `P_{WZ̃S}[E]` as the product of an event factor
/// `E_{Z̃}^{1/γ̃}[E_{W|Z̃}^{γ̃/γ′}[P_S^{γ′/γ}(E_{WZ̃})]]` and a density factor
/// `E_{Z̃}^{1/α̃}[E_{W|Z̃}^{α̃/α′}[E_S^{α′/α}[e^{α ι}]]]`, with the
/// expectations over `W` taken under the reference `Q_{W|Z̃}`.
pub fn holder_event_bound<E>(sys: &SubsetSystem, event: E, exps: HolderExponents) -> Result<f64>
where
    E: Fn(usize, usize, usize) -> bool,
{
    let (a, a1, a2) = (exps.alpha, exps.alpha_prime, exps.alpha_tilde);
    let (g, g1, g2) = (conjugate(a)?, conjugate(a1)?, conjugate(a2)?);
    let ls = -(sys.n() as f64) * LN_2;
    let mut event_terms = Vec::new();
    let mut density_terms = Vec::new();
    for zt in sys.supersamples().support() {
        let mut ev_w = Vec::new();
        let mut de_w = Vec::new();
        for w in 0..sys.n_hypotheses() {
            let lq = ln_mass(sys.reference(w, zt));
            let mut hit = Vec::new();
            let mut tilt = Vec::new();
            for s in 0..sys.n_selectors() {
                let lp = ln_mass(sys.cond(w, zt, s));
                if lp > f64::NEG_INFINITY && lq == f64::NEG_INFINITY {
                    return Err(Error::AbsoluteContinuityViolation(format!(
                        "hypothesis {:?} has reference mass 0 at supersample {:?}",
                        sys.loss().hypotheses()[w],
                        sys.supersamples().label(zt)
                    )));
                }
                if event(w, zt, s) {
                    hit.push(ls);
                }
                if lp > f64::NEG_INFINITY {
                    tilt.push(ls + a * (lp - lq));
                }
            }
            if lq == f64::NEG_INFINITY {
                continue;
            }
            ev_w.push(lq + g1 / g * log_sum_exp(&hit));
            de_w.push(lq + a1 / a * log_sum_exp(&tilt));
        }
        let lz = sys.supersamples().log_mass(zt);
        event_terms.push(lz + g2 / g1 * log_sum_exp(&ev_w));
        density_terms.push(lz + a2 / a1 * log_sum_exp(&de_w));
    }
    let log_bound = log_sum_exp(&event_terms) / g2 + log_sum_exp(&density_terms) / a2;
    Ok(log_bound.exp())
}

fn alpha_mi_radicand(info: f64, alpha: f64, delta: f64) -> f64 {
    info.max(0.0) + LN_2 - alpha / (alpha - 1.0) * delta.ln()
}

/// `ε = sqrt(2C/n · (I_α(W; S | Z̃) + ln 2 + (α/(α−1)) log(1/δ)))`.
pub fn cond_alpha_mi_bound(sys: &SubsetSystem, delta: f64, alpha: f64) -> Result<BoundResult> {
    conjugate(alpha)?;
    let p = BoundParams {
        alpha: Some(alpha),
        ..with_delta(sys, delta)?
    };
    let i = cond_alpha_mi(sys, alpha)?;
    Ok(BoundResult::from_radicand(
        BoundId::CondAlphaMi,
        p,
        subset_scale(sys),
        alpha_mi_radicand(i, alpha, delta),
    ))
}

/// The `α → ∞` limit: `ε = sqrt(2C/n · (L(S → W | Z̃) + ln 2 + log(1/δ)))`.
pub fn cond_alpha_mi_leakage_bound(sys: &SubsetSystem, delta: f64) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let l = cond_maximal_leakage(sys)?.max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::CondAlphaMiLeakage,
        p,
        subset_scale(sys),
        l + LN_2 - delta.ln(),
    ))
}

/// The α-mutual-information bound with `I_α` relaxed to the conditional
/// Rényi divergence `D̃_α`.
pub fn cond_alpha_mi_renyi_bound(
    sys: &SubsetSystem,
    delta: f64,
    alpha: f64,
) -> Result<BoundResult> {
    conjugate(alpha)?;
    let p = BoundParams {
        alpha: Some(alpha),
        ..with_delta(sys, delta)?
    };
    let d = conditional_density(sys)?.renyi(alpha)?;
    Ok(BoundResult::from_radicand(
        BoundId::CondAlphaMiRenyi,
        p,
        subset_scale(sys),
        alpha_mi_radicand(d, alpha, delta),
    ))
}

/// Turns a bound on `ĝen` (or its posterior mean) into one on `gen`:
/// `ε_gen = ε(δ/2) + sqrt((b−a)²/(2n) · log(4/δ))`.
pub fn genhat_to_gen<F>(eps_fn: F, loss: &LossTable, n: usize, delta: f64) -> Result<BoundResult>
where
    F: FnOnce(f64) -> Result<BoundResult>,
{
    check_delta(delta)?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sample size must be positive",
        });
    }
    let inner = eps_fn(delta / 2.0)?;
    let label = format!("gen:{}", inner.bound_id);
    let mut out = BoundResult {
        params: BoundParams {
            delta: Some(delta),
            ..inner.params
        },
        ..inner
    };
    out.bound_id = label;
    if let Some(e) = out.epsilon {
        let w = loss.width();
        out.epsilon = Some(e + (w * w / (2.0 * n as f64) * (4.0 / delta).ln()).sqrt());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageOrdering {
    /// `L(S → W | Z̃)`.
    pub conditional: f64,
    /// `L(Z(S) → W)` on the induced standard system.
    pub induced: f64,
    pub holds: bool,
}

/// Compares the conditional leakage with the leakage from the selected
/// samples to the hypothesis.
pub fn leakage_ordering_check(sys: &SubsetSystem) -> Result<LeakageOrdering> {
    let conditional = cond_maximal_leakage(sys)?;
    let induced = maximal_leakage(&sys.induced_standard()?)?;
    Ok(LeakageOrdering {
        conditional,
        induced,
        holds: conditional <= induced + 1e-12,
    })
}
