use std::f64::consts::LN_2;

use serde::Serialize;

use super::{conjugate, tail_bound, BoundId, BoundParams, BoundResult, Gamma, Order};
use crate::error::check_delta;
use crate::info::{
    information_density, lt_norm, max_information, maximal_leakage, posterior_kl, DensityTable,
};
use crate::models::StandardSystem;
use crate::Result;

/// `2σ²/n`.
pub(crate) fn standard_scale(sys: &StandardSystem) -> f64 {
    let s = sys.loss().sigma();
    2.0 * s * s / sys.n() as f64
}

fn params(sys: &StandardSystem) -> BoundParams {
    BoundParams {
        sigma: Some(sys.loss().sigma()),
        n: sys.n(),
        ..BoundParams::default()
    }
}

pub(crate) fn with_delta(sys: &StandardSystem, delta: f64) -> Result<BoundParams> {
    check_delta(delta)?;
    Ok(BoundParams {
        delta: Some(delta),
        ..params(sys)
    })
}

/// `ε = sqrt(2σ²/n · I(W; Z))` bounding `|E[gen]|`.
pub fn avg_mi_bound(sys: &StandardSystem) -> Result<BoundResult> {
    let i = information_density(sys)?.mean().max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::AvgMi,
        params(sys),
        standard_scale(sys),
        i,
    ))
}

/// `ε(z) = sqrt(2σ²/n · (D(P_{W|z} ‖ P_W) + log(1/δ)))` for sample index `x`.
pub fn pacb_bound(sys: &StandardSystem, x: usize, delta: f64) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let kl = posterior_kl(sys, x)?.max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::Pacb,
        p,
        standard_scale(sys),
        kl - delta.ln(),
    ))
}

/// `ε = sqrt(2σ²/n · (‖D(P_{W|Z} ‖ P_W)‖_t/(δ/2)^{1/t} + log(2/δ)))`.
pub fn pacb_moment_bound(sys: &StandardSystem, delta: f64, t: Order) -> Result<BoundResult> {
    let p = BoundParams {
        t: Some(t),
        ..with_delta(sys, delta)?
    };
    t.check()?;
    let support: Vec<usize> = sys.samples().support().collect();
    let kls = support
        .iter()
        .map(|&x| posterior_kl(sys, x).map(|v| v.max(0.0)))
        .collect::<Result<Vec<_>>>()?;
    let masses: Vec<f64> = support.iter().map(|&x| sys.samples().mass(x)).collect();
    let norm = lt_norm(&kls, &masses, t)?;
    Ok(BoundResult::from_radicand(
        BoundId::PacbMoment,
        p,
        standard_scale(sys),
        norm / t.root_of(delta / 2.0) + (2.0 / delta).ln(),
    ))
}

/// `ε(w, z) = sqrt(2σ²/n · (ι(w, z) + log(1/δ)))`; infeasible when the
/// radicand is negative.
pub fn sd_density_bound(
    sys: &StandardSystem,
    w: usize,
    x: usize,
    delta: f64,
) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let tbl = information_density(sys)?;
    let iota = tbl.value_at(sys.atom(w, x)).unwrap_or(f64::NEG_INFINITY);
    Ok(density_bound(
        BoundId::SdDensity,
        p,
        standard_scale(sys),
        iota,
        delta,
    ))
}

pub(crate) fn density_bound(
    id: BoundId,
    params: BoundParams,
    scale: f64,
    iota: f64,
    delta: f64,
) -> BoundResult {
    BoundResult::from_radicand(id, params, scale, iota - delta.ln())
}

/// `ε = sqrt(2σ²/n · (I + M_t/(δ/2)^{1/t} + log(2/δ)))`.
pub fn sd_moment_bound(sys: &StandardSystem, delta: f64, t: Order) -> Result<BoundResult> {
    let p = BoundParams {
        t: Some(t),
        ..with_delta(sys, delta)?
    };
    let tbl = information_density(sys)?;
    let r = moment_radicand(&tbl, delta, t)?;
    Ok(BoundResult::from_radicand(
        BoundId::SdMoment,
        p,
        standard_scale(sys),
        r + (2.0 / delta).ln(),
    ))
}

/// `E[ι] + M_t/(δ/2)^{1/t}`.
pub(crate) fn moment_radicand(tbl: &DensityTable, delta: f64, t: Order) -> Result<f64> {
    let m = tbl.central_moment(t)?;
    Ok(tbl.mean().max(0.0) + m / t.root_of(delta / 2.0))
}

/// `ε = sqrt(2σ²/n · (L(Z → W) + 2 log(2/δ)))`.
pub fn sd_leakage_bound(sys: &StandardSystem, delta: f64) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    let l = maximal_leakage(sys)?.max(0.0);
    Ok(BoundResult::from_radicand(
        BoundId::SdLeakage,
        p,
        standard_scale(sys),
        l + 2.0 * (2.0 / delta).ln(),
    ))
}

/// `ε = sqrt(2σ²/n · (((α−1)/α) D_α + ((γ−1)/γ) D_γ + 2 log(2/δ)))` with
/// `γ = α/(α−1)`.
pub fn sd_renyi_bound(sys: &StandardSystem, delta: f64, alpha: f64) -> Result<BoundResult> {
    let g = conjugate(alpha)?;
    let p = BoundParams {
        alpha: Some(alpha),
        gamma: Some(g),
        ..with_delta(sys, delta)?
    };
    let tbl = information_density(sys)?;
    let r = renyi_pair(&tbl, alpha, g)?;
    Ok(BoundResult::from_radicand(
        BoundId::SdRenyi,
        p,
        standard_scale(sys),
        r + 2.0 * (2.0 / delta).ln(),
    ))
}

pub(crate) fn renyi_pair(tbl: &DensityTable, alpha: f64, gamma: f64) -> Result<f64> {
    let da = tbl.renyi(alpha)?.max(0.0);
    let dg = tbl.renyi(gamma)?.max(0.0);
    Ok((alpha - 1.0) / alpha * da + (gamma - 1.0) / gamma * dg)
}

/// `ε = sqrt(2σ²/n · (γ + log(2/(δ − P[ι ≥ γ]))))`, either at a fixed `γ`
/// or minimized over the attained values of `ι`.
pub fn sd_tail_bound(sys: &StandardSystem, delta: f64, gamma: Gamma) -> Result<BoundResult> {
    let tbl = information_density(sys)?;
    sd_tail_from_table(sys, &tbl, delta, gamma)
}

pub(crate) fn sd_tail_from_table(
    sys: &StandardSystem,
    tbl: &DensityTable,
    delta: f64,
    gamma: Gamma,
) -> Result<BoundResult> {
    let p = with_delta(sys, delta)?;
    Ok(tail_bound(
        BoundId::SdTail,
        p,
        standard_scale(sys),
        tbl,
        delta,
        gamma,
    ))
}

/// Relaxations of the tail bound through Markov's inequality on the
/// central moment and through the maximal leakage. Each exceeds its direct
/// counterpart by `(2σ²/n) ln 2` inside the square root.
pub fn tail_relaxations(
    sys: &StandardSystem,
    delta: f64,
    t: Order,
) -> Result<(BoundResult, BoundResult)> {
    let p = with_delta(sys, delta)?;
    let scale = standard_scale(sys);
    let tbl = information_density(sys)?;
    let moment = BoundResult::from_radicand(
        BoundId::SdTailMoment,
        BoundParams { t: Some(t), ..p },
        scale,
        moment_radicand(&tbl, delta, t)? + (4.0 / delta).ln(),
    );
    let l = maximal_leakage(sys)?.max(0.0);
    let leakage = BoundResult::from_radicand(
        BoundId::SdTailLeakage,
        p,
        scale,
        l + LN_2 + 2.0 * (2.0 / delta).ln(),
    );
    Ok((moment, leakage))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainReport {
    pub leakage: f64,
    pub max_information: f64,
    /// `I(W; Z) + M_∞(W; Z)`.
    pub mi_plus_sup_deviation: f64,
    /// `L ≤ I_max ≤ I + M_∞` up to `1e-12`.
    pub chain_holds: bool,
    /// `L ≤ I_max + log(2/δ)`, the regime where the leakage bound beats the
    /// max-information form of the moment bound.
    pub leakage_within_log_term: bool,
}

pub fn chain_report(sys: &StandardSystem, delta: f64) -> Result<ChainReport> {
    check_delta(delta)?;
    let tbl = information_density(sys)?;
    let leakage = maximal_leakage(sys)?;
    let max_information = max_information(sys)?;
    let upper = tbl.mean() + tbl.central_moment(Order::Infinite)?;
    let tol = 1e-12;
    Ok(ChainReport {
        leakage,
        max_information,
        mi_plus_sup_deviation: upper,
        chain_holds: leakage <= max_information + tol && max_information <= upper + tol,
        leakage_within_log_term: leakage <= max_information + (2.0 / delta).ln(),
    })
}
