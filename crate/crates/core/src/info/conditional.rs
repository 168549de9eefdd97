use std::f64::consts::LN_2;

use super::{check_alpha, DensityTable};
use crate::models::SubsetSystem;
use crate::prob::logspace::{kahan_sum, ln_mass, log_sum_exp};
use crate::{Error, Result};

/// `ι(w, s | z̃) = log P(w | z̃, s)/Q_{W|z̃}(w)` on the support of `P_{WZ̃S}`.
pub fn conditional_density(sys: &SubsetSystem) -> Result<DensityTable> {
    let mut t = DensityTable::with_capacity(sys.n_atoms());
    let ls = -(sys.n() as f64) * LN_2;
    let label = |a: usize| sys.joint().tuple_label(a);
    for w in 0..sys.n_hypotheses() {
        for zt in 0..sys.n_supersamples() {
            let lq = sys.supersamples().log_mass(zt) + ln_mass(sys.reference(w, zt)) + ls;
            for s in 0..sys.n_selectors() {
                t.push(sys.atom(w, zt, s), sys.joint_log_mass(w, zt, s), lq, label)?;
            }
        }
    }
    Ok(t)
}

/// `I(W; S | Z̃) = E[ι(W, S | Z̃)]`.
pub fn cond_mutual_information(sys: &SubsetSystem) -> Result<f64> {
    Ok(conditional_density(sys)?.mean())
}

/// `(1/(α−1)) log E_{P_Z̃ Q_{W|Z̃} P_S}[exp(α·ι(W, S | Z̃))]`.
pub fn cond_renyi_divergence(sys: &SubsetSystem, alpha: f64) -> Result<f64> {
    conditional_density(sys)?.renyi(alpha)
}

/// `D(P_{W|z̃,s} ‖ Q_{W|z̃})`.
pub fn posterior_kl_subset(sys: &SubsetSystem, zt: usize, s: usize) -> Result<f64> {
    let mut terms = Vec::with_capacity(sys.n_hypotheses());
    for w in 0..sys.n_hypotheses() {
        let p = sys.cond(w, zt, s);
        if p > 0.0 {
            let q = sys.reference(w, zt);
            if q <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation(format!(
                    "hypothesis {:?} has reference mass 0 at supersample {:?}",
                    sys.loss().hypotheses()[w],
                    sys.supersamples().label(zt)
                )));
            }
            terms.push(p * (p.ln() - q.ln()));
        }
    }
    Ok(kahan_sum(terms))
}

/// Conditional α-mutual information for `α > 1`:
/// `(1/(α−1)) log E_Z̃[(Σ_w (E_S[P(w|Z̃,S)^α])^{1/α})^α]`.
pub fn cond_alpha_mi(sys: &SubsetSystem, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "conditional α-mutual information needs α > 1",
        });
    }
    let ls = -(sys.n() as f64) * LN_2;
    let outer: Vec<f64> = sys
        .supersamples()
        .support()
        .map(|zt| {
            let per_w: Vec<f64> = (0..sys.n_hypotheses())
                .map(|w| {
                    let inner: Vec<f64> = (0..sys.n_selectors())
                        .map(|s| ls + alpha * ln_mass(sys.cond(w, zt, s)))
                        .collect();
                    log_sum_exp(&inner) / alpha
                })
                .collect();
            sys.supersamples().log_mass(zt) + alpha * log_sum_exp(&per_w)
        })
        .collect();
    Ok(log_sum_exp(&outer) / (alpha - 1.0))
}

/// `L(S → W | Z̃) = log max_{z̃ ∈ supp} Σ_w max_s P(w | z̃, s)`.
pub fn cond_maximal_leakage(sys: &SubsetSystem) -> Result<f64> {
    sys.supersamples()
        .support()
        .map(|zt| {
            kahan_sum((0..sys.n_hypotheses()).map(|w| {
                (0..sys.n_selectors())
                    .map(|s| sys.cond(w, zt, s))
                    .fold(0.0, f64::max)
            }))
        })
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        })
        .map(f64::ln)
        .ok_or(Error::EmptySupport)
}

/// `I(W; Z̃) = E_Z̃[D(P_{W|Z̃} ‖ P_W)]` with the exact marginals.
pub fn supersample_mutual_information(sys: &SubsetSystem) -> Result<f64> {
    let support: Vec<usize> = sys.supersamples().support().collect();
    let pw: Vec<f64> = (0..sys.n_hypotheses())
        .map(|w| {
            kahan_sum(
                support
                    .iter()
                    .map(|&zt| sys.supersamples().mass(zt) * sys.marginal(w, zt)),
            )
        })
        .collect();
    let mut terms = Vec::new();
    for &zt in &support {
        let pz = sys.supersamples().mass(zt);
        for (w, &q) in pw.iter().enumerate() {
            let p = sys.marginal(w, zt);
            if p > 0.0 {
                terms.push(pz * p * (p.ln() - q.ln()));
            }
        }
    }
    Ok(kahan_sum(terms))
}
