use super::{check_alpha, ALPHA_ONE_TOL};
use crate::prob::logspace::{kahan_sum, log_sum_exp};
use crate::prob::FiniteDistribution;
use crate::{Error, Result};

fn check_same_space(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<()> {
    if p.labels() != q.labels() {
        return Err(Error::DimensionMismatch(
            "divergence requires both distributions on the same labels".into(),
        ));
    }
    Ok(())
}

fn check_continuity(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<()> {
    match p.support().find(|&i| q.log_mass(i) == f64::NEG_INFINITY) {
        Some(i) => Err(Error::AbsoluteContinuityViolation(format!(
            "outcome {:?} has mass {} under P but 0 under Q",
            p.label(i),
            p.mass(i)
        ))),
        None => Ok(()),
    }
}

/// `D(P‖Q) = Σ P log(P/Q)`, with `0·log(0/q) = 0`.
pub fn kl(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    check_same_space(p, q)?;
    check_continuity(p, q)?;
    Ok(kahan_sum(
        p.support()
            .map(|i| p.mass(i) * (p.log_mass(i) - q.log_mass(i))),
    ))
}

/// `D_α(P‖Q) = (1/(α−1)) log Σ P^α Q^{1−α}`. Orders within
/// [`ALPHA_ONE_TOL`] of 1 return [`kl`]. For `α < 1` absolute continuity is
/// not required.
pub fn renyi_divergence(p: &FiniteDistribution, q: &FiniteDistribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_same_space(p, q)?;
    if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
        return kl(p, q);
    }
    if alpha > 1.0 {
        check_continuity(p, q)?;
    }
    let terms: Vec<f64> = p
        .support()
        .filter(|&i| q.log_mass(i) > f64::NEG_INFINITY)
        .map(|i| alpha * p.log_mass(i) + (1.0 - alpha) * q.log_mass(i))
        .collect();
    Ok(log_sum_exp(&terms) / (alpha - 1.0))
}
