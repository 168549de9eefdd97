use super::{check_alpha, DensityTable, ALPHA_ONE_TOL};
use crate::models::StandardSystem;
use crate::prob::logspace::{kahan_sum, ln_mass, log_sum_exp};
use crate::prob::{FiniteDistribution, Kernel};
use crate::{Error, Result};

/// `ι(w, z) = log P(w|z)/Q_W(w)` on the support of `P_WZ`.
pub fn information_density(sys: &StandardSystem) -> Result<DensityTable> {
    let mut t = DensityTable::with_capacity(sys.n_atoms());
    let label = |a: usize| sys.joint().tuple_label(a);
    for w in 0..sys.n_hypotheses() {
        let lq_w = sys.reference().log_mass(w);
        for x in 0..sys.n_samples() {
            let lz = sys.samples().log_mass(x);
            t.push(sys.atom(w, x), sys.joint_log_mass(w, x), lq_w + lz, label)?;
        }
    }
    Ok(t)
}

/// `E_{P_WZ}[ι]`, which is `I(W; Z)` for the exact marginal.
pub fn mutual_information(sys: &StandardSystem) -> Result<f64> {
    Ok(information_density(sys)?.mean())
}

/// `D_α(P_WZ ‖ Q_W P_Z)`.
pub fn renyi_information(sys: &StandardSystem, alpha: f64) -> Result<f64> {
    information_density(sys)?.renyi(alpha)
}

/// `D(P_{W|z} ‖ Q_W)` for the sample vector `x`.
pub fn posterior_kl(sys: &StandardSystem, x: usize) -> Result<f64> {
    let mut terms = Vec::with_capacity(sys.n_hypotheses());
    for w in 0..sys.n_hypotheses() {
        let p = sys.cond(w, x);
        if p > 0.0 {
            let lq = sys.reference().log_mass(w);
            if lq == f64::NEG_INFINITY {
                return Err(Error::AbsoluteContinuityViolation(format!(
                    "hypothesis {:?} is reachable from {:?} but has reference mass 0",
                    sys.pw().label(w),
                    sys.samples().label(x)
                )));
            }
            terms.push(p * (p.ln() - lq));
        }
    }
    Ok(kahan_sum(terms))
}

/// Sibson's α-mutual information,
/// `(α/(α−1)) log Σ_w (Σ_z P(z) P(w|z)^α)^{1/α}`.
///
/// Orders within [`crate::info::ALPHA_ONE_TOL`] of 1 return `I(W; Z)` with
/// the exact marginal.
pub fn alpha_mi(sys: &StandardSystem, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
        let exact = if sys.uses_auxiliary() {
            information_density(&sys.clone().with_auxiliary(sys.pw().clone())?)?
        } else {
            information_density(sys)?
        };
        return Ok(exact.mean());
    }
    let per_w: Vec<f64> = (0..sys.n_hypotheses())
        .map(|w| {
            let inner: Vec<f64> = sys
                .samples()
                .support()
                .map(|x| sys.samples().log_mass(x) + alpha * ln_mass(sys.cond(w, x)))
                .collect();
            log_sum_exp(&inner) / alpha
        })
        .collect();
    Ok(alpha / (alpha - 1.0) * log_sum_exp(&per_w))
}

/// `log Σ_w max_{x ∈ supp(law)} K(w | x)` for a kernel and an input law.
pub fn leakage_of_kernel(kernel: &Kernel, law: &FiniteDistribution) -> Result<f64> {
    if kernel.inputs() != law.labels() {
        return Err(Error::DimensionMismatch(
            "input law must live on the kernel inputs".into(),
        ));
    }
    let support: Vec<usize> = law.support().collect();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let total = kahan_sum((0..kernel.n_outputs()).map(|w| {
        support
            .iter()
            .map(|&x| kernel.prob(x, w))
            .fold(0.0, f64::max)
    }));
    Ok(total.ln())
}

/// `L(Z → W) = log Σ_w max_{z ∈ supp P_Z} P(w | z)`.
pub fn maximal_leakage(sys: &StandardSystem) -> Result<f64> {
    leakage_of_kernel(sys.learner(), sys.samples())
}

/// `ess sup ι`.
pub fn max_information(sys: &StandardSystem) -> Result<f64> {
    information_density(sys)?.ess_sup()
}
