//! Information densities and the quantities derived from them, in the
//! standard and the random-subset setting.
//!
//! Every function that takes a system honours its reference marginal
//! (`Q_W` or `Q_{W|Z̃}`) where the quantity is defined through the
//! information density. Leakages and α-mutual informations do not depend
//! on the reference and always use the learner's own conditionals.

mod conditional;
mod density;
mod divergence;
mod order;
mod standard;

pub use conditional::{
    cond_alpha_mi, cond_maximal_leakage, cond_mutual_information, cond_renyi_divergence,
    conditional_density, posterior_kl_subset, supersample_mutual_information,
};
pub use density::{density, DensityTable, TailSteps};
pub use divergence::{kl, renyi_divergence};
pub use order::Order;
pub use standard::{
    alpha_mi, information_density, leakage_of_kernel, max_information, maximal_leakage,
    mutual_information, posterior_kl, renyi_information,
};

/// Orders within this distance of 1 are evaluated as the `α → 1` limit.
pub const ALPHA_ONE_TOL: f64 = 1e-6;

pub(crate) fn check_alpha(alpha: f64) -> crate::Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(crate::Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "order must be finite and positive",
        })
    }
}

/// `central_moment(tbl, t)`: `t`-th root of the `t`-th central moment of
/// the density, or `ess sup |ι − E ι|` for `t = ∞`.
pub fn central_moment(tbl: &DensityTable, t: Order) -> crate::Result<f64> {
    tbl.central_moment(t)
}

/// `E^{1/t}[Xᵗ]` for a nonnegative variable given by values and masses;
/// the support maximum for `t = ∞`.
pub fn lt_norm(values: &[f64], masses: &[f64], t: Order) -> crate::Result<f64> {
    use crate::prob::logspace::{ln_mass, log_sum_exp};
    t.check()?;
    debug_assert_eq!(values.len(), masses.len());
    let support = || values.iter().zip(masses).filter(|(_, &m)| m > 0.0);
    match t {
        Order::Infinite => support()
            .map(|(&v, _)| v)
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.max(v)))
            })
            .ok_or(crate::Error::EmptySupport),
        Order::Finite(t) => {
            let terms: Vec<f64> = support()
                .map(|(&v, &m)| m.ln() + t * ln_mass(v.abs()))
                .collect();
            if terms.is_empty() {
                return Err(crate::Error::EmptySupport);
            }
            Ok((log_sum_exp(&terms) / t).exp())
        }
    }
}
