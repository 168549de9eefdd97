//! Finite probability machinery: distributions, kernels, joint tables,
//! log-space reductions and the JSON document loaders.

mod distribution;
pub mod io;
mod joint;
mod kernel;
pub mod logspace;

pub use distribution::{ess_sup, FiniteDistribution};
pub use joint::{Axis, JointTable};
pub use kernel::Kernel;

/// Relative deviation from unit total mass that loaders silently normalize.
pub const NORMALIZE_TOL: f64 = 1e-9;

/// Separator used when a label is built from a vector of component labels.
pub const VECTOR_SEP: &str = ",";

/// Separator used between the coordinates of a joint-table label.
pub const TUPLE_SEP: &str = "|";

pub(crate) fn validate_and_normalize(probs: &[f64]) -> crate::Result<Vec<f64>> {
    use crate::Error;
    if probs.is_empty() {
        return Err(Error::InvalidDistribution("no outcomes".into()));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "mass {p} at outcome {i} is not a finite nonnegative number"
            )));
        }
    }
    let total = logspace::kahan_sum(probs.iter().copied());
    if (total - 1.0).abs() >= NORMALIZE_TOL {
        return Err(Error::InvalidDistribution(format!(
            "masses sum to {total}, deviation from 1 exceeds {NORMALIZE_TOL}"
        )));
    }
    Ok(probs.iter().map(|p| p / total).collect())
}
