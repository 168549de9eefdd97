//! Enumerable learning problems: loss tables, canonical learners, the
//! standard system `(W, Zⁿ)` and the random-subset system `(W, Z̃, S)`.

mod learners;
mod loss;
pub mod problem;
mod standard;
mod subset;

pub use learners::{
    constant_kernel, erm_kernel, gibbs_kernel, identity_kernel, LearnerSpec, TieRule,
};
pub use loss::{delta_constant, range_constant, LossTable, RangeConstant, RangeMode};
pub use problem::Problem;
pub use standard::{assemble_standard, StandardSystem};
pub use subset::{assemble_subset, SubsetSystem};

/// Largest number of joint atoms a system may enumerate.
pub const ENUMERATION_BUDGET: u64 = 5_000_000;

pub(crate) fn check_budget(atoms: u128) -> crate::Result<()> {
    if atoms > ENUMERATION_BUDGET as u128 {
        return Err(crate::Error::BudgetExceeded {
            atoms,
            limit: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Base-`k` digits of `index`, most significant first.
pub(crate) fn digits(mut index: usize, k: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for d in out.iter_mut().rev() {
        *d = index % k;
        index /= k;
    }
    out
}

pub(crate) fn undigits(digits: &[usize], k: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * k + d)
}
