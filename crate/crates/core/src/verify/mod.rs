//! Ground truth by exact enumeration: laws of the generalization error,
//! coverage probabilities of every bound, the exponential inequalities the
//! bounds rest on, and the two probability lemmas they use.

mod coverage;
mod exp;
mod gaussian;
mod gen;
mod lemmas;
mod random;

pub use coverage::{coverage, profile, AnySystem, CoverageReport, Outcome, Profile};
pub use exp::{
    check_exp_inequality_standard, check_exp_inequality_standard_with, check_exp_inequality_subset,
    check_exp_inequality_subset_with, lambda_grid, standard_grid, subset_grid, ExpCheck,
};
pub use gaussian::{gaussian_mi_validation, GaussianValidation};
pub use gen::{
    exact_gen_distribution, exact_gen_hat_distribution, exact_subset_gen_distribution,
    GenDistribution,
};
pub use lemmas::{
    hoeffding_check, hoeffding_tail, strong_converse_check, ConverseCheck, HoeffdingCheck,
};
pub use random::{random_standard, random_subset, RandomInstances, GIBBS_BETA_MAX};

/// Slack allowed on an exponential-inequality value above 1.
pub const EXP_TOL: f64 = 1e-9;

/// Slack allowed on a violation probability above `δ`.
pub const COVERAGE_TOL: f64 = 1e-12;
