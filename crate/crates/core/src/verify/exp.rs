use serde::Serialize;

use super::EXP_TOL;
use crate::bounds::{standard_scale, subset_scale};
use crate::info::{conditional_density, information_density};
use crate::models::{StandardSystem, SubsetSystem};
use crate::Result;

/// Largest value of the exponential expectation over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpCheck {
    pub worst: f64,
    pub worst_lambda: f64,
    pub holds: bool,
}

/// `{0, ±0.1, ±1, ±10, ±100}·unit`, where the unit is `n/σ²` or `n/C`.
pub fn lambda_grid(unit: f64) -> Vec<f64> {
    let mut grid = vec![0.0];
    for m in [0.1, 1.0, 10.0, 100.0] {
        grid.push(-m * unit);
        grid.push(m * unit);
    }
    grid
}

fn worst_over<F: Fn(f64) -> f64>(grid: &[f64], log_value: F) -> ExpCheck {
    let (worst_lambda, worst_log) =
        grid.iter()
            .map(|&l| (l, log_value(l)))
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, cur| {
                if cur.1 > acc.1 || acc.0.is_nan() {
                    cur
                } else {
                    acc
                }
            });
    let worst = worst_log.exp();
    ExpCheck {
        worst,
        worst_lambda,
        holds: worst <= 1.0 + EXP_TOL,
    }
}

/// `max_λ E_{P_WZ}[exp(λ·gen − λ²σ²/(2n) − ι)]` over the grid, by exact
/// summation.
pub fn check_exp_inequality_standard(sys: &StandardSystem, grid: &[f64]) -> Result<ExpCheck> {
    check_exp_inequality_standard_with(sys, grid, sys.loss().sigma())
}

/// As [`check_exp_inequality_standard`] with an explicit `σ`, which may
/// understate the loss's true sub-Gaussian parameter.
pub fn check_exp_inequality_standard_with(
    sys: &StandardSystem,
    grid: &[f64],
    sigma: f64,
) -> Result<ExpCheck> {
    let tbl = information_density(sys)?;
    let nx = sys.n_samples();
    let gens: Vec<f64> = tbl
        .atoms()
        .iter()
        .map(|&a| sys.gen(a / nx, a % nx))
        .collect();
    let pos = |a: usize| tbl.atoms().binary_search(&a).expect("atom on support");
    let var = sigma * sigma / (2.0 * sys.n() as f64);
    Ok(worst_over(grid, |l| {
        tbl.log_tilted_mean(|a| l * gens[pos(a)] - l * l * var)
    }))
}

/// `max_λ E_{P_WZ̃S}[exp(λ·ĝen − λ²C/(2n) − ι(W, S | Z̃))]` over the grid.
pub fn check_exp_inequality_subset(sys: &SubsetSystem, grid: &[f64]) -> Result<ExpCheck> {
    check_exp_inequality_subset_with(sys, grid, sys.range_constant().value)
}

/// As [`check_exp_inequality_subset`] with an explicit constant `C`.
pub fn check_exp_inequality_subset_with(
    sys: &SubsetSystem,
    grid: &[f64],
    c: f64,
) -> Result<ExpCheck> {
    let tbl = conditional_density(sys)?;
    let n_sel = sys.n_selectors();
    let nz = sys.n_supersamples();
    let gens: Vec<f64> = tbl
        .atoms()
        .iter()
        .map(|&a| {
            let (wz, s) = (a / n_sel, a % n_sel);
            sys.gen_hat(wz / nz, wz % nz, s)
        })
        .collect();
    let pos = |a: usize| tbl.atoms().binary_search(&a).expect("atom on support");
    let var = c / (2.0 * sys.n() as f64);
    Ok(worst_over(grid, |l| {
        tbl.log_tilted_mean(|a| l * gens[pos(a)] - l * l * var)
    }))
}

/// [`lambda_grid`] in units of `n/σ²`.
pub fn standard_grid(sys: &StandardSystem) -> Vec<f64> {
    lambda_grid(2.0 / standard_scale(sys))
}

/// [`lambda_grid`] in units of `n/C`.
pub fn subset_grid(sys: &SubsetSystem) -> Vec<f64> {
    lambda_grid(2.0 / subset_scale(sys))
}
