use std::collections::BTreeMap;

use serde::Deserialize;

use super::{check_budget, digits, LossTable};
use crate::prob::io::{Prob, RowDoc};
use crate::prob::logspace::log_sum_exp;
use crate::prob::{Kernel, VECTOR_SEP};
use crate::{Error, Result};

/// Tie-breaking rule for empirical risk minimization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    LowestIndex,
    #[serde(alias = "uniform-over-argmin")]
    Uniform,
}

/// Learner description as it appears in a problem file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LearnerSpec {
    Gibbs {
        beta: f64,
    },
    Erm {
        #[serde(default)]
        tie: TieRule,
    },
    Constant {
        probs: Vec<Prob>,
    },
    Identity,
    CustomKernel {
        rows: BTreeMap<String, RowDoc>,
    },
}

impl LearnerSpec {
    pub fn build(&self, loss: &LossTable, n: usize) -> Result<Kernel> {
        match self {
            LearnerSpec::Gibbs { beta } => gibbs_kernel(loss, n, *beta),
            LearnerSpec::Erm { tie } => erm_kernel(loss, n, *tie),
            LearnerSpec::Constant { probs } => {
                let p = probs.iter().map(Prob::value).collect::<Result<Vec<_>>>()?;
                constant_kernel(loss, n, &p)
            }
            LearnerSpec::Identity => identity_kernel(loss, n),
            LearnerSpec::CustomKernel { rows } => {
                let inputs = sample_labels(loss, n)?;
                let doc = crate::prob::io::KernelDoc { rows: rows.clone() };
                let parsed = doc.to_kernel(Some(loss.hypotheses()))?;
                let dense = inputs
                    .iter()
                    .map(|x| {
                        parsed
                            .inputs()
                            .iter()
                            .position(|i| i == x)
                            .map(|i| parsed.row(i).to_vec())
                            .ok_or_else(|| {
                                Error::InvalidProblem(format!("custom kernel has no row for {x:?}"))
                            })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if parsed.n_inputs() != inputs.len() {
                    return Err(Error::InvalidProblem(
                        "custom kernel has rows for unknown sample vectors".into(),
                    ));
                }
                Kernel::new(inputs, loss.hypotheses().to_vec(), dense)
            }
        }
    }
}

/// Labels of all length-`n` sample vectors, in the order used by
/// [`crate::FiniteDistribution::iid_power`].
pub(crate) fn sample_labels(loss: &LossTable, n: usize) -> Result<Vec<String>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sample size must be at least 1",
        });
    }
    let k = loss.n_instances();
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    check_budget(count)?;
    Ok((0..count as usize)
        .map(|x| {
            digits(x, k, n)
                .iter()
                .map(|&d| loss.instances()[d].as_str())
                .collect::<Vec<_>>()
                .join(VECTOR_SEP)
        })
        .collect())
}

fn kernel_from_rows<F>(loss: &LossTable, n: usize, mut row: F) -> Result<Kernel>
where
    F: FnMut(&[usize]) -> Vec<f64>,
{
    let inputs = sample_labels(loss, n)?;
    let k = loss.n_instances();
    Kernel::from_fn(inputs, loss.hypotheses().to_vec(), |x| {
        row(&digits(x, k, n))
    })
}

/// Gibbs posterior `P(w | z) ∝ exp(−β·n·L_z(w))` with a uniform prior.
pub fn gibbs_kernel(loss: &LossTable, n: usize, beta: f64) -> Result<Kernel> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "inverse temperature must be finite and nonnegative",
        });
    }
    kernel_from_rows(loss, n, |sample| {
        let logits: Vec<f64> = (0..loss.n_hypotheses())
            .map(|w| -beta * n as f64 * loss.empirical(w, sample))
            .collect();
        let norm = log_sum_exp(&logits);
        logits.iter().map(|l| (l - norm).exp()).collect()
    })
}

/// Empirical risk minimizer. Losses within `1e-12` of the minimum count as
/// tied.
pub fn erm_kernel(loss: &LossTable, n: usize, tie: TieRule) -> Result<Kernel> {
    kernel_from_rows(loss, n, |sample| {
        let risks: Vec<f64> = (0..loss.n_hypotheses())
            .map(|w| loss.empirical(w, sample))
            .collect();
        let best = risks.iter().copied().fold(f64::INFINITY, f64::min);
        let argmin: Vec<usize> = (0..risks.len())
            .filter(|&w| risks[w] - best <= 1e-12)
            .collect();
        let mut row = vec![0.0; risks.len()];
        match tie {
            TieRule::LowestIndex => row[argmin[0]] = 1.0,
            TieRule::Uniform => {
                for &w in &argmin {
                    row[w] = 1.0 / argmin.len() as f64;
                }
            }
        }
        row
    })
}

/// Learner that ignores its data.
pub fn constant_kernel(loss: &LossTable, n: usize, probs: &[f64]) -> Result<Kernel> {
    if probs.len() != loss.n_hypotheses() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} hypotheses",
            probs.len(),
            loss.n_hypotheses()
        )));
    }
    kernel_from_rows(loss, n, |_| probs.to_vec())
}

/// `W = Z₁` for a single training sample; every instance label must also be
/// a hypothesis label.
pub fn identity_kernel(loss: &LossTable, n: usize) -> Result<Kernel> {
    if n != 1 {
        return Err(Error::InvalidProblem(format!(
            "identity learner needs n = 1, got {n}"
        )));
    }
    let map = loss
        .instances()
        .iter()
        .map(|z| {
            loss.hypotheses()
                .iter()
                .position(|w| w == z)
                .ok_or_else(|| Error::UnknownLabel(z.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    kernel_from_rows(loss, n, |sample| {
        let mut row = vec![0.0; loss.n_hypotheses()];
        row[map[sample[0]]] = 1.0;
        row
    })
}
