use serde::Serialize;

use crate::models::{StandardSystem, SubsetSystem};
use crate::prob::logspace::kahan_sum;

/// Exact law of a real-valued function of the joint atoms, stored as
/// sorted distinct values with their masses.
///
/// Values closer than `1e-12` are merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenDistribution {
    values: Vec<f64>,
    masses: Vec<f64>,
}

const MERGE_TOL: f64 = 1e-12;

impl GenDistribution {
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.retain(|&(_, m)| m > 0.0);
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::new();
        let mut masses: Vec<f64> = Vec::new();
        for (v, m) in pairs {
            match values.last() {
                Some(&last) if v - last <= MERGE_TOL => *masses.last_mut().unwrap() += m,
                _ => {
                    values.push(v);
                    masses.push(m);
                }
            }
        }
        Self { values, masses }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mean(&self) -> f64 {
        kahan_sum(self.values.iter().zip(&self.masses).map(|(v, m)| v * m))
    }

    /// Smallest attained value `v` with `P[X ≤ v] ≥ p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for (v, m) in self.values.iter().zip(&self.masses) {
            acc += m;
            if acc >= p - MERGE_TOL {
                return *v;
            }
        }
        *self.values.last().unwrap_or(&f64::NAN)
    }

    /// `P[X > x]`.
    pub fn exceedance(&self, x: f64) -> f64 {
        kahan_sum(
            self.values
                .iter()
                .zip(&self.masses)
                .filter(|(v, _)| **v > x)
                .map(|(_, m)| *m),
        )
    }

    /// Law of `|X|`.
    pub fn abs(&self) -> Self {
        Self::from_pairs(
            self.values
                .iter()
                .zip(&self.masses)
                .map(|(v, m)| (v.abs(), *m))
                .collect(),
        )
    }
}

/// Law of `gen(W, Z)` under `P_WZ`.
pub fn exact_gen_distribution(sys: &StandardSystem) -> GenDistribution {
    let mut pairs = Vec::with_capacity(sys.n_atoms());
    for w in 0..sys.n_hypotheses() {
        for x in sys.samples().support() {
            pairs.push((sys.gen(w, x), sys.joint_mass(w, x)));
        }
    }
    GenDistribution::from_pairs(pairs)
}

fn subset_law<F: Fn(usize, usize, usize) -> f64>(sys: &SubsetSystem, f: F) -> GenDistribution {
    let mut pairs = Vec::new();
    for w in 0..sys.n_hypotheses() {
        for zt in sys.supersamples().support() {
            for s in 0..sys.n_selectors() {
                pairs.push((f(w, zt, s), sys.joint_mass(w, zt, s)));
            }
        }
    }
    GenDistribution::from_pairs(pairs)
}

/// Law of `ĝen(W, Z̃, S)` under `P_{WZ̃S}`.
pub fn exact_gen_hat_distribution(sys: &SubsetSystem) -> GenDistribution {
    subset_law(sys, |w, zt, s| sys.gen_hat(w, zt, s))
}

/// Law of `gen(W, Z(S))` under `P_{WZ̃S}`.
pub fn exact_subset_gen_distribution(sys: &SubsetSystem) -> GenDistribution {
    subset_law(sys, |w, zt, s| sys.gen(w, zt, s))
}
