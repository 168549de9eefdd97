#![allow(dead_code)]

use infodens::models::{
    assemble_standard, assemble_subset, constant_kernel, erm_kernel, identity_kernel, TieRule,
};
use infodens::verify::RandomInstances;
use infodens::{FiniteDistribution, LossTable, StandardSystem, SubsetSystem};

pub const SEED: u64 = 0x5eed_2024;

fn binary() -> (FiniteDistribution, LossTable) {
    (
        FiniteDistribution::uniform(["0", "1"]).unwrap(),
        LossTable::zero_one(&["0", "1"]),
    )
}

/// Uniform bits, n = 2, ERM on 0/1 loss with lowest-index ties.
pub fn inst_a() -> StandardSystem {
    let (pz, loss) = binary();
    let k = erm_kernel(&loss, 2, TieRule::LowestIndex).unwrap();
    assemble_standard(pz, 2, k, loss).unwrap()
}

/// Uniform bits, n = 1, learner returns the selected sample.
pub fn inst_b() -> SubsetSystem {
    let (pz, loss) = binary();
    let k = identity_kernel(&loss, 1).unwrap();
    assemble_subset(pz, 1, k, loss).unwrap()
}

/// Uniform bits, n = 2, learner ignores the data and flips a fair coin.
pub fn inst_c() -> StandardSystem {
    let (pz, loss) = binary();
    let k = constant_kernel(&loss, 2, &[0.5, 0.5]).unwrap();
    assemble_standard(pz, 2, k, loss).unwrap()
}

/// Random-subset analogue of [`inst_c`], with n = 1.
pub fn inst_c_subset() -> SubsetSystem {
    let (pz, loss) = binary();
    let k = constant_kernel(&loss, 1, &[0.5, 0.5]).unwrap();
    assemble_subset(pz, 1, k, loss).unwrap()
}

pub fn random_standard(count: u64) -> Vec<StandardSystem> {
    let r = RandomInstances::new(SEED);
    (0..count).map(|i| r.standard(i).unwrap()).collect()
}

pub fn random_subset(count: u64) -> Vec<SubsetSystem> {
    let r = RandomInstances::new(SEED ^ 0xff);
    (0..count).map(|i| r.subset(i).unwrap()).collect()
}

/// Brute-force quantities built from the raw conditionals with plain
/// loops, independent of the library's density tables.
pub mod naive {
    use super::*;

    pub fn joint(sys: &StandardSystem) -> Vec<Vec<f64>> {
        (0..sys.n_hypotheses())
            .map(|w| {
                (0..sys.n_samples())
                    .map(|x| sys.samples().mass(x) * sys.cond(w, x))
                    .collect()
            })
            .collect()
    }

    pub fn pw(sys: &StandardSystem) -> Vec<f64> {
        joint(sys).iter().map(|r| r.iter().sum()).collect()
    }

    pub fn mi(sys: &StandardSystem) -> f64 {
        let j = joint(sys);
        let pw = pw(sys);
        let mut acc = 0.0;
        for (w, row) in j.iter().enumerate() {
            for (x, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    acc += p * (p / (pw[w] * sys.samples().mass(x))).ln();
                }
            }
        }
        acc
    }

    pub fn renyi(sys: &StandardSystem, alpha: f64) -> f64 {
        let j = joint(sys);
        let pw = pw(sys);
        let mut acc = 0.0;
        for (w, row) in j.iter().enumerate() {
            for (x, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    let q = pw[w] * sys.samples().mass(x);
                    acc += p.powf(alpha) * q.powf(1.0 - alpha);
                }
            }
        }
        acc.ln() / (alpha - 1.0)
    }

    pub fn leakage(sys: &StandardSystem) -> f64 {
        (0..sys.n_hypotheses())
            .map(|w| {
                (0..sys.n_samples())
                    .filter(|&x| sys.samples().mass(x) > 0.0)
                    .map(|x| sys.cond(w, x))
                    .fold(0.0, f64::max)
            })
            .sum::<f64>()
            .ln()
    }

    pub fn sibson(sys: &StandardSystem, alpha: f64) -> f64 {
        let s: f64 = (0..sys.n_hypotheses())
            .map(|w| {
                (0..sys.n_samples())
                    .map(|x| sys.samples().mass(x) * sys.cond(w, x).powf(alpha))
                    .sum::<f64>()
                    .powf(1.0 / alpha)
            })
            .sum();
        alpha / (alpha - 1.0) * s.ln()
    }

    /// Values and masses of `ι(W, Z)` under `P_WZ`.
    pub fn density(sys: &StandardSystem) -> Vec<(f64, f64)> {
        let j = joint(sys);
        let pw = pw(sys);
        let mut out = Vec::new();
        for (w, row) in j.iter().enumerate() {
            for (x, &p) in row.iter().enumerate() {
                if p > 0.0 {
                    out.push(((p / (pw[w] * sys.samples().mass(x))).ln(), p));
                }
            }
        }
        out
    }

    pub fn central_moment(d: &[(f64, f64)], t: f64) -> f64 {
        let m: f64 = d.iter().map(|(v, p)| v * p).sum();
        d.iter()
            .map(|(v, p)| p * (v - m).abs().powf(t))
            .sum::<f64>()
            .powf(1.0 / t)
    }

    /// `P(w | z̃)` recomputed from the learner conditionals.
    pub fn cond_marginal(sys: &SubsetSystem, w: usize, zt: usize) -> f64 {
        (0..sys.n_selectors())
            .map(|s| sys.cond(w, zt, s))
            .sum::<f64>()
            / sys.n_selectors() as f64
    }

    /// Values and masses of `ι(W, S | Z̃)`.
    pub fn cond_density(sys: &SubsetSystem) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let ps = 1.0 / sys.n_selectors() as f64;
        for w in 0..sys.n_hypotheses() {
            for zt in 0..sys.n_supersamples() {
                let pz = sys.supersamples().mass(zt);
                let m = cond_marginal(sys, w, zt);
                for s in 0..sys.n_selectors() {
                    let c = sys.cond(w, zt, s);
                    if pz * c > 0.0 {
                        out.push(((c / m).ln(), pz * ps * c));
                    }
                }
            }
        }
        out
    }

    pub fn cmi(sys: &SubsetSystem) -> f64 {
        cond_density(sys).iter().map(|(v, p)| v * p).sum()
    }

    pub fn cond_renyi(sys: &SubsetSystem, alpha: f64) -> f64 {
        // E_P[e^{(α−1)ι}]
        let s: f64 = cond_density(sys)
            .iter()
            .map(|(v, p)| p * ((alpha - 1.0) * v).exp())
            .sum();
        s.ln() / (alpha - 1.0)
    }

    pub fn cond_leakage(sys: &SubsetSystem) -> f64 {
        (0..sys.n_supersamples())
            .filter(|&zt| sys.supersamples().mass(zt) > 0.0)
            .map(|zt| {
                (0..sys.n_hypotheses())
                    .map(|w| {
                        (0..sys.n_selectors())
                            .map(|s| sys.cond(w, zt, s))
                            .fold(0.0, f64::max)
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
            .ln()
    }

    pub fn cond_alpha_mi(sys: &SubsetSystem, alpha: f64) -> f64 {
        let ps = 1.0 / sys.n_selectors() as f64;
        let s: f64 = (0..sys.n_supersamples())
            .map(|zt| {
                let inner: f64 = (0..sys.n_hypotheses())
                    .map(|w| {
                        (0..sys.n_selectors())
                            .map(|s| ps * sys.cond(w, zt, s).powf(alpha))
                            .sum::<f64>()
                            .powf(1.0 / alpha)
                    })
                    .sum();
                sys.supersamples().mass(zt) * inner.powf(alpha)
            })
            .sum();
        s.ln() / (alpha - 1.0)
    }
}
