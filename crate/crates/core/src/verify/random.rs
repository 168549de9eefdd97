use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::models::{assemble_standard, assemble_subset, gibbs_kernel};
use crate::{FiniteDistribution, LossTable, Result, StandardSystem, SubsetSystem};

/// Largest inverse temperature drawn for random Gibbs learners.
pub const GIBBS_BETA_MAX: f64 = 8.0;

struct Draw {
    pz: FiniteDistribution,
    loss: LossTable,
    n: usize,
    beta: f64,
}

fn draw(rng: &mut ChaCha8Rng) -> Result<Draw> {
    let k = rng.random_range(2..=3usize);
    let nw = rng.random_range(2..=4usize);
    let n = rng.random_range(1..=3usize);
    let beta = rng.random_range(0.0..=GIBBS_BETA_MAX);
    let weights: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let labels: Vec<String> = (0..k).map(|z| z.to_string()).collect();
    let hyps: Vec<String> = (0..nw).map(|w| format!("h{w}")).collect();
    let rows: Vec<Vec<f64>> = (0..nw)
        .map(|_| (0..k).map(|_| rng.random::<f64>()).collect())
        .collect();
    Ok(Draw {
        pz: FiniteDistribution::from_probs(labels.clone(), &probs)?,
        loss: LossTable::new(hyps, labels, rows, (0.0, 1.0))?,
        n,
        beta,
    })
}

/// A standard-setting instance: `|Z| ∈ {2,3}`, `|W| ∈ {2,3,4}`,
/// `n ∈ {1,2,3}`, Dirichlet(1) `P_Z`, uniform `[0,1]` losses and a Gibbs
/// learner with `β ∈ [0, 8]`.
pub fn random_standard(rng: &mut ChaCha8Rng) -> Result<StandardSystem> {
    let d = draw(rng)?;
    let k = gibbs_kernel(&d.loss, d.n, d.beta)?;
    assemble_standard(d.pz, d.n, k, d.loss)
}

/// The random-subset analogue of [`random_standard`].
pub fn random_subset(rng: &mut ChaCha8Rng) -> Result<SubsetSystem> {
    let d = draw(rng)?;
    let k = gibbs_kernel(&d.loss, d.n, d.beta)?;
    assemble_subset(d.pz, d.n, k, d.loss)
}

/// Reproducible instance streams: instance `i` is drawn from a ChaCha8
/// generator seeded with `seed` on stream `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomInstances {
    pub seed: u64,
}

impl RandomInstances {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn rng(&self, i: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i);
        rng
    }

    pub fn standard(&self, i: u64) -> Result<StandardSystem> {
        random_standard(&mut self.rng(i))
    }

    pub fn subset(&self, i: u64) -> Result<SubsetSystem> {
        random_subset(&mut self.rng(i))
    }
}
