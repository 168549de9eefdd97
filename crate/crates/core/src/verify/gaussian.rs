use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::prob::logspace::kahan_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianValidation {
    pub closed_form: f64,
    pub estimate: f64,
    pub std_error: f64,
    /// `|estimate − closed_form| / std_error`.
    pub z_score: f64,
    pub within_3se: bool,
}

fn log_normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
}

/// Monte Carlo mean of the information density for `W = Z̄ + N(0, noise)`
/// with `Zᵢ ~ N(0, prior)` i.i.d., against the closed form
/// `I(W; Z) = ½ log(1 + prior/(n·noise))`.
pub fn gaussian_mi_validation(
    n: usize,
    noise_var: f64,
    prior_var: f64,
    samples: usize,
    seed: u64,
) -> Result<GaussianValidation> {
    for (name, v) in [("noise_var", noise_var), ("prior_var", prior_var)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                reason: "variance must be positive",
            });
        }
    }
    if n == 0 || samples < 2 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "need n ≥ 1 and at least two Monte Carlo samples",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = Normal::new(0.0, prior_var.sqrt()).expect("positive variance");
    let noise = Normal::new(0.0, noise_var.sqrt()).expect("positive variance");
    let marginal_var = noise_var + prior_var / n as f64;
    let draws: Vec<f64> = (0..samples)
        .map(|_| {
            let zbar = kahan_sum((0..n).map(|_| z.sample(&mut rng))) / n as f64;
            let w = zbar + noise.sample(&mut rng);
            log_normal_pdf(w, zbar, noise_var) - log_normal_pdf(w, 0.0, marginal_var)
        })
        .collect();
    let m = samples as f64;
    let estimate = kahan_sum(draws.iter().copied()) / m;
    let var = kahan_sum(draws.iter().map(|d| (d - estimate).powi(2))) / (m - 1.0);
    let std_error = (var / m).sqrt();
    let closed_form = 0.5 * (prior_var / (n as f64 * noise_var)).ln_1p();
    let z_score = (estimate - closed_form).abs() / std_error;
    Ok(GaussianValidation {
        closed_form,
        estimate,
        std_error,
        z_score,
        within_3se: z_score <= 3.0,
    })
}
