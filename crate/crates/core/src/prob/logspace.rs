//! Numerically stable reductions over log-domain values.

/// `ln Σ exp(xᵢ)` with the maximum shifted out. Returns `-∞` for an empty
/// input or when every term is `-∞`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let shifted = kahan_sum(values.iter().map(|&v| (v - max).exp()));
    max + shifted.ln()
}

/// `ln Σ wᵢ·exp(xᵢ)` for nonnegative weights given as log-weights.
pub fn log_sum_exp_weighted(log_weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(log_weights.len(), values.len());
    let terms: Vec<f64> = log_weights
        .iter()
        .zip(values)
        .map(|(&lw, &v)| if lw == f64::NEG_INFINITY { lw } else { lw + v })
        .collect();
    log_sum_exp(&terms)
}

/// Compensated summation; the reduction order is the iteration order.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Natural log that maps exact zeros to `-∞` and keeps the sign convention
/// used for masses.
pub fn ln_mass(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else {
        p.ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_naive_on_moderate_values() {
        let xs = [0.1f64, -2.0, 3.5];
        let naive = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-14);
    }

    #[test]
    fn lse_survives_extreme_magnitudes() {
        let xs = [-1000.0, -1000.0];
        assert!((log_sum_exp(&xs) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        let ys = [800.0, 0.0];
        assert!((log_sum_exp(&ys) - 800.0).abs() < 1e-12);
    }

    #[test]
    fn lse_of_nothing_is_neg_infinity() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
    }

    #[test]
    fn weighted_lse_skips_zero_weights() {
        let lw = [f64::NEG_INFINITY, 0.5f64.ln()];
        let v = [f64::INFINITY, 2.0];
        assert!((log_sum_exp_weighted(&lw, &v) - (0.5f64.ln() + 2.0)).abs() < 1e-14);
    }
}
