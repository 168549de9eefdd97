use crate::prob::logspace::kahan_sum;
use crate::prob::FiniteDistribution;
use crate::{Error, Result};

/// Loss values `ℓ(w, z)` with a declared range `[a, b]` and sub-Gaussian
/// parameter σ.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    hypotheses: Vec<String>,
    instances: Vec<String>,
    values: Vec<f64>,
    lower: f64,
    upper: f64,
    sigma: f64,
}

impl LossTable {
    /// `rows[w][z]` is the loss of hypothesis `w` on instance `z`. σ
    /// defaults to `(b − a)/2`.
    pub fn new(
        hypotheses: Vec<String>,
        instances: Vec<String>,
        rows: Vec<Vec<f64>>,
        range: (f64, f64),
    ) -> Result<Self> {
        let (a, b) = range;
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::InvalidParameter {
                name: "range",
                value: b - a,
                reason: "loss range must be a finite interval [a, b] with a ≤ b",
            });
        }
        if rows.len() != hypotheses.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} hypotheses but {} loss rows",
                hypotheses.len(),
                rows.len()
            )));
        }
        if hypotheses.is_empty() || instances.is_empty() {
            return Err(Error::DimensionMismatch("empty loss table".into()));
        }
        let mut values = Vec::with_capacity(hypotheses.len() * instances.len());
        for (w, row) in rows.into_iter().enumerate() {
            if row.len() != instances.len() {
                return Err(Error::DimensionMismatch(format!(
                    "loss row {:?} has {} entries for {} instances",
                    hypotheses[w],
                    row.len(),
                    instances.len()
                )));
            }
            for (z, v) in row.into_iter().enumerate() {
                if !(v >= a && v <= b) {
                    return Err(Error::InvalidProblem(format!(
                        "loss({}, {}) = {v} outside [{a}, {b}]",
                        hypotheses[w], instances[z]
                    )));
                }
                values.push(v);
            }
        }
        Ok(Self {
            hypotheses,
            instances,
            values,
            lower: a,
            upper: b,
            sigma: (b - a) / 2.0,
        })
    }

    /// 0/1 loss on a common label set: `ℓ(w, z) = 1[w ≠ z]`.
    pub fn zero_one<S: AsRef<str>>(labels: &[S]) -> Self {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let k = labels.len();
        let rows = (0..k)
            .map(|w| (0..k).map(|z| if w == z { 0.0 } else { 1.0 }).collect())
            .collect();
        Self::new(labels.clone(), labels, rows, (0.0, 1.0)).expect("0/1 table is valid")
    }

    /// Overrides σ. Values below `(b − a)/2` are rejected.
    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        let min = (self.upper - self.lower) / 2.0;
        if !sigma.is_finite() || sigma < min {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: sigma,
                reason: "sub-Gaussian parameter must be finite and at least (b - a)/2",
            });
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn hypotheses(&self) -> &[String] {
        &self.hypotheses
    }

    pub fn instances(&self) -> &[String] {
        &self.instances
    }

    pub fn n_hypotheses(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn n_instances(&self) -> usize {
        self.instances.len()
    }

    pub fn loss(&self, w: usize, z: usize) -> f64 {
        self.values[w * self.instances.len() + z]
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Mean loss of `w` over the instance indices in `sample`.
    pub fn empirical(&self, w: usize, sample: &[usize]) -> f64 {
        kahan_sum(sample.iter().map(|&z| self.loss(w, z))) / sample.len() as f64
    }

    /// `E_{P_Z}[ℓ(w, Z)]`.
    pub fn population(&self, w: usize, pz: &FiniteDistribution) -> f64 {
        pz.expectation(
            &(0..self.instances.len())
                .map(|z| self.loss(w, z))
                .collect::<Vec<_>>(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeMode {
    BoundedRange,
    DeltaExpectation,
}

/// The constant that multiplies `2/n` in the random-subset bounds.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RangeConstant {
    pub value: f64,
    pub mode: RangeMode,
}

/// `(b − a)²` for a bounded loss.
pub fn range_constant(loss: &LossTable) -> RangeConstant {
    RangeConstant {
        value: loss.width().powi(2),
        mode: RangeMode::BoundedRange,
    }
}

/// `E[Δ(Z₁, Z₂)²]` for independent `Z₁, Z₂ ~ P_Z`, where `delta[z1][z2]`
/// must dominate `|ℓ(w, z1) − ℓ(w, z2)|` for every hypothesis.
pub fn delta_constant(
    delta: &[Vec<f64>],
    loss: &LossTable,
    pz: &FiniteDistribution,
) -> Result<RangeConstant> {
    let k = loss.n_instances();
    if delta.len() != k || delta.iter().any(|r| r.len() != k) || pz.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "Δ must be a {k}×{k} table matching the instance space"
        )));
    }
    for (z1, row) in delta.iter().enumerate() {
        for (z2, &d) in row.iter().enumerate() {
            for w in 0..loss.n_hypotheses() {
                let gap = (loss.loss(w, z1) - loss.loss(w, z2)).abs();
                if d.is_nan() || d < gap {
                    return Err(Error::InvalidProblem(format!(
                        "Δ({}, {}) = {d} is below |ℓ({}, ·)| gap {gap}",
                        loss.instances()[z1],
                        loss.instances()[z2],
                        loss.hypotheses()[w]
                    )));
                }
            }
        }
    }
    let p = pz.masses();
    let value = kahan_sum(
        (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| p[a] * p[b] * delta[a][b] * delta[a][b]),
    );
    Ok(RangeConstant {
        value,
        mode: RangeMode::DeltaExpectation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_one_constant_is_one() {
        let l = LossTable::zero_one(&["0", "1"]);
        assert_eq!(range_constant(&l).value, 1.0);
        assert_eq!(l.sigma(), 0.5);
    }

    #[test]
    fn delta_constant_four_term_sum() {
        let l = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let d = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let c = delta_constant(&d, &l, &pz).unwrap();
        // 0 + 1/4 + 1/4 + 0
        assert!((c.value - 0.5).abs() < 1e-15);
        assert_eq!(c.mode, RangeMode::DeltaExpectation);
    }

    #[test]
    fn dominated_delta_is_rejected() {
        let l = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let d = vec![vec![0.0, 0.5], vec![0.5, 0.0]];
        assert!(delta_constant(&d, &l, &pz).is_err());
    }

    #[test]
    fn out_of_range_losses_and_small_sigma_are_rejected() {
        let h = vec!["a".to_string()];
        let z = vec!["x".to_string()];
        assert!(LossTable::new(h.clone(), z.clone(), vec![vec![1.5]], (0.0, 1.0)).is_err());
        let l = LossTable::new(h, z, vec![vec![0.5]], (0.0, 1.0)).unwrap();
        assert!(l.clone().with_sigma(0.4).is_err());
        assert_eq!(l.with_sigma(1.0).unwrap().sigma(), 1.0);
    }
}
