use super::logspace::log_sum_exp;
use super::{FiniteDistribution, TUPLE_SEP};
use crate::{Error, Result};

/// One coordinate of a joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub labels: Vec<String>,
}

impl Axis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A dense probability table over a product label space.
///
/// Atoms are stored row-major: the last axis varies fastest. Every atom of
/// the product space is present, including those with zero mass.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    axes: Vec<Axis>,
    strides: Vec<usize>,
    log_mass: Vec<f64>,
}

impl JointTable {
    pub fn new(axes: Vec<Axis>, log_mass: Vec<f64>) -> Result<Self> {
        let size: usize = axes.iter().map(Axis::len).product();
        if axes.is_empty() || size != log_mass.len() {
            return Err(Error::DimensionMismatch(format!(
                "axes span {size} atoms but {} masses given",
                log_mass.len()
            )));
        }
        let total = log_sum_exp(&log_mass);
        if !(total.exp() - 1.0).abs().lt(&super::NORMALIZE_TOL) {
            return Err(Error::InvalidDistribution(format!(
                "joint masses sum to {}",
                total.exp()
            )));
        }
        let log_mass = log_mass.into_iter().map(|v| v - total).collect();
        Ok(Self::from_parts(axes, log_mass))
    }

    pub(crate) fn from_parts(axes: Vec<Axis>, log_mass: Vec<f64>) -> Self {
        let mut strides = vec![1usize; axes.len()];
        for k in (0..axes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * axes[k + 1].len();
        }
        debug_assert_eq!(
            log_mass.len(),
            axes.iter().map(Axis::len).product::<usize>()
        );
        Self {
            axes,
            strides,
            log_mass,
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn len(&self) -> usize {
        self.log_mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_mass.is_empty()
    }

    pub fn log_masses(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn log_mass(&self, flat: usize) -> f64 {
        self.log_mass[flat]
    }

    pub fn mass(&self, flat: usize) -> f64 {
        self.log_mass[flat].exp()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.log_mass
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > f64::NEG_INFINITY)
            .map(|(i, _)| i)
    }

    pub fn coords(&self, flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(&self.axes)
            .map(|(s, a)| (flat / s) % a.len())
            .collect()
    }

    pub fn flat_index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    pub fn tuple_label(&self, flat: usize) -> String {
        self.coords(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&c, a)| a.labels[c].as_str())
            .collect::<Vec<_>>()
            .join(TUPLE_SEP)
    }

    /// Flattens the table into a distribution over tuple labels.
    pub fn to_distribution(&self) -> FiniteDistribution {
        let labels = (0..self.len()).map(|i| self.tuple_label(i));
        FiniteDistribution::from_log_masses(labels, self.log_mass.clone())
            .expect("joint table is normalized")
    }

    /// Sums out every axis not listed in `keep`. The result is labelled by
    /// the kept coordinates (joined with `|` when more than one is kept),
    /// in the order given.
    pub fn marginalize(&self, keep: &[usize]) -> Result<FiniteDistribution> {
        if keep.is_empty() {
            return Err(Error::DimensionMismatch("empty keep-set".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= self.axes.len()) {
            return Err(Error::DimensionMismatch(format!(
                "axis {bad} does not exist ({} axes)",
                self.axes.len()
            )));
        }
        let kept_shape: Vec<usize> = keep.iter().map(|&k| self.axes[k].len()).collect();
        let out_len: usize = kept_shape.iter().product();
        let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); out_len];
        for flat in 0..self.len() {
            let c = self.coords(flat);
            let mut idx = 0;
            for (j, &k) in keep.iter().enumerate() {
                idx = idx * kept_shape[j] + c[k];
            }
            buckets[idx].push(self.log_mass[flat]);
        }
        let log_mass: Vec<f64> = buckets.iter().map(|b| log_sum_exp(b)).collect();
        let mut labels = Vec::with_capacity(out_len);
        let mut digits = vec![0usize; keep.len()];
        for _ in 0..out_len {
            labels.push(
                keep.iter()
                    .zip(&digits)
                    .map(|(&k, &d)| self.axes[k].labels[d].as_str())
                    .collect::<Vec<_>>()
                    .join(TUPLE_SEP),
            );
            for j in (0..digits.len()).rev() {
                digits[j] += 1;
                if digits[j] < kept_shape[j] {
                    break;
                }
                digits[j] = 0;
            }
        }
        FiniteDistribution::from_log_masses(labels, log_mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_marginals_reproduce_factors() {
        let p = FiniteDistribution::from_probs(["a", "b", "c"], &[0.2, 0.3, 0.5]).unwrap();
        let q = FiniteDistribution::from_probs(["x", "y"], &[0.9, 0.1]).unwrap();
        let j = p.product(&q);
        let pm = j.marginalize(&[0]).unwrap();
        let qm = j.marginalize(&[1]).unwrap();
        for i in 0..p.len() {
            assert!((pm.mass(i) - p.mass(i)).abs() < 1e-15);
        }
        for i in 0..q.len() {
            assert!((qm.mass(i) - q.mass(i)).abs() < 1e-15);
        }
        assert_eq!(pm.labels(), p.labels());
    }

    #[test]
    fn keeping_everything_is_identity() {
        let p = FiniteDistribution::from_probs(["a", "b"], &[0.4, 0.6]).unwrap();
        let q = FiniteDistribution::from_probs(["x", "y"], &[0.7, 0.3]).unwrap();
        let j = p.product(&q);
        let all = j.marginalize(&[0, 1]).unwrap();
        assert_eq!(all.labels(), j.to_distribution().labels());
        for i in 0..j.len() {
            assert!((all.mass(i) - j.mass(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_keep_sets_are_rejected() {
        let p = FiniteDistribution::bernoulli(0.5).unwrap();
        let j = p.product(&p);
        assert!(j.marginalize(&[]).is_err());
        assert!(j.marginalize(&[2]).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let axes = vec![
            Axis::new("a", vec!["0".into(), "1".into()]),
            Axis::new("b", vec!["x".into(), "y".into(), "z".into()]),
        ];
        let j = JointTable::new(axes, vec![(1.0f64 / 6.0).ln(); 6]).unwrap();
        for flat in 0..6 {
            assert_eq!(j.flat_index(&j.coords(flat)), flat);
        }
        assert_eq!(j.tuple_label(4), "1|y");
    }
}
