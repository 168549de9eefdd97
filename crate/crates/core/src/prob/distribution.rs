use std::collections::HashSet;

use super::logspace::{kahan_sum, ln_mass, log_sum_exp};
use super::{validate_and_normalize, Axis, JointTable, VECTOR_SEP};
use crate::{Error, Result};

/// A probability mass function over an ordered list of labelled outcomes.
///
/// Masses are stored as natural logarithms; zero-mass outcomes are kept in
/// the table (with log-mass `-∞`) but are not part of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    labels: Vec<String>,
    log_mass: Vec<f64>,
}

impl FiniteDistribution {
    /// Builds a distribution from linear-scale masses. A total that deviates
    /// from one by less than [`super::NORMALIZE_TOL`] is renormalized;
    /// anything further off is rejected.
    pub fn from_probs<L, I>(labels: I, probs: &[f64]) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = L>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != probs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} masses",
                labels.len(),
                probs.len()
            )));
        }
        check_unique(&labels)?;
        let probs = validate_and_normalize(probs)?;
        Ok(Self {
            labels,
            log_mass: probs.into_iter().map(ln_mass).collect(),
        })
    }

    /// Builds a distribution from log-masses, renormalizing within tolerance.
    pub fn from_log_masses<L, I>(labels: I, log_mass: Vec<f64>) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = L>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != log_mass.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} masses",
                labels.len(),
                log_mass.len()
            )));
        }
        if log_mass.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if log_mass.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
            return Err(Error::InvalidDistribution("log-mass is NaN or +inf".into()));
        }
        check_unique(&labels)?;
        let total = log_sum_exp(&log_mass);
        if (total.exp() - 1.0).abs() >= super::NORMALIZE_TOL {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {}, deviation from 1 exceeds {}",
                total.exp(),
                super::NORMALIZE_TOL
            )));
        }
        Ok(Self {
            labels,
            log_mass: log_mass.into_iter().map(|v| v - total).collect(),
        })
    }

    pub fn uniform<L, I>(labels: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = L>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let k = labels.len();
        Self::from_probs(labels, &vec![1.0 / k.max(1) as f64; k])
    }

    pub fn point_mass<L, I>(labels: I, at: usize) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = L>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if at >= labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "point mass at {at} but only {} outcomes",
                labels.len()
            )));
        }
        let mut probs = vec![0.0; labels.len()];
        probs[at] = 1.0;
        Self::from_probs(labels, &probs)
    }

    /// Bernoulli law on the labels `"0"`, `"1"` with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "Bernoulli parameter must lie in [0, 1]",
            });
        }
        Self::from_probs(["0", "1"], &[1.0 - p, p])
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn log_masses(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn log_mass(&self, i: usize) -> f64 {
        self.log_mass[i]
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.log_mass[i].exp()
    }

    pub fn masses(&self) -> Vec<f64> {
        self.log_mass.iter().map(|v| v.exp()).collect()
    }

    pub fn mass_of(&self, label: &str) -> Result<f64> {
        self.index_of(label)
            .map(|i| self.mass(i))
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Indices of outcomes with strictly positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.log_mass
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > f64::NEG_INFINITY)
            .map(|(i, _)| i)
    }

    /// `E[f]` for a per-outcome function; zero-mass outcomes contribute
    /// nothing even when `f` is infinite there.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        kahan_sum(self.support().map(|i| self.mass(i) * values[i]))
    }

    /// Product measure `p × q` as a two-axis joint table (`p` first).
    pub fn product(&self, other: &FiniteDistribution) -> JointTable {
        let mut log_mass = Vec::with_capacity(self.len() * other.len());
        for &a in &self.log_mass {
            for &b in &other.log_mass {
                log_mass.push(a + b);
            }
        }
        JointTable::from_parts(
            vec![
                Axis::new("0", self.labels.clone()),
                Axis::new("1", other.labels.clone()),
            ],
            log_mass,
        )
    }

    /// Law of `n` independent draws; outcomes are label vectors in
    /// row-major order (first coordinate varies slowest).
    pub fn iid_power(&self, n: usize) -> Result<FiniteDistribution> {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "iid power requires at least one draw",
            });
        }
        let k = self.len();
        let total = checked_pow(k, n)?;
        let mut labels = Vec::with_capacity(total);
        let mut log_mass = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            labels.push(
                digits
                    .iter()
                    .map(|&d| self.labels[d].as_str())
                    .collect::<Vec<_>>()
                    .join(VECTOR_SEP),
            );
            log_mass.push(digits.iter().map(|&d| self.log_mass[d]).sum());
            increment(&mut digits, k);
        }
        Ok(FiniteDistribution { labels, log_mass })
    }
}

/// Essential supremum of `values` under `dist`: the maximum over
/// positive-mass outcomes.
pub fn ess_sup(values: &[f64], dist: &FiniteDistribution) -> Result<f64> {
    if values.len() != dist.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} values for {} outcomes",
            values.len(),
            dist.len()
        )));
    }
    dist.support()
        .map(|i| values[i])
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        })
        .ok_or(Error::EmptySupport)
}

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidDistribution(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    if acc > crate::models::ENUMERATION_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            atoms: acc,
            limit: crate::models::ENUMERATION_BUDGET,
        });
    }
    Ok(acc as usize)
}

/// Row-major odometer step over `base`-ary digits.
pub(crate) fn increment(digits: &mut [usize], base: usize) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return;
        }
        *d = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn product_of_fair_coins_is_uniform() {
        let b = FiniteDistribution::bernoulli(0.5).unwrap();
        let j = b.product(&b);
        assert_eq!(j.len(), 4);
        for i in 0..4 {
            assert!(close(j.mass(i), 0.25));
        }
    }

    #[test]
    fn product_direct_multiplication() {
        let p = FiniteDistribution::bernoulli(0.25).unwrap();
        let q = FiniteDistribution::bernoulli(0.5).unwrap();
        let j = p.product(&q);
        let want = [0.75 * 0.5, 0.75 * 0.5, 0.25 * 0.5, 0.25 * 0.5];
        for (i, w) in want.iter().enumerate() {
            assert!(close(j.mass(i), *w), "{} vs {}", j.mass(i), w);
        }
        assert!(close(want[0], 3.0 / 8.0) && close(want[2], 1.0 / 8.0));
    }

    #[test]
    fn point_mass_factor_relabels() {
        let a = FiniteDistribution::point_mass(["a", "b"], 0).unwrap();
        let q = FiniteDistribution::from_probs(["x", "y", "z"], &[0.2, 0.3, 0.5]).unwrap();
        let j = a.product(&q);
        let flat = j.to_distribution();
        for (i, l) in q.labels().iter().enumerate() {
            let m = flat.mass_of(&format!("a|{l}")).unwrap();
            assert!(close(m, q.mass(i)));
        }
        assert_eq!(flat.mass_of("b|x").unwrap(), 0.0);
    }

    #[test]
    fn iid_power_cases() {
        let fair = FiniteDistribution::bernoulli(0.5).unwrap();
        let sq = fair.iid_power(2).unwrap();
        assert_eq!(sq.labels(), ["0,0", "0,1", "1,0", "1,1"]);
        assert!(sq.masses().iter().all(|&m| close(m, 0.25)));

        let skew = FiniteDistribution::bernoulli(0.25).unwrap();
        let sq = skew.iid_power(2).unwrap();
        let want = [9.0 / 16.0, 3.0 / 16.0, 3.0 / 16.0, 1.0 / 16.0];
        for (m, w) in sq.masses().iter().zip(want) {
            assert!(close(*m, w));
        }
        assert_eq!(skew.iid_power(1).unwrap(), skew);
        assert!(skew.iid_power(0).is_err());
    }

    #[test]
    fn ess_sup_ignores_null_outcomes() {
        let d = FiniteDistribution::from_probs(["a", "b", "c"], &[0.5, 0.5, 0.0]).unwrap();
        assert_eq!(ess_sup(&[1.0, 2.0, 3.0], &d).unwrap(), 2.0);
        assert_eq!(ess_sup(&[7.0; 3], &d).unwrap(), 7.0);
        // sentinel extremes planted on the null outcome
        assert_eq!(ess_sup(&[1.0, 2.0, f64::INFINITY], &d).unwrap(), 2.0);
    }

    #[test]
    fn loader_tolerance() {
        assert!(FiniteDistribution::from_probs(["a", "b"], &[0.5, 0.5 + 5e-10]).is_ok());
        assert!(FiniteDistribution::from_probs(["a", "b"], &[0.5, 0.5 + 1e-8]).is_err());
        assert!(FiniteDistribution::from_probs(["a", "b"], &[1.2, -0.2]).is_err());
        assert!(FiniteDistribution::from_probs(["a", "a"], &[0.5, 0.5]).is_err());
    }
}
