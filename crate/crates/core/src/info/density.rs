use super::{check_alpha, Order, ALPHA_ONE_TOL};
use crate::prob::logspace::{kahan_sum, ln_mass, log_sum_exp};
use crate::prob::JointTable;
use crate::{Error, Result};

/// Log-ratio `ι = log dP/dQ` on the support of `P`, together with the
/// log-masses of both measures there.
///
/// Atoms are kept in increasing order of their flat index in the joint
/// table they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTable {
    atoms: Vec<usize>,
    iota: Vec<f64>,
    log_p: Vec<f64>,
    log_q: Vec<f64>,
}

/// `density(P, Q)`: information density of `P` against `Q` on a common
/// label space.
pub fn density(p: &JointTable, q: &JointTable) -> Result<DensityTable> {
    if p.axes() != q.axes() {
        return Err(Error::DimensionMismatch(
            "density requires both tables on the same label space".into(),
        ));
    }
    DensityTable::from_log_masses(p.log_masses(), q.log_masses(), |i| p.tuple_label(i))
}

impl DensityTable {
    pub(crate) fn from_log_masses<F>(log_p: &[f64], log_q: &[f64], label: F) -> Result<Self>
    where
        F: Fn(usize) -> String,
    {
        let mut t = Self::with_capacity(log_p.len());
        for (i, (&lp, &lq)) in log_p.iter().zip(log_q).enumerate() {
            t.push(i, lp, lq, &label)?;
        }
        Ok(t)
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        Self {
            atoms: Vec::with_capacity(n),
            iota: Vec::with_capacity(n),
            log_p: Vec::with_capacity(n),
            log_q: Vec::with_capacity(n),
        }
    }

    /// Appends an atom; zero-mass atoms of `P` are skipped.
    pub(crate) fn push<F>(&mut self, atom: usize, lp: f64, lq: f64, label: F) -> Result<()>
    where
        F: Fn(usize) -> String,
    {
        if lp == f64::NEG_INFINITY {
            return Ok(());
        }
        if lq == f64::NEG_INFINITY {
            return Err(Error::AbsoluteContinuityViolation(format!(
                "atom {} has mass {} under P but 0 under Q",
                label(atom),
                lp.exp()
            )));
        }
        debug_assert!(self.atoms.last().is_none_or(|&a| a < atom));
        self.atoms.push(atom);
        self.iota.push(lp - lq);
        self.log_p.push(lp);
        self.log_q.push(lq);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Flat indices of the support atoms.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn values(&self) -> &[f64] {
        &self.iota
    }

    pub fn log_masses(&self) -> &[f64] {
        &self.log_p
    }

    pub fn reference_log_masses(&self) -> &[f64] {
        &self.log_q
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.log_p[i].exp()
    }

    /// `ι` at a flat atom index, or `None` off the support.
    pub fn value_at(&self, atom: usize) -> Option<f64> {
        self.atoms.binary_search(&atom).ok().map(|i| self.iota[i])
    }

    /// `E_P[ι]`, i.e. `D(P‖Q)`.
    pub fn mean(&self) -> f64 {
        kahan_sum(
            self.iota
                .iter()
                .zip(&self.log_p)
                .map(|(v, lp)| lp.exp() * v),
        )
    }

    pub fn ess_sup(&self) -> Result<f64> {
        self.iota
            .iter()
            .copied()
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.max(v)))
            })
            .ok_or(Error::EmptySupport)
    }

    /// `P[ι ≥ γ]`.
    pub fn tail(&self, gamma: f64) -> f64 {
        kahan_sum(
            self.iota
                .iter()
                .zip(&self.log_p)
                .filter(|(v, _)| **v >= gamma)
                .map(|(_, lp)| lp.exp()),
        )
    }

    /// `P[ι ≥ γ]` for every `γ` at once.
    pub fn tail_steps(&self) -> TailSteps {
        let mut pairs: Vec<(f64, f64)> = self
            .iota
            .iter()
            .zip(&self.log_p)
            .map(|(v, lp)| (*v, lp.exp()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::new();
        let mut masses: Vec<f64> = Vec::new();
        for (v, m) in pairs {
            match (values.last(), masses.last_mut()) {
                (Some(&last), Some(acc)) if last == v => *acc += m,
                _ => {
                    values.push(v);
                    masses.push(m);
                }
            }
        }
        let mut tails = vec![0.0; values.len()];
        let (mut sum, mut c) = (0.0, 0.0);
        for i in (0..values.len()).rev() {
            let y = masses[i] - c;
            let t = sum + y;
            c = (t - sum) - y;
            sum = t;
            tails[i] = sum;
        }
        TailSteps { values, tails }
    }

    /// Attained values of `ι`, sorted and deduplicated.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.iota.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// `(E_P|ι − E_P ι|ᵗ)^{1/t}`, or `ess sup |ι − E_P ι|` for `t = ∞`.
    /// Finite orders are reduced in log space.
    pub fn central_moment(&self, t: Order) -> Result<f64> {
        t.check()?;
        if self.is_empty() {
            return Err(Error::EmptySupport);
        }
        let m = self.mean();
        match t {
            Order::Infinite => Ok(self.iota.iter().map(|v| (v - m).abs()).fold(0.0, f64::max)),
            Order::Finite(t) => {
                let terms: Vec<f64> = self
                    .iota
                    .iter()
                    .zip(&self.log_p)
                    .map(|(v, lp)| lp + t * ln_mass((v - m).abs()))
                    .collect();
                Ok((log_sum_exp(&terms) / t).exp())
            }
        }
    }

    /// `D_α(P‖Q) = (1/(α−1)) log E_Q[exp(α·ι)]`; orders within
    /// [`ALPHA_ONE_TOL`] of 1 return `D(P‖Q)`.
    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
            return Ok(self.mean());
        }
        let terms: Vec<f64> = self
            .iota
            .iter()
            .zip(&self.log_q)
            .map(|(v, lq)| lq + alpha * v)
            .collect();
        Ok(log_sum_exp(&terms) / (alpha - 1.0))
    }

    /// `log E_P[exp(f(atom) − ι)]` for a per-atom exponent, used by the
    /// exponential inequalities.
    pub fn log_tilted_mean<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .atoms
            .iter()
            .zip(&self.log_q)
            .map(|(&a, lq)| lq + f(a))
            .collect();
        log_sum_exp(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FiniteDistribution;

    #[test]
    fn identical_measures_have_zero_density() {
        let p = FiniteDistribution::from_probs(["a", "b"], &[0.3, 0.7]).unwrap();
        let q = FiniteDistribution::from_probs(["x", "y"], &[0.6, 0.4]).unwrap();
        let j = p.product(&q);
        let d = density(&j, &j).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        assert_eq!(d.central_moment(Order::Finite(2.0)).unwrap(), 0.0);
        assert_eq!(d.central_moment(Order::Infinite).unwrap(), 0.0);
    }

    #[test]
    fn missing_reference_mass_is_rejected() {
        let p = FiniteDistribution::from_probs(["a", "b"], &[0.5, 0.5]).unwrap();
        let q = FiniteDistribution::from_probs(["a", "b"], &[1.0, 0.0]).unwrap();
        let one = FiniteDistribution::point_mass(["x"], 0).unwrap();
        let e = density(&p.product(&one), &q.product(&one));
        assert!(matches!(e, Err(Error::AbsoluteContinuityViolation(_))));
        // the reverse direction is fine: P-null atoms are skipped
        assert!(density(&q.product(&one), &p.product(&one)).is_ok());
    }

    #[test]
    fn mismatched_spaces_are_rejected() {
        let p = FiniteDistribution::bernoulli(0.5).unwrap();
        let q = FiniteDistribution::from_probs(["a", "b"], &[0.5, 0.5]).unwrap();
        assert!(density(&p.product(&p), &q.product(&q)).is_err());
    }
}

/// The tail `P[ι ≥ γ]` as a step function with jumps at the attained
/// values of `ι`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailSteps {
    values: Vec<f64>,
    tails: Vec<f64>,
}

impl TailSteps {
    /// Attained values, sorted and deduplicated.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self, gamma: f64) -> f64 {
        let i = self.values.partition_point(|v| *v < gamma);
        self.tails.get(i).copied().unwrap_or(0.0)
    }
}
