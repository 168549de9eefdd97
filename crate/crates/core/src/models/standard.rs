use super::{check_budget, digits, LossTable};
use crate::prob::logspace::{kahan_sum, ln_mass};
use crate::prob::{Axis, FiniteDistribution, JointTable, Kernel};
use crate::{Error, Result, PROB_TOL};

/// Learning problem where `W` is produced from `n` i.i.d. samples.
///
/// Atoms of the joint law are indexed by `(w, x)` where `x` enumerates the
/// sample vectors in `Zⁿ` (row-major, first coordinate slowest).
#[derive(Debug, Clone)]
pub struct StandardSystem {
    pz: FiniteDistribution,
    n: usize,
    loss: LossTable,
    learner: Kernel,
    samples: FiniteDistribution,
    sample_digits: Vec<Vec<usize>>,
    pw: FiniteDistribution,
    reference: FiniteDistribution,
    population: Vec<f64>,
}

/// `P_WZ(w, z) = P_Zⁿ(z)·P(w | z)` together with its marginal `P_W`.
pub fn assemble_standard(
    pz: FiniteDistribution,
    n: usize,
    learner: Kernel,
    loss: LossTable,
) -> Result<StandardSystem> {
    if pz.labels() != loss.instances() {
        return Err(Error::DimensionMismatch(
            "instance labels of P_Z and the loss table differ".into(),
        ));
    }
    if learner.outputs() != loss.hypotheses() {
        return Err(Error::DimensionMismatch(
            "learner outputs differ from loss hypotheses".into(),
        ));
    }
    let samples = pz.iid_power(n)?;
    check_budget(samples.len() as u128 * learner.n_outputs() as u128)?;
    if learner.inputs() != samples.labels() {
        return Err(Error::DimensionMismatch(format!(
            "learner must have one row per sample vector ({} expected, {} given)",
            samples.len(),
            learner.n_inputs()
        )));
    }
    let pw = learner.push_forward(&samples)?;
    let sample_digits = (0..samples.len()).map(|x| digits(x, pz.len(), n)).collect();
    let population = (0..loss.n_hypotheses())
        .map(|w| loss.population(w, &pz))
        .collect();
    Ok(StandardSystem {
        reference: pw.clone(),
        pz,
        n,
        loss,
        learner,
        samples,
        sample_digits,
        pw,
        population,
    })
}

impl StandardSystem {
    /// Replaces the reference marginal `P_W` by an auxiliary `Q_W`. The
    /// joint must stay absolutely continuous with respect to `Q_W × P_Zⁿ`.
    pub fn with_auxiliary(mut self, q: FiniteDistribution) -> Result<Self> {
        if q.labels() != self.pw.labels() {
            return Err(Error::DimensionMismatch(
                "auxiliary distribution must live on the hypothesis labels".into(),
            ));
        }
        for w in self.pw.support() {
            if q.mass(w) <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation(format!(
                    "hypothesis {:?} has P_W mass {} but auxiliary mass 0",
                    self.pw.label(w),
                    self.pw.mass(w)
                )));
            }
        }
        self.reference = q;
        Ok(self)
    }

    pub fn pz(&self) -> &FiniteDistribution {
        &self.pz
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loss(&self) -> &LossTable {
        &self.loss
    }

    pub fn learner(&self) -> &Kernel {
        &self.learner
    }

    /// Law of the training sample, `P_Zⁿ`.
    pub fn samples(&self) -> &FiniteDistribution {
        &self.samples
    }

    pub fn pw(&self) -> &FiniteDistribution {
        &self.pw
    }

    /// Marginal used in the denominator of the information density.
    pub fn reference(&self) -> &FiniteDistribution {
        &self.reference
    }

    pub fn uses_auxiliary(&self) -> bool {
        self.reference != self.pw
    }

    pub fn n_hypotheses(&self) -> usize {
        self.pw.len()
    }

    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn sample_digits(&self, x: usize) -> &[usize] {
        &self.sample_digits[x]
    }

    pub fn hypothesis_index(&self, label: &str) -> Result<usize> {
        self.pw
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn sample_index(&self, label: &str) -> Result<usize> {
        self.samples
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn atom(&self, w: usize, x: usize) -> usize {
        w * self.samples.len() + x
    }

    pub fn n_atoms(&self) -> usize {
        self.pw.len() * self.samples.len()
    }

    /// `P(w | x)`.
    pub fn cond(&self, w: usize, x: usize) -> f64 {
        self.learner.prob(x, w)
    }

    pub fn joint_mass(&self, w: usize, x: usize) -> f64 {
        self.samples.mass(x) * self.cond(w, x)
    }

    pub fn joint_log_mass(&self, w: usize, x: usize) -> f64 {
        self.samples.log_mass(x) + ln_mass(self.cond(w, x))
    }

    /// Joint law on axes `[W, Zⁿ]`.
    pub fn joint(&self) -> JointTable {
        let mut log_mass = Vec::with_capacity(self.n_atoms());
        for w in 0..self.n_hypotheses() {
            for x in 0..self.n_samples() {
                log_mass.push(self.joint_log_mass(w, x));
            }
        }
        JointTable::from_parts(
            vec![
                Axis::new("W", self.pw.labels().to_vec()),
                Axis::new("Z", self.samples.labels().to_vec()),
            ],
            log_mass,
        )
    }

    /// Product `Q_W × P_Zⁿ` with `Q_W` the reference marginal.
    pub fn product_reference(&self) -> JointTable {
        let j = self.reference.product(&self.samples);
        JointTable::from_parts(
            vec![
                Axis::new("W", self.pw.labels().to_vec()),
                Axis::new("Z", self.samples.labels().to_vec()),
            ],
            j.log_masses().to_vec(),
        )
    }

    /// `L_{P_Z}(w)`.
    pub fn population_loss(&self, w: usize) -> f64 {
        self.population[w]
    }

    /// `L_z(w)`.
    pub fn empirical_loss(&self, w: usize, x: usize) -> f64 {
        self.loss.empirical(w, &self.sample_digits[x])
    }

    /// `gen(w, z) = L_{P_Z}(w) − L_z(w)`.
    pub fn gen(&self, w: usize, x: usize) -> f64 {
        self.population[w] - self.empirical_loss(w, x)
    }

    pub fn gen_by_label(&self, w: &str, z: &str) -> Result<f64> {
        Ok(self.gen(self.hypothesis_index(w)?, self.sample_index(z)?))
    }

    /// `E_{P_{W|z}}[gen(W, z)]`.
    pub fn posterior_gen(&self, x: usize) -> f64 {
        kahan_sum((0..self.n_hypotheses()).map(|w| self.cond(w, x) * self.gen(w, x)))
    }

    /// `E_{P_WZ}[gen(W, Z)]`.
    pub fn expected_gen(&self) -> f64 {
        kahan_sum((0..self.n_samples()).map(|x| self.samples.mass(x) * self.posterior_gen(x)))
    }

    /// Checks that the joint reproduces `P_Zⁿ` and `P_W` as marginals.
    pub fn marginals_consistent(&self) -> bool {
        let j = self.joint();
        let (Ok(mw), Ok(mz)) = (j.marginalize(&[0]), j.marginalize(&[1])) else {
            return false;
        };
        let close = |a: &FiniteDistribution, b: &FiniteDistribution| {
            (0..a.len()).all(|i| (a.mass(i) - b.mass(i)).abs() <= PROB_TOL)
        };
        close(&mw, &self.pw) && close(&mz, &self.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{constant_kernel, erm_kernel, TieRule};

    fn inst_a() -> StandardSystem {
        let loss = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let k = erm_kernel(&loss, 2, TieRule::LowestIndex).unwrap();
        assemble_standard(pz, 2, k, loss).unwrap()
    }

    #[test]
    fn inst_a_marginal_and_gen() {
        let s = inst_a();
        assert!((s.pw().mass(0) - 0.75).abs() < 1e-15);
        assert!((s.pw().mass(1) - 0.25).abs() < 1e-15);
        assert!((s.expected_gen() - 0.25).abs() < 1e-15);
        assert_eq!(s.gen_by_label("0", "0,0").unwrap(), 0.5);
        assert!(s.gen_by_label("2", "0,0").is_err());
        assert!(s.marginals_consistent());
        assert_eq!(s.n_atoms(), 8);
    }

    #[test]
    fn constant_learner_is_independent() {
        let loss = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let k = constant_kernel(&loss, 2, &[0.5, 0.5]).unwrap();
        let s = assemble_standard(pz, 2, k, loss).unwrap();
        assert!(s.expected_gen().abs() < 1e-15);
        let prod = s.product_reference();
        let j = s.joint();
        for i in 0..j.len() {
            assert!((j.mass(i) - prod.mass(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn auxiliary_must_dominate() {
        let s = inst_a();
        let bad = FiniteDistribution::point_mass(["0", "1"], 0).unwrap();
        assert!(matches!(
            s.clone().with_auxiliary(bad),
            Err(Error::AbsoluteContinuityViolation(_))
        ));
        let ok = FiniteDistribution::uniform(["0", "1"]).unwrap();
        assert!(s.with_auxiliary(ok).unwrap().uses_auxiliary());
    }

    #[test]
    fn label_mismatch_is_rejected() {
        let loss = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["a", "b"]).unwrap();
        let k = constant_kernel(&loss, 1, &[0.5, 0.5]).unwrap();
        assert!(assemble_standard(pz, 1, k, loss).is_err());
    }
}
