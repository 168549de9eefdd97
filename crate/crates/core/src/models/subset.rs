use super::{check_budget, digits, undigits, LossTable, RangeConstant, StandardSystem};
use crate::prob::logspace::{kahan_sum, ln_mass};
use crate::prob::{Axis, FiniteDistribution, JointTable, Kernel};
use crate::{Error, Result};

/// Random-subset learning problem: a supersample `Z̃ ∈ Z²ⁿ`, a selector
/// `S ∈ {0,1}ⁿ` of i.i.d. fair bits, and a learner that sees
/// `Z(S)` with `Zᵢ(Sᵢ) = Z̃_{i + Sᵢ·n}`.
///
/// Joint atoms are indexed `(w·|Z̃| + z̃)·2ⁿ + s`. Bit `i` of the selector
/// index `s` is `(s >> (n − 1 − i)) & 1`.
#[derive(Debug, Clone)]
pub struct SubsetSystem {
    pz: FiniteDistribution,
    n: usize,
    loss: LossTable,
    learner: Kernel,
    supersamples: FiniteDistribution,
    selected: Vec<usize>,
    marginal: Vec<f64>,
    reference: Vec<f64>,
    population: Vec<f64>,
    range_constant: RangeConstant,
}

/// Builds `P_{WZ̃S}` with `P_S` uniform and `P_{W|z̃} = 2⁻ⁿ Σ_s P(w | z(s))`.
pub fn assemble_subset(
    pz: FiniteDistribution,
    n: usize,
    learner: Kernel,
    loss: LossTable,
) -> Result<SubsetSystem> {
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
    if n == 0 || n >= usize::BITS as usize / 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: n as f64,
            reason: "sample size out of range",
        });
    }
    let k = pz.len();
    let nw = learner.n_outputs();
    let n_sel = 1usize << n;
    let atoms = (k as u128)
        .checked_pow(2 * n as u32)
        .map(|v| v * n_sel as u128 * nw as u128)
        .unwrap_or(u128::MAX);
    check_budget(atoms)?;
    let inputs = pz.iid_power(n)?;
    if learner.inputs() != inputs.labels() {
        return Err(Error::DimensionMismatch(format!(
            "learner must have one row per selected-sample vector ({} expected, {} given)",
            inputs.len(),
            learner.n_inputs()
        )));
    }
    let supersamples = pz.iid_power(2 * n)?;
    let nz = supersamples.len();
    let mut selected = Vec::with_capacity(nz * n_sel);
    for zt in 0..nz {
        let d = digits(zt, k, 2 * n);
        for s in 0..n_sel {
            let chosen: Vec<usize> = (0..n).map(|i| d[i + bit(s, i, n) * n]).collect();
            selected.push(undigits(&chosen, k));
        }
    }
    let mut marginal = vec![0.0; nz * nw];
    for zt in 0..nz {
        for w in 0..nw {
            marginal[zt * nw + w] =
                kahan_sum((0..n_sel).map(|s| learner.prob(selected[zt * n_sel + s], w)))
                    / n_sel as f64;
        }
    }
    let population = (0..nw).map(|w| loss.population(w, &pz)).collect();
    let range_constant = super::range_constant(&loss);
    Ok(SubsetSystem {
        reference: marginal.clone(),
        pz,
        n,
        loss,
        learner,
        supersamples,
        selected,
        marginal,
        population,
        range_constant,
    })
}

fn bit(s: usize, i: usize, n: usize) -> usize {
    (s >> (n - 1 - i)) & 1
}

impl SubsetSystem {
    /// Replaces `P_{W|Z̃}` in every density by an auxiliary kernel given as
    /// `rows[z̃][w]`. Absolute continuity is re-verified.
    pub fn with_auxiliary(mut self, rows: Vec<Vec<f64>>) -> Result<Self> {
        let nw = self.n_hypotheses();
        if rows.len() != self.n_supersamples() || rows.iter().any(|r| r.len() != nw) {
            return Err(Error::DimensionMismatch(
                "auxiliary kernel must have one row per supersample over the hypotheses".into(),
            ));
        }
        let mut flat = Vec::with_capacity(rows.len() * nw);
        for (zt, row) in rows.iter().enumerate() {
            let row = crate::prob::validate_and_normalize(row)?;
            for (w, &q) in row.iter().enumerate() {
                if self.supersamples.mass(zt) > 0.0 && self.marginal[zt * nw + w] > 0.0 && q <= 0.0
                {
                    return Err(Error::AbsoluteContinuityViolation(format!(
                        "hypothesis {:?} at supersample {:?} has auxiliary mass 0",
                        self.loss.hypotheses()[w],
                        self.supersamples.label(zt)
                    )));
                }
            }
            flat.extend(row);
        }
        self.reference = flat;
        Ok(self)
    }

    /// Uses `E[Δ(Z₁,Z₂)²]` (or any other constant) in place of `(b − a)²`.
    pub fn with_range_constant(mut self, c: RangeConstant) -> Result<Self> {
        if !(c.value >= 0.0 && c.value.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "range_constant",
                value: c.value,
                reason: "must be finite and nonnegative",
            });
        }
        self.range_constant = c;
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

    pub fn range_constant(&self) -> RangeConstant {
        self.range_constant
    }

    pub fn supersamples(&self) -> &FiniteDistribution {
        &self.supersamples
    }

    pub fn n_hypotheses(&self) -> usize {
        self.learner.n_outputs()
    }

    pub fn n_supersamples(&self) -> usize {
        self.supersamples.len()
    }

    pub fn n_selectors(&self) -> usize {
        1 << self.n
    }

    pub fn n_atoms(&self) -> usize {
        self.n_hypotheses() * self.n_supersamples() * self.n_selectors()
    }

    pub fn atom(&self, w: usize, zt: usize, s: usize) -> usize {
        (w * self.n_supersamples() + zt) * self.n_selectors() + s
    }

    pub fn selector_mass(&self) -> f64 {
        1.0 / self.n_selectors() as f64
    }

    pub fn selector_label(&self, s: usize) -> String {
        (0..self.n)
            .map(|i| if bit(s, i, self.n) == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn hypothesis_index(&self, label: &str) -> Result<usize> {
        self.loss
            .hypotheses()
            .iter()
            .position(|h| h == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn supersample_index(&self, label: &str) -> Result<usize> {
        self.supersamples
            .index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn selector_index(&self, label: &str) -> Result<usize> {
        if label.len() != self.n || !label.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::UnknownLabel(label.to_string()));
        }
        Ok(usize::from_str_radix(label, 2).expect("checked binary"))
    }

    /// Index (into `Zⁿ`) of the training vector `z(s)`.
    pub fn selected(&self, zt: usize, s: usize) -> usize {
        self.selected[zt * self.n_selectors() + s]
    }

    /// `P(w | z̃, s) = P(w | z(s))`.
    pub fn cond(&self, w: usize, zt: usize, s: usize) -> f64 {
        self.learner.prob(self.selected(zt, s), w)
    }

    /// `P_{W|z̃}(w)`.
    pub fn marginal(&self, w: usize, zt: usize) -> f64 {
        self.marginal[zt * self.n_hypotheses() + w]
    }

    /// Reference conditional used in densities (`P_{W|z̃}` unless replaced).
    pub fn reference(&self, w: usize, zt: usize) -> f64 {
        self.reference[zt * self.n_hypotheses() + w]
    }

    pub fn marginal_distribution(&self, zt: usize) -> FiniteDistribution {
        let nw = self.n_hypotheses();
        FiniteDistribution::from_probs(
            self.loss.hypotheses().to_vec(),
            &self.marginal[zt * nw..(zt + 1) * nw],
        )
        .expect("marginal rows are normalized")
    }

    pub fn joint_mass(&self, w: usize, zt: usize, s: usize) -> f64 {
        self.supersamples.mass(zt) * self.selector_mass() * self.cond(w, zt, s)
    }

    pub fn joint_log_mass(&self, w: usize, zt: usize, s: usize) -> f64 {
        self.supersamples.log_mass(zt) - (self.n as f64) * std::f64::consts::LN_2
            + ln_mass(self.cond(w, zt, s))
    }

    /// Joint law on axes `[W, Z̃, S]`.
    pub fn joint(&self) -> JointTable {
        let mut log_mass = Vec::with_capacity(self.n_atoms());
        for w in 0..self.n_hypotheses() {
            for zt in 0..self.n_supersamples() {
                for s in 0..self.n_selectors() {
                    log_mass.push(self.joint_log_mass(w, zt, s));
                }
            }
        }
        JointTable::from_parts(self.axes(), log_mass)
    }

    /// `Q_{W|Z̃} P_Z̃ P_S` on the same axes as [`Self::joint`].
    pub fn product_reference(&self) -> JointTable {
        let mut log_mass = Vec::with_capacity(self.n_atoms());
        let ls = -(self.n as f64) * std::f64::consts::LN_2;
        for w in 0..self.n_hypotheses() {
            for zt in 0..self.n_supersamples() {
                let base = self.supersamples.log_mass(zt) + ln_mass(self.reference(w, zt)) + ls;
                log_mass.extend(std::iter::repeat_n(base, self.n_selectors()));
            }
        }
        JointTable::from_parts(self.axes(), log_mass)
    }

    fn axes(&self) -> Vec<Axis> {
        vec![
            Axis::new("W", self.loss.hypotheses().to_vec()),
            Axis::new("Z~", self.supersamples.labels().to_vec()),
            Axis::new(
                "S",
                (0..self.n_selectors())
                    .map(|s| self.selector_label(s))
                    .collect(),
            ),
        ]
    }

    fn instance(&self, zt: usize, j: usize) -> usize {
        let k = self.pz.len();
        (zt / k.pow((2 * self.n - 1 - j) as u32)) % k
    }

    /// `gen(w, z(s)) = L_{P_Z}(w) − L_{z(s)}(w)`.
    pub fn gen(&self, w: usize, zt: usize, s: usize) -> f64 {
        let train: Vec<usize> = (0..self.n)
            .map(|i| self.instance(zt, i + bit(s, i, self.n) * self.n))
            .collect();
        self.population[w] - self.loss.empirical(w, &train)
    }

    /// `ĝen(w, z̃, s) = (1/n) Σᵢ ℓ(w, zᵢ(s̄ᵢ)) − ℓ(w, zᵢ(sᵢ))`.
    pub fn gen_hat(&self, w: usize, zt: usize, s: usize) -> f64 {
        let n = self.n;
        kahan_sum((0..n).map(|i| {
            let b = bit(s, i, n);
            self.loss.loss(w, self.instance(zt, i + (1 - b) * n))
                - self.loss.loss(w, self.instance(zt, i + b * n))
        })) / n as f64
    }

    pub fn gen_hat_by_label(&self, w: &str, zt: &str, s: &str) -> Result<f64> {
        Ok(self.gen_hat(
            self.hypothesis_index(w)?,
            self.supersample_index(zt)?,
            self.selector_index(s)?,
        ))
    }

    pub fn complement(&self, s: usize) -> usize {
        !s & (self.n_selectors() - 1)
    }

    /// `E_{P_{W|z̃,s}}[f(W)]` for a per-hypothesis function.
    pub fn posterior_mean<F: Fn(usize) -> f64>(&self, zt: usize, s: usize, f: F) -> f64 {
        kahan_sum((0..self.n_hypotheses()).map(|w| self.cond(w, zt, s) * f(w)))
    }

    /// `E[gen(W, Z(S))]`.
    pub fn expected_gen(&self) -> f64 {
        self.expect(|w, zt, s| self.gen(w, zt, s))
    }

    /// `E[ĝen(W, Z̃, S)]`.
    pub fn expected_gen_hat(&self) -> f64 {
        self.expect(|w, zt, s| self.gen_hat(w, zt, s))
    }

    fn expect<F: Fn(usize, usize, usize) -> f64>(&self, f: F) -> f64 {
        let mut terms = Vec::with_capacity(self.n_atoms());
        for zt in self.supersamples.support() {
            for s in 0..self.n_selectors() {
                for w in 0..self.n_hypotheses() {
                    let m = self.joint_mass(w, zt, s);
                    if m > 0.0 {
                        terms.push(m * f(w, zt, s));
                    }
                }
            }
        }
        kahan_sum(terms)
    }

    /// Law of the training vector `Z(S)` obtained by pushing `(Z̃, S)`
    /// forward; equal to `P_Zⁿ`.
    pub fn selected_law(&self) -> FiniteDistribution {
        let inputs = self.learner.inputs().to_vec();
        let mut mass = vec![0.0; inputs.len()];
        for zt in 0..self.n_supersamples() {
            for s in 0..self.n_selectors() {
                mass[self.selected(zt, s)] += self.supersamples.mass(zt) * self.selector_mass();
            }
        }
        FiniteDistribution::from_probs(inputs, &mass).expect("pushforward is normalized")
    }

    /// The standard system in which `Z(S)` plays the role of the training
    /// data.
    pub fn induced_standard(&self) -> Result<StandardSystem> {
        super::assemble_standard(
            self.pz.clone(),
            self.n,
            self.learner.clone(),
            self.loss.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{constant_kernel, gibbs_kernel, identity_kernel};

    fn inst_b() -> SubsetSystem {
        let loss = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let k = identity_kernel(&loss, 1).unwrap();
        assemble_subset(pz, 1, k, loss).unwrap()
    }

    #[test]
    fn inst_b_structure() {
        let s = inst_b();
        assert_eq!(s.n_atoms(), 2 * 4 * 2);
        let zt = s.supersample_index("0,1").unwrap();
        let m = s.marginal_distribution(zt);
        assert_eq!(m.masses(), [0.5, 0.5]);
        assert_eq!(s.gen_hat_by_label("0", "0,1", "0").unwrap(), 1.0);
        assert_eq!(s.gen_hat_by_label("0", "0,1", "1").unwrap(), -1.0);
        let total: f64 = (0..s.n_atoms()).map(|i| s.joint().mass(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inst_b_expected_gen_is_one_half() {
        let s = inst_b();
        assert!((s.expected_gen() - 0.5).abs() < 1e-15);
        assert!((s.expected_gen_hat() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn selector_ignoring_learner_has_constant_conditional() {
        let loss = LossTable::zero_one(&["0", "1"]);
        let pz = FiniteDistribution::uniform(["0", "1"]).unwrap();
        let k = constant_kernel(&loss, 2, &[0.3, 0.7]).unwrap();
        let s = assemble_subset(pz, 2, k, loss).unwrap();
        for zt in 0..s.n_supersamples() {
            for sel in 0..s.n_selectors() {
                for w in 0..2 {
                    assert_eq!(s.cond(w, zt, sel), s.marginal(w, zt));
                }
            }
        }
    }

    #[test]
    fn selection_rule_and_antisymmetry() {
        let loss = LossTable::zero_one(&["0", "1", "2"]);
        let pz = FiniteDistribution::from_probs(["0", "1", "2"], &[0.2, 0.3, 0.5]).unwrap();
        let k = gibbs_kernel(&loss, 2, 1.5).unwrap();
        let s = assemble_subset(pz, 2, k, loss).unwrap();
        // z̃ = (0,1,2,0): s = 01 selects (z̃₁, z̃₄) = (0, 0)
        let zt = s.supersample_index("0,1,2,0").unwrap();
        let sel = s.selector_index("01").unwrap();
        assert_eq!(s.learner().inputs()[s.selected(zt, sel)], "0,0");
        let sel = s.selector_index("10").unwrap();
        assert_eq!(s.learner().inputs()[s.selected(zt, sel)], "2,1");
        for zt in 0..s.n_supersamples() {
            for sel in 0..s.n_selectors() {
                for w in 0..3 {
                    let a = s.gen_hat(w, zt, sel);
                    let b = s.gen_hat(w, zt, s.complement(sel));
                    assert!((a + b).abs() < 1e-15);
                }
            }
        }
        let law = s.selected_law();
        let iid = s.pz().iid_power(2).unwrap();
        for x in 0..law.len() {
            assert!((law.mass(x) - iid.mass(x)).abs() < 1e-12);
        }
    }
}
