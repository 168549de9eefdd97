use super::logspace::kahan_sum;
use super::{validate_and_normalize, FiniteDistribution};
use crate::{Error, Result};

/// A stochastic map from input labels to distributions over output labels,
/// stored as a dense row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    probs: Vec<f64>,
}

impl Kernel {
    /// Every row is validated (and normalized within tolerance) like a
    /// [`FiniteDistribution`].
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != inputs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} inputs but {} rows",
                inputs.len(),
                rows.len()
            )));
        }
        let mut probs = Vec::with_capacity(inputs.len() * outputs.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != outputs.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row {:?} has {} entries, expected {}",
                    inputs[i],
                    row.len(),
                    outputs.len()
                )));
            }
            probs.extend(validate_and_normalize(row).map_err(|e| match e {
                Error::InvalidDistribution(m) => {
                    Error::InvalidDistribution(format!("row {:?}: {m}", inputs[i]))
                }
                other => other,
            })?);
        }
        Ok(Self {
            inputs,
            outputs,
            probs,
        })
    }

    pub fn from_fn<F>(inputs: Vec<String>, outputs: Vec<String>, mut row: F) -> Result<Self>
    where
        F: FnMut(usize) -> Vec<f64>,
    {
        let rows = (0..inputs.len()).map(&mut row).collect();
        Self::new(inputs, outputs, rows)
    }

    /// Kernel that ignores its input.
    pub fn constant(inputs: Vec<String>, out: &FiniteDistribution) -> Self {
        let row = out.masses();
        let probs = (0..inputs.len())
            .flat_map(|_| row.iter().copied())
            .collect();
        Self {
            inputs,
            outputs: out.labels().to_vec(),
            probs,
        }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn row(&self, input: usize) -> &[f64] {
        let k = self.outputs.len();
        &self.probs[input * k..(input + 1) * k]
    }

    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.probs[input * self.outputs.len() + output]
    }

    pub fn row_distribution(&self, input: usize) -> FiniteDistribution {
        FiniteDistribution::from_probs(self.outputs.clone(), self.row(input))
            .expect("kernel rows are normalized")
    }

    /// Output marginal `Σ_x P(x)·K(·|x)`.
    pub fn push_forward(&self, input: &FiniteDistribution) -> Result<FiniteDistribution> {
        if input.labels() != self.inputs.as_slice() {
            return Err(Error::DimensionMismatch(
                "input distribution labels differ from kernel inputs".into(),
            ));
        }
        let px = input.masses();
        let out: Vec<f64> = (0..self.n_outputs())
            .map(|j| kahan_sum((0..self.n_inputs()).map(|i| px[i] * self.prob(i, j))))
            .collect();
        FiniteDistribution::from_probs(self.outputs.clone(), &out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_validated() {
        let ins = vec!["a".to_string(), "b".to_string()];
        let outs = vec!["0".to_string(), "1".to_string()];
        assert!(Kernel::new(
            ins.clone(),
            outs.clone(),
            vec![vec![0.5, 0.5], vec![1.0, 0.0]]
        )
        .is_ok());
        assert!(Kernel::new(
            ins.clone(),
            outs.clone(),
            vec![vec![0.5, 0.6], vec![1.0, 0.0]]
        )
        .is_err());
        assert!(Kernel::new(ins, outs, vec![vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn push_forward_mixes_rows() {
        let k = Kernel::new(
            vec!["a".into(), "b".into()],
            vec!["0".into(), "1".into()],
            vec![vec![1.0, 0.0], vec![0.25, 0.75]],
        )
        .unwrap();
        let px = FiniteDistribution::from_probs(["a", "b"], &[0.5, 0.5]).unwrap();
        let py = k.push_forward(&px).unwrap();
        assert!((py.mass(0) - 0.625).abs() < 1e-15);
    }
}
