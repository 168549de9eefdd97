//! Problem definition files.
//!
//! ```json
//! {
//!   "pz": {"outcomes": [0, 1], "probs": [0.5, 0.5]},
//!   "n": 2,
//!   "loss": "zero-one",
//!   "learner": {"kind": "erm", "tie": "lowest-index"}
//! }
//! ```
//!
//! A general loss is `{"hypotheses": [...], "values": [[...], ...],
//! "range": [a, b], "sigma": s}` with one row per hypothesis.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::{
    assemble_standard, assemble_subset, delta_constant, LearnerSpec, LossTable, StandardSystem,
    SubsetSystem,
};
use crate::prob::io::{label_string, DistributionDoc};
use crate::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LossDoc {
    Named(String),
    Table {
        #[serde(default)]
        hypotheses: Option<Vec<Value>>,
        values: Vec<Vec<f64>>,
        range: (f64, f64),
        #[serde(default)]
        sigma: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    #[serde(default)]
    pub name: Option<String>,
    pub pz: DistributionDoc,
    pub n: usize,
    pub loss: LossDoc,
    pub learner: LearnerSpec,
    /// Optional `Δ(z1, z2)` table replacing `(b − a)²` in the subset bounds.
    #[serde(default)]
    pub delta_table: Option<Vec<Vec<f64>>>,
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn loss_table(&self) -> Result<LossTable> {
        let pz = self.pz.to_distribution()?;
        match &self.loss {
            LossDoc::Named(name) if name == "zero-one" => Ok(LossTable::zero_one(pz.labels())),
            LossDoc::Named(other) => Err(Error::InvalidProblem(format!("unknown loss {other:?}"))),
            LossDoc::Table {
                hypotheses,
                values,
                range,
                sigma,
            } => {
                let hyps = match hypotheses {
                    Some(h) => h.iter().map(label_string).collect::<Result<Vec<_>>>()?,
                    None => (0..values.len()).map(|w| w.to_string()).collect(),
                };
                let table = LossTable::new(hyps, pz.labels().to_vec(), values.clone(), *range)?;
                match sigma {
                    Some(s) => table.with_sigma(*s),
                    None => Ok(table),
                }
            }
        }
    }

    pub fn standard(&self) -> Result<StandardSystem> {
        let pz = self.pz.to_distribution()?;
        let loss = self.loss_table()?;
        let learner = self.learner.build(&loss, self.n)?;
        assemble_standard(pz, self.n, learner, loss)
    }

    pub fn subset(&self) -> Result<SubsetSystem> {
        let pz = self.pz.to_distribution()?;
        let loss = self.loss_table()?;
        let learner = self.learner.build(&loss, self.n)?;
        let sys = assemble_subset(pz.clone(), self.n, learner, loss.clone())?;
        match &self.delta_table {
            Some(d) => sys.with_range_constant(delta_constant(d, &loss, &pz)?),
            None => Ok(sys),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_zero_one_erm_problem() {
        let p = Problem::from_json(
            r#"{"pz": {"outcomes": [0, 1], "probs": ["0.5", "0.5"]}, "n": 2,
                "loss": "zero-one", "learner": {"kind": "erm"}}"#,
        )
        .unwrap();
        let s = p.standard().unwrap();
        assert!((s.pw().mass(0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parses_general_loss_table() {
        let p = Problem::from_json(
            r#"{"pz": {"outcomes": ["a", "b"], "probs": [0.25, 0.75]}, "n": 1,
                "loss": {"hypotheses": ["h0", "h1", "h2"], "values": [[0, 1], [1, 0], [0.5, 0.5]],
                         "range": [0, 1], "sigma": 0.75},
                "learner": {"kind": "gibbs", "beta": 2}}"#,
        )
        .unwrap();
        let s = p.standard().unwrap();
        assert_eq!(s.n_hypotheses(), 3);
        assert_eq!(s.loss().sigma(), 0.75);
        assert!(p.subset().is_ok());
    }

    #[test]
    fn rejects_unknown_fields_and_losses() {
        assert!(Problem::from_json(
            r#"{"pz": {"outcomes": [0], "probs": [1]}, "n": 1, "loss": "zero-one",
                "learner": {"kind": "erm"}, "bogus": 1}"#
        )
        .is_err());
        let p = Problem::from_json(
            r#"{"pz": {"outcomes": [0], "probs": [1]}, "n": 1, "loss": "squared",
                "learner": {"kind": "erm"}}"#,
        )
        .unwrap();
        assert!(p.standard().is_err());
    }
}
