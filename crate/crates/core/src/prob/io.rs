//! JSON documents for distributions and kernels.
//!
//! A distribution is `{"outcomes": [...], "probs": [...]}`; a kernel is
//! `{"rows": {input_label: <distribution or {label: prob}>}}`. Labels may
//! be strings or numbers, probabilities floats or decimal strings.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;

use super::{FiniteDistribution, Kernel};
use crate::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Prob {
    Number(f64),
    Text(String),
}

impl Prob {
    pub fn value(&self) -> Result<f64> {
        match self {
            Prob::Number(v) => Ok(*v),
            Prob::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidDistribution(format!("cannot parse probability {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct DistributionDoc {
    pub outcomes: Vec<Value>,
    pub probs: Vec<Prob>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RowDoc {
    Distribution(DistributionDoc),
    Map(BTreeMap<String, Prob>),
}

#[derive(Debug, Clone, Deserialize)]
pub struct KernelDoc {
    pub rows: BTreeMap<String, RowDoc>,
}

/// Renders a JSON label (string or number) as a plain label string.
pub fn label_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(Error::InvalidDistribution(format!(
            "label {other} must be a string or number"
        ))),
    }
}

impl DistributionDoc {
    pub fn to_distribution(&self) -> Result<FiniteDistribution> {
        let labels = self
            .outcomes
            .iter()
            .map(label_string)
            .collect::<Result<Vec<_>>>()?;
        let probs = self
            .probs
            .iter()
            .map(Prob::value)
            .collect::<Result<Vec<_>>>()?;
        FiniteDistribution::from_probs(labels, &probs)
    }
}

impl RowDoc {
    fn to_pairs(&self) -> Result<Vec<(String, f64)>> {
        match self {
            RowDoc::Distribution(d) => {
                if d.outcomes.len() != d.probs.len() {
                    return Err(Error::DimensionMismatch(
                        "kernel row outcomes and probs differ in length".into(),
                    ));
                }
                d.outcomes
                    .iter()
                    .zip(&d.probs)
                    .map(|(l, p)| Ok((label_string(l)?, p.value()?)))
                    .collect()
            }
            RowDoc::Map(m) => m.iter().map(|(l, p)| Ok((l.clone(), p.value()?))).collect(),
        }
    }
}

impl KernelDoc {
    /// Builds a kernel whose output order is `outputs` when given, otherwise
    /// the order of the first row. Labels missing from a row get mass zero.
    pub fn to_kernel(&self, outputs: Option<&[String]>) -> Result<Kernel> {
        let rows: Vec<(String, Vec<(String, f64)>)> = self
            .rows
            .iter()
            .map(|(k, r)| Ok((k.clone(), r.to_pairs()?)))
            .collect::<Result<_>>()?;
        let outputs: Vec<String> = match outputs {
            Some(o) => o.to_vec(),
            None => rows
                .first()
                .map(|(_, r)| r.iter().map(|(l, _)| l.clone()).collect())
                .unwrap_or_default(),
        };
        let mut inputs = Vec::with_capacity(rows.len());
        let mut dense = Vec::with_capacity(rows.len());
        for (input, pairs) in rows {
            let mut row = vec![0.0; outputs.len()];
            for (l, p) in pairs {
                let j = outputs
                    .iter()
                    .position(|o| *o == l)
                    .ok_or_else(|| Error::UnknownLabel(l.clone()))?;
                row[j] += p;
            }
            inputs.push(input);
            dense.push(row);
        }
        Kernel::new(inputs, outputs, dense)
    }
}

pub fn distribution_from_json(text: &str) -> Result<FiniteDistribution> {
    let doc: DistributionDoc = serde_json::from_str(text)?;
    doc.to_distribution()
}

pub fn kernel_from_json(text: &str) -> Result<Kernel> {
    let doc: KernelDoc = serde_json::from_str(text)?;
    doc.to_kernel(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_probability_encodings() {
        let d =
            distribution_from_json(r#"{"outcomes": [0, "b"], "probs": ["0.25", 0.75]}"#).unwrap();
        assert_eq!(d.labels(), ["0", "b"]);
        assert!((d.mass(0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn near_normalized_input_is_rescaled_and_far_input_rejected() {
        let d = distribution_from_json(
            r#"{"outcomes": ["a","b"], "probs": [0.3333333333, 0.6666666666]}"#,
        )
        .unwrap();
        assert!((d.mass(0) + d.mass(1) - 1.0).abs() < 1e-15);
        assert!(distribution_from_json(r#"{"outcomes": ["a","b"], "probs": [0.3, 0.6]}"#).is_err());
        assert!(distribution_from_json(r#"{"outcomes": ["a","b"], "probs": ["x", 1]}"#).is_err());
    }

    #[test]
    fn kernel_rows_in_both_shapes() {
        let k = kernel_from_json(
            r#"{"rows": {"a": {"outcomes": ["0","1"], "probs": [1, 0]},
                         "b": {"1": "0.5", "0": 0.5}}}"#,
        )
        .unwrap();
        assert_eq!(k.inputs(), ["a", "b"]);
        assert_eq!(k.outputs(), ["0", "1"]);
        assert_eq!(k.row(1), [0.5, 0.5]);
    }
}
