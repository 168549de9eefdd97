use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Moment order `t ∈ (0, ∞]`. Infinity is a distinct variant, never a float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(f64),
    Infinite,
}

impl Order {
    pub fn finite(t: f64) -> Result<Self> {
        let o = Order::Finite(t);
        o.check()?;
        Ok(o)
    }

    pub fn check(self) -> Result<()> {
        match self {
            Order::Infinite => Ok(()),
            Order::Finite(t) if t.is_finite() && t > 0.0 => Ok(()),
            Order::Finite(t) => Err(Error::InvalidParameter {
                name: "t",
                value: t,
                reason: "moment order must be positive (or infinite)",
            }),
        }
    }

    /// `(δ/2)^{1/t}`, which is 1 for `t = ∞`.
    pub fn root_of(self, x: f64) -> f64 {
        match self {
            Order::Finite(t) => x.powf(1.0 / t),
            Order::Infinite => 1.0,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(t) => write!(f, "{t}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Order::Infinite),
            other => {
                let t: f64 = other.parse().map_err(|_| Error::InvalidParameter {
                    name: "t",
                    value: f64::NAN,
                    reason: "moment order must be a number or \"inf\"",
                })?;
                if t == f64::INFINITY {
                    return Ok(Order::Infinite);
                }
                Order::finite(t)
            }
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(t) => s.serialize_f64(*t),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(t) => Order::finite(t),
            Raw::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let v: Vec<Order> = serde_json::from_str(r#"[1, 2.5, "inf"]"#).unwrap();
        assert_eq!(v, [Order::Finite(1.0), Order::Finite(2.5), Order::Infinite]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.0,2.5,"inf"]"#);
        assert!(serde_json::from_str::<Order>("0").is_err());
        assert!("-1".parse::<Order>().is_err());
    }
}
