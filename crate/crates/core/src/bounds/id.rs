use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{Flavor, Gamma, Order, Scope};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    Standard,
    Subset,
}

/// Names of the bound operations, as used in reports and configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundId {
    AvgMi,
    Pacb,
    PacbMoment,
    SdDensity,
    SdMoment,
    SdLeakage,
    SdRenyi,
    SdTail,
    SdTailMoment,
    SdTailLeakage,
    CmiAvg,
    CondPacb,
    CondPacbMoment,
    CondSdDensity,
    CondSdMoment,
    CondSdLeakage,
    CondSdRenyiPair,
    CondTail,
    CondTailMoment,
    CondTailLeakage,
    CondAlphaMi,
    CondAlphaMiLeakage,
    CondAlphaMiRenyi,
}

impl BoundId {
    pub const ALL: [BoundId; 23] = [
        BoundId::AvgMi,
        BoundId::Pacb,
        BoundId::PacbMoment,
        BoundId::SdDensity,
        BoundId::SdMoment,
        BoundId::SdLeakage,
        BoundId::SdRenyi,
        BoundId::SdTail,
        BoundId::SdTailMoment,
        BoundId::SdTailLeakage,
        BoundId::CmiAvg,
        BoundId::CondPacb,
        BoundId::CondPacbMoment,
        BoundId::CondSdDensity,
        BoundId::CondSdMoment,
        BoundId::CondSdLeakage,
        BoundId::CondSdRenyiPair,
        BoundId::CondTail,
        BoundId::CondTailMoment,
        BoundId::CondTailLeakage,
        BoundId::CondAlphaMi,
        BoundId::CondAlphaMiLeakage,
        BoundId::CondAlphaMiRenyi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::AvgMi => "avg-mi",
            BoundId::Pacb => "pacb",
            BoundId::PacbMoment => "pacb-moment",
            BoundId::SdDensity => "sd-density",
            BoundId::SdMoment => "sd-moment",
            BoundId::SdLeakage => "sd-leakage",
            BoundId::SdRenyi => "sd-renyi",
            BoundId::SdTail => "sd-tail",
            BoundId::SdTailMoment => "sd-tail-moment",
            BoundId::SdTailLeakage => "sd-tail-leakage",
            BoundId::CmiAvg => "cmi-avg",
            BoundId::CondPacb => "cond-pacb",
            BoundId::CondPacbMoment => "cond-pacb-moment",
            BoundId::CondSdDensity => "cond-sd-density",
            BoundId::CondSdMoment => "cond-sd-moment",
            BoundId::CondSdLeakage => "cond-sd-leakage",
            BoundId::CondSdRenyiPair => "cond-sd-renyi-pair",
            BoundId::CondTail => "cond-tail",
            BoundId::CondTailMoment => "cond-tail-moment",
            BoundId::CondTailLeakage => "cond-tail-leakage",
            BoundId::CondAlphaMi => "cond-alpha-mi",
            BoundId::CondAlphaMiLeakage => "cond-alpha-mi-leakage",
            BoundId::CondAlphaMiRenyi => "cond-alpha-mi-renyi",
        }
    }

    pub fn setting(self) -> Setting {
        if self >= BoundId::CmiAvg {
            Setting::Subset
        } else {
            Setting::Standard
        }
    }

    pub fn flavor(self) -> Flavor {
        match self {
            BoundId::AvgMi | BoundId::CmiAvg => Flavor::Average,
            BoundId::Pacb | BoundId::PacbMoment | BoundId::CondPacb | BoundId::CondPacbMoment => {
                Flavor::PacBayes
            }
            _ => Flavor::SingleDraw,
        }
    }

    pub fn scope(self) -> Scope {
        match self {
            BoundId::Pacb | BoundId::SdDensity | BoundId::CondPacb | BoundId::CondSdDensity => {
                Scope::DataDependent
            }
            _ => Scope::DataIndependent,
        }
    }

    /// Bounds that hold with probability `1 − δ` rather than in expectation.
    pub fn is_probabilistic(self) -> bool {
        self.flavor() != Flavor::Average
    }

    /// Whether the bound reads a moment order `t`.
    pub fn uses_t(self) -> bool {
        matches!(
            self,
            BoundId::PacbMoment
                | BoundId::SdMoment
                | BoundId::SdTailMoment
                | BoundId::CondPacbMoment
                | BoundId::CondSdMoment
                | BoundId::CondTailMoment
        )
    }

    /// Whether the bound reads an order `α > 1`.
    pub fn uses_alpha(self) -> bool {
        matches!(
            self,
            BoundId::SdRenyi
                | BoundId::CondSdRenyiPair
                | BoundId::CondAlphaMi
                | BoundId::CondAlphaMiRenyi
        )
    }

    /// Whether the bound reads a tail threshold `γ`.
    pub fn uses_gamma(self) -> bool {
        matches!(self, BoundId::SdTail | BoundId::CondTail)
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

impl Serialize for BoundId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A bound together with the parameters needed to evaluate it.
///
/// `to_gen` composes a random-subset bound on `ĝen` with the penalty that
/// turns it into a bound on `gen(W, Z(S))`. Its string form is the bound
/// name prefixed by `gen:`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSpec {
    pub id: BoundId,
    pub t: Order,
    pub alpha: f64,
    pub gamma: Gamma,
    pub to_gen: bool,
}

impl BoundSpec {
    pub fn new(id: BoundId) -> Self {
        Self {
            id,
            t: Order::Finite(2.0),
            alpha: 2.0,
            gamma: Gamma::Auto,
            to_gen: false,
        }
    }

    pub fn with_t(self, t: Order) -> Self {
        Self { t, ..self }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_gamma(self, gamma: Gamma) -> Self {
        Self { gamma, ..self }
    }

    /// Composes with the `ĝen → gen` conversion. Only probabilistic
    /// random-subset bounds can be composed.
    pub fn to_gen(self) -> crate::Result<Self> {
        if self.id.setting() != Setting::Subset || !self.id.is_probabilistic() {
            return Err(Error::UnknownBound(format!("gen:{}", self.id)));
        }
        Ok(Self {
            to_gen: true,
            ..self
        })
    }

    pub fn label(&self) -> String {
        if self.to_gen {
            format!("gen:{}", self.id)
        } else {
            self.id.to_string()
        }
    }
}

impl FromStr for BoundSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.strip_prefix("gen:") {
            Some(inner) => BoundSpec::new(inner.parse()?).to_gen(),
            None => Ok(BoundSpec::new(s.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in BoundId::ALL {
            assert_eq!(id.as_str().parse::<BoundId>().unwrap(), id);
        }
        assert!(matches!(
            "nope".parse::<BoundId>(),
            Err(Error::UnknownBound(_))
        ));
    }

    #[test]
    fn settings_split_at_cmi() {
        assert_eq!(BoundId::SdTailLeakage.setting(), Setting::Standard);
        assert_eq!(BoundId::CmiAvg.setting(), Setting::Subset);
        assert_eq!(BoundId::CondAlphaMiRenyi.setting(), Setting::Subset);
    }

    #[test]
    fn composition_only_for_subset_probabilistic() {
        assert!("gen:cond-sd-moment".parse::<BoundSpec>().unwrap().to_gen);
        assert!("gen:cmi-avg".parse::<BoundSpec>().is_err());
        assert!("gen:sd-moment".parse::<BoundSpec>().is_err());
    }
}
