use serde::Serialize;

use crate::models::StandardSystem;
use crate::prob::logspace::kahan_sum;
use crate::{Error, FiniteDistribution, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConverseCheck {
    /// `P[E]`.
    pub p_event: f64,
    /// `P[log dP/dQ > γ]`.
    pub p_tail: f64,
    /// `Q[E]`.
    pub q_event: f64,
    /// `P[log dP/dQ > γ] + e^γ Q[E]`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `P[E] ≤ P[log dP/dQ > γ] + e^γ Q[E]` exactly for an event given
/// as a predicate on atom indices.
pub fn strong_converse_check<E>(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
    event: E,
    gamma: f64,
) -> Result<ConverseCheck>
where
    E: Fn(usize) -> bool,
{
    if p.labels() != q.labels() {
        return Err(Error::DimensionMismatch(
            "both measures must live on the same labels".into(),
        ));
    }
    let mut p_event = Vec::new();
    let mut p_tail = Vec::new();
    let mut q_event = Vec::new();
    for a in 0..p.len() {
        let (lp, lq) = (p.log_mass(a), q.log_mass(a));
        let hit = event(a);
        if lp > f64::NEG_INFINITY && lq == f64::NEG_INFINITY && hit {
            return Err(Error::AbsoluteContinuityViolation(format!(
                "event atom {:?} has P-mass but no Q-mass",
                p.label(a)
            )));
        }
        if hit {
            p_event.push(p.mass(a));
            q_event.push(q.mass(a));
        }
        if lp > f64::NEG_INFINITY && lp - lq > gamma {
            p_tail.push(p.mass(a));
        }
    }
    let (pe, pt, qe) = (kahan_sum(p_event), kahan_sum(p_tail), kahan_sum(q_event));
    let rhs = pt + gamma.exp() * qe;
    Ok(ConverseCheck {
        p_event: pe,
        p_tail: pt,
        q_event: qe,
        rhs,
        holds: pe <= rhs + 1e-12,
    })
}

/// `2 exp(−n ε²/(2σ²))`.
pub fn hoeffding_tail(sigma: f64, n: usize, eps: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            reason: "sub-Gaussian parameter must be positive",
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sample size must be positive",
        });
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "deviation must be nonnegative",
        });
    }
    Ok(2.0 * (-(n as f64) * eps * eps / (2.0 * sigma * sigma)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoeffdingCheck {
    /// `P_{Zⁿ}[|L_Z(w) − L_P(w)| ≥ ε]`.
    pub exact: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Exact deviation probability of the empirical loss of hypothesis `w`
/// against [`hoeffding_tail`] with the loss's `σ`.
pub fn hoeffding_check(sys: &StandardSystem, w: usize, eps: f64) -> Result<HoeffdingCheck> {
    let bound = hoeffding_tail(sys.loss().sigma(), sys.n(), eps)?;
    let pop = sys.population_loss(w);
    let exact = kahan_sum(
        sys.samples()
            .support()
            .filter(|&x| (sys.empirical_loss(w, x) - pop).abs() >= eps - 1e-12)
            .map(|x| sys.samples().mass(x)),
    );
    Ok(HoeffdingCheck {
        exact,
        bound,
        holds: exact <= bound + 1e-12,
    })
}
