//! Closed-form diagonal models for the infinitely many modes beyond the block.
//!
//! Tail mode `j` (counted from 1) has symplectic eigenvalue `dⱼ` on both
//! quadratures. The family is small enough that the summability conditions
//! `Σ(dⱼ − 1)² < ∞` and `Σ(dⱼ − 1) < ∞` are decided exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parametric tail sequence `dⱼ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TailSpec", into = "TailSpec")]
pub enum TailModel {
    /// `dⱼ = 1`: every tail mode in vacuum.
    Identity,
    /// `dⱼ = 1 + a·rʲ`.
    Geometric { a: f64, r: f64 },
    /// `dⱼ = 1 + a/jᵖ`.
    Power { a: f64, p: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum TailSpec {
    Identity,
    Geometric { a: f64, r: f64 },
    Power { a: f64, p: f64 },
}

impl TryFrom<TailSpec> for TailModel {
    type Error = Error;

    fn try_from(spec: TailSpec) -> Result<Self> {
        match spec {
            TailSpec::Identity => Ok(TailModel::Identity),
            TailSpec::Geometric { a, r } => TailModel::geometric(a, r),
            TailSpec::Power { a, p } => TailModel::power(a, p),
        }
    }
}

impl From<TailModel> for TailSpec {
    fn from(model: TailModel) -> Self {
        match model {
            TailModel::Identity => TailSpec::Identity,
            TailModel::Geometric { a, r } => TailSpec::Geometric { a, r },
            TailModel::Power { a, p } => TailSpec::Power { a, p },
        }
    }
}

impl Default for TailModel {
    fn default() -> Self {
        TailModel::Identity
    }
}

impl fmt::Display for TailModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailModel::Identity => write!(f, "identity"),
            TailModel::Geometric { a, r } => write!(f, "geometric(a={a}, r={r})"),
            TailModel::Power { a, p } => write!(f, "power(a={a}, p={p})"),
        }
    }
}

/// Verdicts on the three admissibility conditions restricted to the tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailClassification {
    /// `dⱼ ≥ 1` for all `j`.
    pub cond1_uncertainty: bool,
    /// `Σ(dⱼ − 1)² < ∞`.
    pub cond2_hilbert_schmidt: bool,
    /// `Σ(dⱼ − 1) < ∞`.
    pub cond3_trace_class: bool,
    pub witness: String,
}

impl TailModel {
    pub fn geometric(a: f64, r: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "geometric tail needs a > 0 and 0 < r < 1, got a={a}, r={r}"
            )));
        }
        Ok(TailModel::Geometric { a, r })
    }

    pub fn power(a: f64, p: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) || !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power tail needs a > 0 and p > 0, got a={a}, p={p}"
            )));
        }
        Ok(TailModel::Power { a, p })
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, TailModel::Identity)
    }

    /// `dⱼ − 1`, computed without cancellation.
    pub fn excess(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::InvalidIndex(j));
        }
        Ok(match *self {
            TailModel::Identity => 0.0,
            TailModel::Geometric { a, r } => a * r.powf(j as f64),
            TailModel::Power { a, p } => a / (j as f64).powf(p),
        })
    }

    /// Symplectic eigenvalue `dⱼ` of tail mode `j ≥ 1`.
    pub fn d(&self, j: usize) -> Result<f64> {
        self.excess(j).map(|e| 1.0 + e)
    }

    /// Thermal parameter `sⱼ` with `dⱼ = coth(sⱼ/2)`.
    pub fn s(&self, j: usize) -> Result<f64> {
        let e = self.excess(j)?;
        if e == 0.0 {
            return Err(Error::InfiniteParameter);
        }
        Ok(thermal_parameter_from_excess(e))
    }

    pub fn classify(&self) -> TailClassification {
        let (cond2, cond3, witness) = match *self {
            TailModel::Identity => (true, true, "identity tail: all terms vanish".to_string()),
            TailModel::Geometric { r, .. } => (
                true,
                true,
                format!("geometric series with ratio {r} < 1 (and ratio {} for squares)", r * r),
            ),
            TailModel::Power { p, .. } => (
                p > 0.5,
                p > 1.0,
                format!(
                    "p-series: Σ j^-{p} {} (needs p > 1), Σ j^-{} {} (needs 2p > 1)",
                    if p > 1.0 { "converges" } else { "diverges" },
                    2.0 * p,
                    if p > 0.5 { "converges" } else { "diverges" },
                ),
            ),
        };
        TailClassification {
            cond1_uncertainty: true,
            cond2_hilbert_schmidt: cond2,
            cond3_trace_class: cond3,
            witness,
        }
    }

    /// `(Σ_{j≤terms}(dⱼ − 1), Σ_{j≤terms}(dⱼ − 1)²)`.
    pub fn partial_sums(&self, terms: usize) -> (f64, f64) {
        (1..=terms)
            .map(|j| self.excess(j).expect("j >= 1"))
            .fold((0.0, 0.0), |(s1, s2), e| (s1 + e, s2 + e * e))
    }

    /// `ln Π_j (1 − e^{−sⱼ})` over the whole tail: the tail's share of the
    /// largest density eigenvalue. Requires the trace-class condition.
    pub fn log_ground_weight(&self) -> Result<f64> {
        // 1 − e^{−s} = 2 / (2 + e) with e = d − 1
        match *self {
            TailModel::Identity => Ok(0.0),
            TailModel::Geometric { .. } => {
                let mut total = 0.0;
                for j in 1.. {
                    let half = 0.5 * self.excess(j)?;
                    total -= half.ln_1p();
                    if half < 1e-18 {
                        break;
                    }
                }
                Ok(total)
            }
            TailModel::Power { a, p } => {
                if p <= 1.0 {
                    return Err(Error::NoDensityMatrix(format!(
                        "tail {self} has Σ(dⱼ − 1) = ∞"
                    )));
                }
                const TERMS: usize = 200_000;
                let mut total = 0.0;
                for j in 1..=TERMS {
                    total -= (0.5 * self.excess(j)?).ln_1p();
                }
                // ∫_{N+½}^∞ ln(1 + c x^{-p}) dx ≈ c (N+½)^{1-p} / (p-1)
                let c = 0.5 * a;
                let x = TERMS as f64 + 0.5;
                total -= c * x.powf(1.0 - p) / (p - 1.0);
                Ok(total)
            }
        }
    }
}

/// `s = ln((d+1)/(d−1))` written in terms of `e = d − 1`.
pub(crate) fn thermal_parameter_from_excess(e: f64) -> f64 {
    (2.0 / e).ln_1p()
}

/// `s` from a symplectic eigenvalue; `+∞` at (or numerically below) `d = 1`.
pub fn thermal_parameter(d: f64) -> f64 {
    let e = d - 1.0;
    if e <= 0.0 {
        f64::INFINITY
    } else {
        thermal_parameter_from_excess(e)
    }
}

pub fn tail_d(tail: &TailModel, j: usize) -> Result<f64> {
    tail.d(j)
}

pub fn tail_s(tail: &TailModel, j: usize) -> Result<f64> {
    tail.s(j)
}

pub fn classify_tail(tail: &TailModel) -> TailClassification {
    tail.classify()
}

pub fn tail_partial_sums(tail: &TailModel, terms: usize) -> (f64, f64) {
    tail.partial_sums(terms)
}
