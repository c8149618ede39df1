//! Shannon, Rényi and Tsallis entropies of channel-probability vectors, in bits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{channel_probabilities, EngineError};
use crate::graph::OpenGraph;

/// Probabilities at or below this count as absent for `α = 0` and `q = 0`.
pub const COUNT_THRESHOLD: f64 = 1e-12;
/// Rényi and Tsallis parameters closer than this to 1 are rejected.
pub const PARAMETER_GUARD: f64 = 1e-9;
/// Largest `|Σp − 1|` that construction will renormalize away.
pub const NORMALIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("{measure} parameter {value} is outside [0, ∞) or within {PARAMETER_GUARD:e} of 1")]
    BadParameter { measure: &'static str, value: f64 },
    #[error("unrecognized entropy measure `{0}` (expected shannon, renyi_<α> or tsallis_<q>)")]
    BadMeasureName(String),
    #[error("probability {value} at index {index} is outside [0, 1]")]
    BadProbability { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Nonnegative values summing to 1 within `1e−12`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Clamps rounding dust below zero and renormalizes when `|Σp − 1| ≤ 1e−8`.
    pub fn new(values: Vec<f64>) -> Result<Self, EntropyError> {
        let mut values = values;
        for (index, p) in values.iter_mut().enumerate() {
            if !p.is_finite() || *p < -NORMALIZATION_TOL || *p > 1.0 + NORMALIZATION_TOL {
                return Err(EntropyError::BadProbability { index, value: *p });
            }
            *p = p.max(0.0);
        }
        let sum: f64 = values.iter().sum();
        if values.is_empty() || (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(EntropyError::NotNormalized { sum });
        }
        values.iter_mut().for_each(|p| *p /= sum);
        Ok(Self(values))
    }

    pub fn uniform(l: usize) -> Self {
        Self(vec![1.0 / l as f64; l])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `−Σ p log₂ p`, with `0 log 0 = 0`.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    let s: f64 = p
        .values()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum();
    // 0 − s rather than −s so a pure state gives +0.0
    0.0 - s
}

fn check_parameter(measure: &'static str, value: f64) -> Result<(), EntropyError> {
    if !value.is_finite() || value < 0.0 || (value - 1.0).abs() < PARAMETER_GUARD {
        Err(EntropyError::BadParameter { measure, value })
    } else {
        Ok(())
    }
}

/// Rényi switches to the `expm1`/`ln1p` form inside `|α − 1| < NEAR_ONE`.
const NEAR_ONE: f64 = 0.5;

/// `Σ p^s − 1`, accurate when `s` is close to 1.
fn power_sum_minus_one(p: &ProbabilityVector, s: f64) -> f64 {
    if s == 0.0 {
        let count = p.values().iter().filter(|&&x| x > COUNT_THRESHOLD).count();
        return count as f64 - 1.0;
    }
    // p^s = p · e^{(s−1) ln p}, and Σp = 1
    p.values()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * ((s - 1.0) * x.ln()).exp_m1())
        .sum()
}

/// `log₂(Σ p^α) / (1 − α)`; `α = 0` gives `log₂` of the support size.
pub fn renyi(alpha: f64, p: &ProbabilityVector) -> Result<f64, EntropyError> {
    check_parameter("renyi", alpha)?;
    // Far from 1 the power sum can be tiny and must keep its relative precision.
    let ln_sum = if (alpha - 1.0).abs() < NEAR_ONE {
        power_sum_minus_one(p, alpha).ln_1p()
    } else if alpha == 0.0 {
        (power_sum_minus_one(p, 0.0) + 1.0).ln()
    } else {
        p.values().iter().map(|&x| x.powf(alpha)).sum::<f64>().ln()
    };
    Ok(ln_sum / std::f64::consts::LN_2 / (1.0 - alpha) + 0.0)
}

/// `log₂e · (1 − Σ p^q) / (q − 1)`.
pub fn tsallis(q: f64, p: &ProbabilityVector) -> Result<f64, EntropyError> {
    check_parameter("tsallis", q)?;
    Ok(-std::f64::consts::LOG2_E * power_sum_minus_one(p, q) / (q - 1.0) + 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EntropyMeasure {
    Shannon,
    Renyi(f64),
    Tsallis(f64),
}

impl EntropyMeasure {
    pub fn renyi(alpha: f64) -> Result<Self, EntropyError> {
        check_parameter("renyi", alpha).map(|_| Self::Renyi(alpha))
    }

    pub fn tsallis(q: f64) -> Result<Self, EntropyError> {
        check_parameter("tsallis", q).map(|_| Self::Tsallis(q))
    }

    pub fn validate(&self) -> Result<(), EntropyError> {
        match *self {
            Self::Shannon => Ok(()),
            Self::Renyi(a) => check_parameter("renyi", a),
            Self::Tsallis(q) => check_parameter("tsallis", q),
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Self::Shannon => None,
            Self::Renyi(x) | Self::Tsallis(x) => Some(x),
        }
    }

    pub fn evaluate(&self, p: &ProbabilityVector) -> Result<f64, EntropyError> {
        match *self {
            Self::Shannon => Ok(shannon(p)),
            Self::Renyi(a) => renyi(a, p),
            Self::Tsallis(q) => tsallis(q, p),
        }
    }

    /// CSV column header: `shannon`, `renyi_<α>` or `tsallis_<q>`.
    pub fn column_name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EntropyMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shannon => f.write_str("shannon"),
            Self::Renyi(a) => write!(f, "renyi_{a}"),
            Self::Tsallis(q) => write!(f, "tsallis_{q}"),
        }
    }
}

impl FromStr for EntropyMeasure {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EntropyError::BadMeasureName(s.to_string());
        let s_lower = s.trim().to_ascii_lowercase();
        if s_lower == "shannon" {
            return Ok(Self::Shannon);
        }
        let (kind, param) = s_lower.split_once('_').ok_or_else(bad)?;
        let value: f64 = param.parse().map_err(|_| bad())?;
        match kind {
            "renyi" => Self::renyi(value),
            "tsallis" => Self::tsallis(value),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for EntropyMeasure {
    type Error = EntropyError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<EntropyMeasure> for String {
    fn from(m: EntropyMeasure) -> Self {
        m.to_string()
    }
}

/// Channel probabilities at the graph's entrance.
pub fn scattering_probabilities(og: &OpenGraph, k: f64) -> Result<ProbabilityVector, EntropyError> {
    ProbabilityVector::new(channel_probabilities(og, k)?)
}

/// `H(k)` for the graph's entrance channel.
pub fn scattering_entropy(og: &OpenGraph, measure: EntropyMeasure, k: f64) -> Result<f64, EntropyError> {
    measure.evaluate(&scattering_probabilities(og, k)?)
}

/// Several measures from one scattering solve.
pub fn scattering_entropies(
    og: &OpenGraph,
    measures: &[EntropyMeasure],
    k: f64,
) -> Result<Vec<f64>, EntropyError> {
    let p = scattering_probabilities(og, k)?;
    measures.iter().map(|m| m.evaluate(&p)).collect()
}
