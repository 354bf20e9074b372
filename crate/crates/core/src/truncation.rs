//! Choosing a truncation dimension from the known coefficient formulas.
//!
//! The state families are labeled by a signed order `m`:
//! `m >= 0` is the photon-added family (`m = 0` is the coherent state),
//! with `|c_{n+m}|^2 ∝ |α|^{2n} (n+m)! / (n!)^2`; `m < 0` is the negative
//! family with `|c_n|^2 ∝ |α|^{2n} n! / ((n+|m|)!)^2`. Weights are handled in
//! log space so factorials never overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::log_factorial;

pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_DIM: usize = 512;

const PROFILE_TERM_CAP: usize = 2_000_000;
// e^-800 is below the smallest subnormal relative to the peak.
const NEGLIGIBLE_LOG: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationPolicy {
    /// Largest probability mass allowed above the truncation edge.
    pub tail_tol: f64,
    pub max_dim: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tail_tol: DEFAULT_TAIL_TOL, max_dim: DEFAULT_MAX_DIM }
    }
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, max_dim: usize) -> Result<Self> {
        let policy = Self { tail_tol, max_dim };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(Error::InvalidPolicy(format!("tail_tol must lie in (0, 1), got {}", self.tail_tol)));
        }
        if self.max_dim < 2 {
            return Err(Error::InvalidPolicy(format!("max_dim must be >= 2, got {}", self.max_dim)));
        }
        Ok(())
    }
}

/// Unnormalized `ln |c_k|^2` of the family with signed order `m`, or `-inf`
/// outside its support.
pub(crate) fn log_weight(abs_alpha: f64, m: i64, k: usize) -> f64 {
    let order = m.unsigned_abs() as usize;
    let (power, log_fact) = if m >= 0 {
        if k < order {
            return f64::NEG_INFINITY;
        }
        let j = k - order;
        (j, log_factorial(k) - 2.0 * log_factorial(j))
    } else {
        (k, log_factorial(k) - 2.0 * log_factorial(k + order))
    };
    if power == 0 {
        log_fact
    } else if abs_alpha == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * power as f64 * abs_alpha.ln() + log_fact
    }
}

/// Normalized occupation probabilities of a family, summed far enough that
/// everything omitted is below double precision relative to the peak.
#[derive(Debug, Clone)]
pub struct WeightProfile {
    /// `ln` of the normalization sum `sum_k exp(log_weight_k)`.
    pub log_norm: f64,
    probs: Vec<f64>,
    suffix: Vec<f64>,
}

impl WeightProfile {
    pub fn new(abs_alpha: f64, m: i64) -> Self {
        let order = m.unsigned_abs() as usize;
        let mut logs = Vec::new();
        let mut peak = f64::NEG_INFINITY;
        for k in 0..PROFILE_TERM_CAP {
            let l = log_weight(abs_alpha, m, k);
            peak = peak.max(l);
            logs.push(l);
            if abs_alpha == 0.0 && k >= order {
                break;
            }
            // The weight ratio is monotone in k once k exceeds the order, so a
            // decreasing, negligible term there ends the profile.
            if k > order + 1 && l < logs[k - 1] && l < peak - NEGLIGIBLE_LOG {
                break;
            }
        }
        let scaled: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
        let total: f64 = scaled.iter().sum();
        let log_norm = peak + total.ln();
        let probs: Vec<f64> = scaled.iter().map(|s| s / total).collect();
        let mut suffix = vec![0.0; probs.len() + 1];
        for k in (0..probs.len()).rev() {
            suffix[k] = suffix[k + 1] + probs[k];
        }
        Self { log_norm, probs, suffix }
    }

    /// Probability of occupation `k`.
    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    /// Mass on occupations `>= dim`.
    pub fn tail(&self, dim: usize) -> f64 {
        self.suffix.get(dim).copied().unwrap_or(0.0)
    }
}

/// Probability mass of the family `(α, m)` above level `dim - 1`.
pub fn tail_mass(alpha: Complex64, m: i64, dim: usize) -> f64 {
    WeightProfile::new(alpha.norm(), m).tail(dim)
}

/// Smallest dimension whose analytic tail mass is below `policy.tail_tol`.
pub fn choose_dim(alpha: Complex64, m: i64, policy: &TruncationPolicy) -> Result<usize> {
    policy.validate()?;
    let profile = WeightProfile::new(alpha.norm(), m);
    (1..=policy.max_dim)
        .find(|&d| profile.tail(d) < policy.tail_tol)
        .ok_or(Error::DimensionCap { max_dim: policy.max_dim, tail: profile.tail(policy.max_dim), tol: policy.tail_tol })
}
