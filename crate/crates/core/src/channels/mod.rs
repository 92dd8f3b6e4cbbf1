//! Binary-input memoryless symmetric channels seen through an integer labeler.
//!
//! A channel is stored as the distribution of its label under input 0,
//! `alpha[t] = Pr(lambda(Y) = t | X = 0)` for `t` in `[-gamma, gamma]`. The
//! input-1 distribution is the mirror image, `Pr(lambda(Y) = t | X = 1) =
//! alpha[-t]`, so symmetry holds by construction and the only labeler
//! property left to check is sign consistency.

mod capacity;
mod config;

pub use capacity::{binary_entropy, reference_capacities, reference_capacity, ReferenceKind};
pub use config::ChannelConfig;

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

/// Labeler thresholds used for the 3-bit quantized BI-AWGN channel.
pub const DEFAULT_AWGN_THRESHOLDS: [f64; 3] = [0.2, 0.6, 1.2];

const CUSTOM_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ChannelError {
    #[error("crossover probability {0} is outside [0, 1]")]
    CrossoverOutOfRange(f64),
    #[error("noise standard deviation must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("labeler thresholds must be positive and strictly ascending, got {0:?}")]
    BadThresholds([f64; 3]),
    #[error("label distribution is empty")]
    EmptyDistribution,
    #[error("label {label} has invalid probability {prob}")]
    BadProbability { label: i64, prob: f64 },
    #[error("label probabilities sum to {0}, expected 1")]
    BadNormalization(f64),
    #[error("label `{0}` is not an integer")]
    NonIntegerLabel(String),
    #[error("channel parameter {0} is invalid for this family")]
    BadParameter(f64),
    #[error("malformed channel config: {0}")]
    Config(String),
}

/// Where a channel came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelDescriptor {
    Bsc {
        p: f64,
    },
    #[serde(rename = "biawgn8")]
    QuantizedBiAwgn {
        sigma: f64,
        q: [f64; 3],
    },
    Custom,
}

/// A symmetric binary-input channel collapsed to its label distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledChannel {
    gamma: usize,
    alpha: Vec<f64>,
    descriptor: ChannelDescriptor,
}

impl LabeledChannel {
    /// Binary symmetric channel with the labeler `lambda(y) = 1 - 2y`.
    pub fn bsc(p: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::CrossoverOutOfRange(p));
        }
        Ok(Self {
            gamma: 1,
            alpha: vec![p, 0.0, 1.0 - p],
            descriptor: ChannelDescriptor::Bsc { p },
        })
    }

    /// BPSK over additive Gaussian noise, quantized to the eight labels
    /// `{-4..-1, 1..4}` by the symmetric thresholds `0 < q1 < q2 < q3`.
    pub fn quantized_biawgn(sigma: f64, q: [f64; 3]) -> Result<Self, ChannelError> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(ChannelError::NonPositiveSigma(sigma));
        }
        if !(q[0] > 0.0 && q[0] < q[1] && q[1] < q[2]) || !q[2].is_finite() {
            return Err(ChannelError::BadThresholds(q));
        }
        let alpha = awgn_region_masses(1.0, sigma, q);
        Ok(Self {
            gamma: 4,
            alpha,
            descriptor: ChannelDescriptor::QuantizedBiAwgn { sigma, q },
        })
    }

    /// Arbitrary label distribution. Probabilities must sum to one within
    /// `1e-9`; the result is renormalized exactly.
    pub fn custom(alpha_map: &BTreeMap<i64, f64>) -> Result<Self, ChannelError> {
        if alpha_map.is_empty() {
            return Err(ChannelError::EmptyDistribution);
        }
        for (&label, &prob) in alpha_map {
            if !(prob >= 0.0) || !prob.is_finite() {
                return Err(ChannelError::BadProbability { label, prob });
            }
        }
        let total: f64 = alpha_map.values().sum();
        if (total - 1.0).abs() > CUSTOM_SUM_TOLERANCE {
            return Err(ChannelError::BadNormalization(total));
        }
        let gamma = alpha_map
            .keys()
            .map(|t| t.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
            .max(1);
        let mut alpha = vec![0.0; 2 * gamma + 1];
        for (&label, &prob) in alpha_map {
            alpha[(label + gamma as i64) as usize] = prob / total;
        }
        Ok(Self {
            gamma,
            alpha,
            descriptor: ChannelDescriptor::Custom,
        })
    }

    /// Label range bound: all labels lie in `[-gamma, gamma]`.
    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// `Pr(lambda(Y) = t | X = 0)`; zero outside the label range.
    pub fn alpha(&self, t: i64) -> f64 {
        let g = self.gamma as i64;
        if t < -g || t > g {
            0.0
        } else {
            self.alpha[(t + g) as usize]
        }
    }

    /// `Pr(lambda(Y) = t | X = x)`.
    pub fn transition(&self, t: i64, x: u8) -> f64 {
        if x == 0 {
            self.alpha(t)
        } else {
            self.alpha(-t)
        }
    }

    /// Dense label distribution under input 0, indexed `t + gamma`.
    pub fn alpha_dense(&self) -> &[f64] {
        &self.alpha
    }

    /// Labels with non-zero probability, ascending.
    pub fn support(&self) -> Vec<i64> {
        let g = self.gamma as i64;
        (-g..=g).filter(|&t| self.alpha(t) > 0.0).collect()
    }

    pub fn descriptor(&self) -> &ChannelDescriptor {
        &self.descriptor
    }

    /// The same family with its scalar parameter replaced (crossover for BSC,
    /// noise level for the quantized AWGN channel).
    pub fn with_parameter(&self, value: f64) -> Result<Self, ChannelError> {
        match &self.descriptor {
            ChannelDescriptor::Bsc { .. } => Self::bsc(value),
            ChannelDescriptor::QuantizedBiAwgn { q, .. } => Self::quantized_biawgn(value, *q),
            ChannelDescriptor::Custom => Err(ChannelError::BadParameter(value)),
        }
    }

    /// The family's scalar parameter, if it has one.
    pub fn parameter(&self) -> Option<f64> {
        match self.descriptor {
            ChannelDescriptor::Bsc { p } => Some(p),
            ChannelDescriptor::QuantizedBiAwgn { sigma, .. } => Some(sigma),
            ChannelDescriptor::Custom => None,
        }
    }
}

/// Masses of the eight labeler regions for `y = mean + noise`, indexed
/// `t + 4` with the unused label 0 at index 4.
pub(crate) fn awgn_region_masses(mean: f64, sigma: f64, q: [f64; 3]) -> Vec<f64> {
    // Pr(Y >= x), evaluated through erfc to keep tail precision.
    let upper = |x: f64| 0.5 * erfc((x - mean) / (sigma * SQRT_2));
    let edges = [
        f64::NEG_INFINITY,
        -q[2],
        -q[1],
        -q[0],
        0.0,
        q[0],
        q[1],
        q[2],
        f64::INFINITY,
    ];
    let tail = |x: f64| {
        if x == f64::NEG_INFINITY {
            1.0
        } else if x == f64::INFINITY {
            0.0
        } else {
            upper(x)
        }
    };
    let mut alpha = vec![0.0; 9];
    for (k, w) in edges.windows(2).enumerate() {
        let mass = (tail(w[0]) - tail(w[1])).max(0.0);
        // regions map to labels -4,-3,-2,-1,1,2,3,4
        let label = if k < 4 { k as i64 - 4 } else { k as i64 - 3 };
        alpha[(label + 4) as usize] = mass;
    }
    alpha
}

/// A single labeler violation: which property failed, at which label, and the
/// two probabilities compared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub property: String,
    pub label: i64,
    pub alpha_pos: f64,
    pub alpha_neg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelerReport {
    pub is_fair: bool,
    pub is_good: bool,
    pub violations: Vec<Violation>,
}

impl LabelerReport {
    /// One-line description of the violations, empty when there are none.
    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| {
                format!(
                    "{} fails at label {} ({} < {})",
                    v.property, v.label, v.alpha_pos, v.alpha_neg
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Checks sign consistency: `alpha[t] >= alpha[-t]` for every `t > 0`, strict
/// for at least one. Symmetry preservation and the finite integer range hold
/// by representation, so a fair labeler here is also good.
pub fn validate_labeler(ch: &LabeledChannel) -> LabelerReport {
    let mut violations = Vec::new();
    let mut strict = false;
    for t in 1..=ch.gamma() as i64 {
        let (pos, neg) = (ch.alpha(t), ch.alpha(-t));
        if pos < neg {
            violations.push(Violation {
                property: "sign-consistency".into(),
                label: t,
                alpha_pos: pos,
                alpha_neg: neg,
            });
        } else if pos > neg {
            strict = true;
        }
    }
    if !strict && violations.is_empty() {
        violations.push(Violation {
            property: "strict-sign-consistency".into(),
            label: 0,
            alpha_pos: 0.0,
            alpha_neg: 0.0,
        });
    }
    let is_fair = violations.is_empty();
    LabelerReport {
        is_fair,
        is_good: is_fair,
        violations,
    }
}
