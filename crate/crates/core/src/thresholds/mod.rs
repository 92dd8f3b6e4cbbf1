//! Lower and upper rate thresholds for min-sum polar decoding.
//!
//! A pair of vertex sets `(G, E)` on the infinite binary tree of synthetic
//! channels determines two rates. `R_U(G)` sums the mutual information of the
//! vertices in `G`, each weighted by `2^-d`. `R_L(G, E)` propagates the
//! optimized bound `Z*` from each `G` vertex down to the leaves in `E` with
//! the scalar recursion `zeta -> 2 zeta` (minus) and `zeta -> zeta^2` (plus),
//! and sums `max(1 - delta'(zeta), 0) 2^-d` over `E`.

mod scan;
mod sweep;
mod validity;

pub use scan::{compute_rates, compute_thresholds, evaluate};
pub use sweep::{sweep, sweep_csv, SweepRow};
pub use validity::{validate_tree, TreeReport};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::posynomial::PosynomialError;

/// `log2` of the golden ratio.
pub const LOG2_PHI: f64 = 0.694_241_913_630_617_4;

/// Deepest vertex that may carry a posynomial.
pub const MAX_G_DEPTH: u32 = 20;

/// Deepest vertex the scan will visit.
pub const MAX_E_DEPTH: u32 = 62;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ThresholdError {
    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("invalid scan parameters: {0}")]
    BadParams(String),
    #[error("labeler is not good: {0}")]
    LabelerNotGood(String),
    #[error("invalid (G, E) pair: {}", .0.join("; "))]
    InvalidTree(Vec<String>),
    #[error(transparent)]
    Posynomial(#[from] PosynomialError),
    #[error(transparent)]
    Channel(#[from] crate::channels::ChannelError),
}

/// `2 (8 eta)^(log2 phi)`.
pub fn delta_prime(eta: f64) -> Result<f64, ThresholdError> {
    if !(eta >= 0.0) {
        return Err(ThresholdError::NegativeArgument(eta));
    }
    Ok(delta_prime_unchecked(eta))
}

#[inline]
fn delta_prime_unchecked(eta: f64) -> f64 {
    2.0 * (8.0 * eta).powf(LOG2_PHI)
}

/// Inverse of [`delta_prime`]: `(1/8) (delta / 2)^(1 / log2 phi)`.
pub fn eta_of_delta(delta: f64) -> Result<f64, ThresholdError> {
    if !(delta >= 0.0) {
        return Err(ThresholdError::NegativeArgument(delta));
    }
    Ok((delta / 2.0).powf(1.0 / LOG2_PHI) / 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

pub fn zeta_step(zeta: f64, branch: Branch) -> f64 {
    match branch {
        Branch::Minus => 2.0 * zeta,
        Branch::Plus => zeta * zeta,
    }
}

/// Contribution of a leaf with bound `zeta` at depth `d` to the lower rate.
#[inline]
fn leaf_rate(zeta: f64, depth: u32) -> f64 {
    (1.0 - delta_prime_unchecked(zeta)).max(0.0) * weight(depth)
}

#[inline]
fn weight(depth: u32) -> f64 {
    0.5f64.powi(depth as i32)
}

/// Vertex `(d, j)` of the binary tree: depth `d` and `0 <= j < 2^d`.
/// Serializes as `[d, j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Node(pub u32, pub u64);

impl Node {
    pub const ROOT: Node = Node(0, 0);

    pub fn depth(self) -> u32 {
        self.0
    }

    pub fn index(self) -> u64 {
        self.1
    }

    /// The minus child then the plus child.
    pub fn children(self) -> [Node; 2] {
        [
            Node(self.0 + 1, 2 * self.1),
            Node(self.0 + 1, 2 * self.1 + 1),
        ]
    }

    pub fn parent(self) -> Option<Node> {
        (self.0 > 0).then(|| Node(self.0 - 1, self.1 / 2))
    }

    pub fn branch(self) -> Branch {
        if self.1 % 2 == 0 {
            Branch::Minus
        } else {
            Branch::Plus
        }
    }

    pub fn is_well_formed(self) -> bool {
        self.0 <= MAX_E_DEPTH && self.1 >> self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanParams {
    pub d_g: u32,
    pub d_e: u32,
    pub eps: f64,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            d_g: 12,
            d_e: 36,
            eps: 1e-3,
        }
    }
}

impl ScanParams {
    pub fn validate(&self) -> Result<(), ThresholdError> {
        if self.d_g > self.d_e {
            return Err(ThresholdError::BadParams(format!(
                "d_G = {} exceeds d_E = {}",
                self.d_g, self.d_e
            )));
        }
        if self.d_g > MAX_G_DEPTH {
            return Err(ThresholdError::BadParams(format!(
                "d_G = {} exceeds {MAX_G_DEPTH}",
                self.d_g
            )));
        }
        if self.d_e > MAX_E_DEPTH {
            return Err(ThresholdError::BadParams(format!(
                "d_E = {} exceeds {MAX_E_DEPTH}",
                self.d_e
            )));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(ThresholdError::BadParams(format!(
                "eps = {} must be positive",
                self.eps
            )));
        }
        Ok(())
    }
}

/// A vertex of `G` with the statistics of its label distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GRecord {
    pub node: Node,
    pub mi: f64,
    pub z_star: f64,
}

/// A leaf of `E` with its propagated bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ERecord {
    pub node: Node,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTree {
    /// Present when the sets were produced by [`compute_thresholds`].
    pub params: Option<ScanParams>,
    pub g: Vec<GRecord>,
    pub e: Vec<ERecord>,
    pub r_l: f64,
    pub r_u: f64,
}

impl ThresholdTree {
    pub fn g_nodes(&self) -> Vec<Node> {
        self.g.iter().map(|r| r.node).collect()
    }

    pub fn e_nodes(&self) -> Vec<Node> {
        self.e.iter().map(|r| r.node).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }
}

impl Serialize for ThresholdTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("ThresholdTree", 5)?;
        s.serialize_field("params", &self.params)?;
        s.serialize_field("g", &self.g_nodes())?;
        s.serialize_field("e", &self.e_nodes())?;
        s.serialize_field("r_l", &self.r_l)?;
        s.serialize_field("r_u", &self.r_u)?;
        s.end()
    }
}

/// Rates of a scan whose sets were counted but not kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRates {
    pub r_l: f64,
    pub r_u: f64,
    pub g_count: u64,
    pub e_count: u64,
}

/// `R_L` recomputed from the stored leaf bounds.
pub fn rl_of(tree: &ThresholdTree) -> f64 {
    tree.e
        .iter()
        .map(|r| leaf_rate(r.zeta, r.node.depth()))
        .sum()
}

/// `R_U` recomputed from the stored mutual informations.
pub fn ru_of(tree: &ThresholdTree) -> f64 {
    tree.g.iter().map(|r| r.mi * weight(r.node.depth())).sum()
}
