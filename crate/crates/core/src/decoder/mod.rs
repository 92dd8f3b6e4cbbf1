//! Polar encoding and successive-cancellation decoding.
//!
//! The decoder pairs adjacent inputs, `(lambda_0, lambda_1), (lambda_2,
//! lambda_3), ...`, and returns partial sums `c = (a_0 ^ b_0, b_0, ...)` so that
//! the root's output is the re-encoded codeword `u B_N F^n`. Vertex `(d, j)`
//! of the recursion handles bits `j T .. (j + 1) T` with `T = 2^(n - d)`; its
//! left child is the minus branch.

pub mod kernels;
mod oracle;
mod sim;

use std::collections::HashSet;

use thiserror::Error;

use crate::thresholds::{validate_tree, Node};

pub use oracle::{coset_max_oracle, ORACLE_MAX_LEN};
pub use sim::{simulate, Agreement, DecoderKind, SimConfig, SimResult, LLR_CLAMP};

use kernels::{f_exact, f_tilde, g, Llr};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DecoderError {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("LLR at position {0} is not finite")]
    NonFiniteLlr(usize),
    #[error("invalid genie set: {0}")]
    InvalidGenieSet(String),
    #[error("block length {0} exceeds the oracle limit")]
    TooLong(usize),
    #[error("stage {i} is out of range for length {len}")]
    StageOutOfRange { i: usize, len: usize },
    #[error("bits must be 0 or 1")]
    NotABit,
    #[error("invalid simulation setup: {0}")]
    BadConfig(String),
}

fn log2_len(len: usize) -> Result<u32, DecoderError> {
    if len.is_power_of_two() {
        Ok(len.trailing_zeros())
    } else {
        Err(DecoderError::NotPowerOfTwo(len))
    }
}

fn check_bits(u: &[u8]) -> Result<(), DecoderError> {
    if u.iter().all(|&b| b <= 1) {
        Ok(())
    } else {
        Err(DecoderError::NotABit)
    }
}

/// `x = u B_N F^n`: bit-reversal permutation followed by the butterfly.
pub fn polar_encode(u: &[u8]) -> Result<Vec<u8>, DecoderError> {
    let n = log2_len(u.len())?;
    check_bits(u)?;
    Ok(encode_unchecked(u, n))
}

fn encode_unchecked(u: &[u8], n: u32) -> Vec<u8> {
    let len = u.len();
    let mut x: Vec<u8> = if n == 0 {
        u.to_vec()
    } else {
        (0..len)
            .map(|k| u[k.reverse_bits() >> (usize::BITS - n)])
            .collect()
    };
    let mut half = 1;
    while half < len {
        for block in x.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= b;
            }
        }
        half *= 2;
    }
    x
}

/// Check-node and variable-node rules of a decoder flavor.
trait Kernel {
    type V: Llr;
    fn check(a: Self::V, b: Self::V) -> Self::V;
}

struct MinSum;

impl Kernel for MinSum {
    type V = i64;
    fn check(a: i64, b: i64) -> i64 {
        f_tilde(a, b)
    }
}

struct Exact;

impl Kernel for Exact {
    type V = f64;
    fn check(a: f64, b: f64) -> f64 {
        f_exact(a, b)
    }
}

struct Genie<'a> {
    set: &'a HashSet<Node>,
    truth: &'a [u8],
    flags: Vec<(Node, bool)>,
}

struct Sc<'a, V> {
    frozen: &'a [bool],
    decisions: Vec<u8>,
    values: Vec<V>,
    genie: Option<Genie<'a>>,
}

impl<'a, V: Llr> Sc<'a, V> {
    fn new(frozen: &'a [bool], genie: Option<Genie<'a>>) -> Self {
        Self {
            frozen,
            decisions: Vec::with_capacity(frozen.len()),
            values: Vec::with_capacity(frozen.len()),
            genie,
        }
    }

    fn run<K: Kernel<V = V>>(&mut self, lams: &[V], node: Node) -> Vec<u8> {
        let len = lams.len();
        let mut c = if len == 1 {
            let i = node.index() as usize;
            let bit = u8::from(!self.frozen[i] && lams[0] < V::ZERO);
            self.decisions.push(bit);
            self.values.push(lams[0]);
            vec![bit]
        } else {
            let [minus, plus] = node.children();
            let lf: Vec<V> = lams.chunks_exact(2).map(|p| K::check(p[0], p[1])).collect();
            let a = self.run::<K>(&lf, minus);
            let lg: Vec<V> = lams
                .chunks_exact(2)
                .zip(&a)
                .map(|(p, &ak)| g(ak, p[0], p[1]))
                .collect();
            let b = self.run::<K>(&lg, plus);
            a.iter()
                .zip(&b)
                .flat_map(|(&ak, &bk)| [ak ^ bk, bk])
                .collect()
        };
        if let Some(genie) = self.genie.as_mut() {
            if genie.set.contains(&node) {
                let start = node.index() as usize * len;
                let block = &genie.truth[start..start + len];
                let wrong = self.decisions[start..start + len] != *block;
                genie.flags.push((node, wrong));
                c = encode_unchecked(block, len.trailing_zeros());
            }
        }
        c
    }
}

fn check_frozen(len: usize, frozen: &[bool]) -> Result<(), DecoderError> {
    if frozen.len() == len {
        Ok(())
    } else {
        Err(DecoderError::LengthMismatch {
            expected: len,
            got: frozen.len(),
        })
    }
}

/// Min-sum SC decoding of integer labels; frozen positions decode to 0 and
/// a zero label decides 0.
pub fn msa_sc_decode(labels: &[i64], frozen: &[bool]) -> Result<Vec<u8>, DecoderError> {
    log2_len(labels.len())?;
    check_frozen(labels.len(), frozen)?;
    let mut sc = Sc::new(frozen, None);
    sc.run::<MinSum>(labels, Node::ROOT);
    Ok(sc.decisions)
}

/// SC decoding with the exact check-node rule. `llrs` are base-2 LLRs.
pub fn exact_sc_decode(llrs: &[f64], frozen: &[bool]) -> Result<Vec<u8>, DecoderError> {
    log2_len(llrs.len())?;
    check_frozen(llrs.len(), frozen)?;
    if let Some(k) = llrs.iter().position(|x| !x.is_finite()) {
        return Err(DecoderError::NonFiniteLlr(k));
    }
    let natural: Vec<f64> = llrs.iter().map(|x| x * std::f64::consts::LN_2).collect();
    let mut sc = Sc::new(frozen, None);
    sc.run::<Exact>(&natural, Node::ROOT);
    Ok(sc.decisions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenieOutcome {
    /// Final bit estimates: genie-corrected inside every block, decoder
    /// decisions elsewhere.
    pub u_hat: Vec<u8>,
    /// Decisions as made, before any correction.
    pub decisions: Vec<u8>,
    /// One flag per block in decoding order: did any decision in the block
    /// differ from the truth?
    pub block_flags: Vec<(Node, bool)>,
}

impl GenieOutcome {
    pub fn word_error(&self, truth: &[u8]) -> bool {
        self.decisions != truth
    }
}

/// Checks that `g` is empty or meets every root-to-leaf path of the depth-`n`
/// tree exactly once.
pub fn check_genie_set(g: &[Node], n: u32) -> Result<(), DecoderError> {
    if g.is_empty() {
        return Ok(());
    }
    if let Some(deep) = g.iter().find(|v| v.depth() > n) {
        return Err(DecoderError::InvalidGenieSet(format!(
            "vertex ({}, {}) is deeper than n = {n}",
            deep.0, deep.1
        )));
    }
    if n > 24 {
        return Err(DecoderError::InvalidGenieSet(format!(
            "n = {n} is too deep to check"
        )));
    }
    let leaves: Vec<Node> = (0..1u64 << n).map(|j| Node(n, j)).collect();
    let report = validate_tree(g, &leaves);
    if report.valid {
        Ok(())
    } else {
        Err(DecoderError::InvalidGenieSet(report.problems.join("; ")))
    }
}

/// Min-sum SC decoding with a block genie that corrects the partial sums of
/// every vertex in `g` once its block is decoded.
pub fn block_genie_decode(
    labels: &[i64],
    truth: &[u8],
    g: &[Node],
) -> Result<GenieOutcome, DecoderError> {
    let n = log2_len(labels.len())?;
    check_frozen(labels.len(), &vec![false; truth.len()])?;
    check_bits(truth)?;
    check_genie_set(g, n)?;
    let set: HashSet<Node> = g.iter().copied().collect();
    Ok(genie_run(labels, truth, &set, &vec![false; labels.len()]))
}

fn genie_run(labels: &[i64], truth: &[u8], set: &HashSet<Node>, frozen: &[bool]) -> GenieOutcome {
    let mut sc = Sc::new(
        frozen,
        Some(Genie {
            set,
            truth,
            flags: Vec::new(),
        }),
    );
    sc.run::<MinSum>(labels, Node::ROOT);
    let block_flags = sc.genie.take().map(|g| g.flags).unwrap_or_default();
    let mut u_hat = sc.decisions.clone();
    for &(node, _) in &block_flags {
        let len = labels.len() >> node.depth();
        let start = node.index() as usize * len;
        u_hat[start..start + len].copy_from_slice(&truth[start..start + len]);
    }
    GenieOutcome {
        u_hat,
        decisions: sc.decisions,
        block_flags,
    }
}

/// The label seen by every stage when the preceding bits are `u` (a genie
/// revealing the truth after each decision).
pub fn stage_labels(labels: &[i64], u: &[u8]) -> Result<Vec<i64>, DecoderError> {
    let n = log2_len(labels.len())?;
    check_frozen(labels.len(), &vec![false; u.len()])?;
    check_bits(u)?;
    let set: HashSet<Node> = (0..1u64 << n).map(|j| Node(n, j)).collect();
    let frozen = vec![false; labels.len()];
    let mut sc = Sc::new(
        &frozen,
        Some(Genie {
            set: &set,
            truth: u,
            flags: Vec::new(),
        }),
    );
    sc.run::<MinSum>(labels, Node::ROOT);
    Ok(sc.values)
}

/// Root-level partial sums of a min-sum run; equals `polar_encode` of the
/// decisions.
#[cfg(test)]
fn msa_root_partial_sums(labels: &[i64]) -> Vec<u8> {
    let frozen = vec![false; labels.len()];
    let mut sc = Sc::<i64>::new(&frozen, None);
    sc.run::<MinSum>(labels, Node::ROOT)
}
