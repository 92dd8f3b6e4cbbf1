//! Monte Carlo simulation of encoding, the labeled channel and decoding.
//!
//! Trial `k` draws from its own ChaCha8 stream (`seed`, stream `k`), so the
//! result depends only on the seed and the configuration, never on thread
//! scheduling.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{ChannelDescriptor, LabeledChannel};
use crate::thresholds::Node;

use super::{
    check_genie_set, encode_unchecked, exact_sc_decode, genie_run, msa_sc_decode, DecoderError,
};

/// Magnitude assigned to labels whose mirror image has zero probability.
pub const LLR_CLAMP: f64 = 1024.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecoderKind {
    Exact,
    #[serde(rename = "minsum")]
    MinSum,
    #[serde(rename = "blockgenie")]
    BlockGenie {
        g: Vec<Node>,
    },
}

impl DecoderKind {
    /// Genie over every leaf of the depth-`n` tree.
    pub fn full_genie(n: u32) -> Self {
        DecoderKind::BlockGenie {
            g: (0..1u64 << n).map(|j| Node(n, j)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: u32,
    /// Positions carrying random data; `None` means every position.
    pub info_set: Option<Vec<usize>>,
    pub decoder: DecoderKind,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n: u32,
    pub trials: u64,
    pub seed: u64,
    pub decoder: DecoderKind,
    pub channel: ChannelDescriptor,
    pub info_set: Vec<usize>,
    /// Trials in which some decision differed from the transmitted bit.
    pub word_errors: u64,
    /// Per index, trials whose decision at that stage was wrong when made.
    pub index_errors: Vec<u64>,
    /// Per genie block, trials with a wrong decision inside the block.
    pub block_errors: Vec<(Node, u64)>,
}

/// Comparison of simulated per-index error rates with predicted ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub within: usize,
    pub total: usize,
    pub sigmas: f64,
    /// Largest deviation in units of the predicted standard error.
    pub worst_z: f64,
    pub worst_index: Option<usize>,
}

impl SimResult {
    pub fn index_rate(&self, i: usize) -> f64 {
        self.index_errors[i] as f64 / self.trials as f64
    }

    pub fn word_error_rate(&self) -> f64 {
        self.word_errors as f64 / self.trials as f64
    }

    /// Counts information indices whose empirical error rate is within
    /// `sigmas` standard errors `sqrt(pe (1 - pe) / trials)` of `pe[i]`.
    pub fn agreement(&self, pe: &[f64], sigmas: f64) -> Agreement {
        let mut out = Agreement {
            within: 0,
            total: 0,
            sigmas,
            worst_z: 0.0,
            worst_index: None,
        };
        for &i in &self.info_set {
            let Some(&p) = pe.get(i) else { continue };
            let se = (p * (1.0 - p) / self.trials as f64).sqrt();
            let gap = (self.index_rate(i) - p).abs();
            let z = if se > 0.0 {
                gap / se
            } else if gap == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            out.total += 1;
            if z <= sigmas {
                out.within += 1;
            }
            if z > out.worst_z || out.worst_index.is_none() {
                out.worst_z = z;
                out.worst_index = Some(i);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

struct Sampler {
    labels: Vec<i64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(ch: &LabeledChannel) -> Self {
        let labels = ch.support();
        let mut acc = 0.0;
        let cdf = labels
            .iter()
            .map(|&t| {
                acc += ch.alpha(t);
                acc
            })
            .collect();
        Self { labels, cdf }
    }

    /// Label for input 0; the input-1 label is its negation.
    fn draw(&self, rng: &mut impl Rng) -> i64 {
        let r: f64 = rng.gen::<f64>() * self.cdf[self.cdf.len() - 1];
        let k = self
            .cdf
            .partition_point(|&c| c <= r)
            .min(self.labels.len() - 1);
        self.labels[k]
    }
}

#[derive(Clone)]
struct Tally {
    word: u64,
    index: Vec<u64>,
    block: Vec<u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.word += other.word;
        self.index
            .iter_mut()
            .zip(&other.index)
            .for_each(|(a, b)| *a += b);
        self.block
            .iter_mut()
            .zip(&other.block)
            .for_each(|(a, b)| *a += b);
        self
    }
}

pub fn simulate(ch: &LabeledChannel, config: &SimConfig) -> Result<SimResult, DecoderError> {
    if config.trials == 0 {
        return Err(DecoderError::BadConfig("trials must be at least 1".into()));
    }
    if config.n > 24 {
        return Err(DecoderError::BadConfig(format!(
            "n = {} is too large",
            config.n
        )));
    }
    let len = 1usize << config.n;
    let info_set: Vec<usize> = match &config.info_set {
        Some(set) => {
            let mut set = set.clone();
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&i| i >= len) {
                return Err(DecoderError::BadConfig(format!(
                    "info index {bad} exceeds N = {len}"
                )));
            }
            set
        }
        None => (0..len).collect(),
    };
    let mut frozen = vec![true; len];
    for &i in &info_set {
        frozen[i] = false;
    }

    let mut blocks: Vec<Node> = Vec::new();
    if let DecoderKind::BlockGenie { g } = &config.decoder {
        check_genie_set(g, config.n)?;
        blocks = g.clone();
        blocks.sort_by_key(|v| v.index() << (config.n - v.depth()));
    }
    let genie_set: HashSet<Node> = blocks.iter().copied().collect();

    let llr_of = |t: i64| -> f64 {
        let (p, q) = (ch.alpha(t), ch.alpha(-t));
        if q == 0.0 {
            LLR_CLAMP
        } else if p == 0.0 {
            -LLR_CLAMP
        } else {
            (p / q).log2().clamp(-LLR_CLAMP, LLR_CLAMP)
        }
    };

    let sampler = Sampler::new(ch);
    let empty = Tally {
        word: 0,
        index: vec![0; len],
        block: vec![0; blocks.len()],
    };

    let tally = (0..config.trials)
        .into_par_iter()
        .fold(
            || empty.clone(),
            |mut acc, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(trial);
                let mut u = vec![0u8; len];
                for &i in &info_set {
                    u[i] = rng.gen_range(0..2);
                }
                let x = encode_unchecked(&u, config.n);
                let labels: Vec<i64> = x
                    .iter()
                    .map(|&b| {
                        let t = sampler.draw(&mut rng);
                        if b == 0 {
                            t
                        } else {
                            -t
                        }
                    })
                    .collect();

                let decisions = match &config.decoder {
                    DecoderKind::MinSum => {
                        msa_sc_decode(&labels, &frozen).expect("validated lengths")
                    }
                    DecoderKind::Exact => {
                        let llrs: Vec<f64> = labels.iter().map(|&t| llr_of(t)).collect();
                        exact_sc_decode(&llrs, &frozen).expect("finite clamped llrs")
                    }
                    DecoderKind::BlockGenie { .. } => {
                        let out = genie_run(&labels, &u, &genie_set, &frozen);
                        for (slot, (_, wrong)) in acc.block.iter_mut().zip(&out.block_flags) {
                            *slot += u64::from(*wrong);
                        }
                        out.decisions
                    }
                };
                let mut any = false;
                for (i, (&d, &b)) in decisions.iter().zip(&u).enumerate() {
                    if d != b {
                        acc.index[i] += 1;
                        any = true;
                    }
                }
                acc.word += u64::from(any);
                acc
            },
        )
        .reduce(|| empty.clone(), Tally::merge);

    Ok(SimResult {
        n: config.n,
        trials: config.trials,
        seed: config.seed,
        decoder: config.decoder.clone(),
        channel: ch.descriptor().clone(),
        info_set,
        word_errors: tally.word,
        index_errors: tally.index,
        block_errors: blocks.into_iter().zip(tally.block).collect(),
    })
}
