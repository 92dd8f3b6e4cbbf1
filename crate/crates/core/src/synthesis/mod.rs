//! Synthesis of every label distribution of a length-`2^n` polar code.
//!
//! Leaf `i` is reached from the base distribution by reading the bits of `i`
//! from the most significant end: a 0 applies the minus transform and a 1
//! applies the plus transform. The traversal is depth first, so at most
//! `n + 1` posynomials are alive at any time.

mod oracle;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::channels::{validate_labeler, LabeledChannel};
use crate::format::float17;
use crate::posynomial::{label_distribution, LabelPosynomial, PosynomialError};

pub use oracle::{brute_force_joint, ORACLE_BUDGET};

/// Largest `n` accepted unless a caller raises the cap explicitly.
pub const DEFAULT_MAX_N: usize = 15;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SynthesisError {
    #[error("labeler is not good: {0}")]
    LabelerNotGood(String),
    #[error("n = {n} exceeds the configured cap {cap}")]
    DepthOverCap { n: usize, cap: usize },
    #[error("index {i} out of range for n = {n}")]
    IndexOutOfRange { i: usize, n: usize },
    #[error("k = {k} out of range for N = {len}")]
    InfoSizeOutOfRange { k: usize, len: usize },
    #[error("brute-force instance needs {work:.3e} evaluations, budget is {budget:.0e}")]
    OracleTooLarge { work: f64, budget: f64 },
    #[error(transparent)]
    Posynomial(#[from] PosynomialError),
}

/// Per-index statistics of a synthesized label distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexStats {
    pub i: usize,
    pub wt: u32,
    pub pe: f64,
    pub z_star: f64,
    pub mi: f64,
    pub support_size: usize,
}

impl IndexStats {
    fn of(i: usize, p: &LabelPosynomial) -> Self {
        Self {
            i,
            wt: i.count_ones(),
            pe: p.error_probability(),
            z_star: p.z_star().value,
            mi: p.mutual_information(),
            support_size: p.support_size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyntheticReport {
    pub n: usize,
    pub entries: Vec<IndexStats>,
}

impl SyntheticReport {
    pub const CSV_HEADER: &'static str = "i,wt,pe,z_star,mi,support_size";

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pe(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.pe).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.i,
                e.wt,
                float17(e.pe),
                float17(e.z_star),
                float17(e.mi),
                e.support_size
            );
        }
        out
    }

    /// Average mutual information per synthetic channel.
    pub fn mean_mi(&self) -> f64 {
        self.entries.iter().map(|e| e.mi).sum::<f64>() / self.entries.len() as f64
    }
}

pub(crate) fn require_good(ch: &LabeledChannel) -> Result<(), SynthesisError> {
    let report = validate_labeler(ch);
    if report.is_good {
        Ok(())
    } else {
        Err(SynthesisError::LabelerNotGood(report.summary()))
    }
}

fn check_depth(n: usize, cap: usize) -> Result<(), SynthesisError> {
    if n > cap {
        Err(SynthesisError::DepthOverCap { n, cap })
    } else {
        Ok(())
    }
}

/// Applies `visit(i, posynomial)` to every leaf in index order.
pub fn for_each_leaf<F>(
    ch: &LabeledChannel,
    n: usize,
    cap: usize,
    mut visit: F,
) -> Result<(), SynthesisError>
where
    F: FnMut(usize, &LabelPosynomial),
{
    require_good(ch)?;
    check_depth(n, cap)?;
    descend(&label_distribution(ch), n, 0, &mut visit)
}

fn descend<F>(
    p: &LabelPosynomial,
    levels: usize,
    prefix: usize,
    visit: &mut F,
) -> Result<(), SynthesisError>
where
    F: FnMut(usize, &LabelPosynomial),
{
    if levels == 0 {
        visit(prefix, p);
        return Ok(());
    }
    let minus = p.minus_transform()?;
    descend(&minus, levels - 1, prefix << 1, visit)?;
    drop(minus);
    let plus = p.plus_transform()?;
    descend(&plus, levels - 1, (prefix << 1) | 1, visit)
}

pub fn synthesize_all(ch: &LabeledChannel, n: usize) -> Result<SyntheticReport, SynthesisError> {
    synthesize_all_capped(ch, n, DEFAULT_MAX_N)
}

pub fn synthesize_all_capped(
    ch: &LabeledChannel,
    n: usize,
    cap: usize,
) -> Result<SyntheticReport, SynthesisError> {
    let mut entries = Vec::with_capacity(1 << n.min(cap));
    for_each_leaf(ch, n, cap, |i, p| entries.push(IndexStats::of(i, p)))?;
    Ok(SyntheticReport { n, entries })
}

/// The label distribution of index `i` alone, computed along its single
/// root-to-leaf path.
pub fn leaf_posynomial(
    ch: &LabeledChannel,
    n: usize,
    i: usize,
) -> Result<LabelPosynomial, SynthesisError> {
    require_good(ch)?;
    check_depth(n, DEFAULT_MAX_N)?;
    if i >> n != 0 {
        return Err(SynthesisError::IndexOutOfRange { i, n });
    }
    let mut p = label_distribution(ch);
    for level in (0..n).rev() {
        p = if (i >> level) & 1 == 1 {
            p.plus_transform()?
        } else {
            p.minus_transform()?
        };
    }
    Ok(p)
}

pub fn pe_exact(ch: &LabeledChannel, n: usize, i: usize) -> Result<f64, SynthesisError> {
    Ok(leaf_posynomial(ch, n, i)?.error_probability())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ranking {
    #[default]
    ErrorProbability,
    ZStar,
}

impl std::str::FromStr for Ranking {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pe" => Ok(Self::ErrorProbability),
            "z_star" | "zstar" => Ok(Self::ZStar),
            other => Err(format!("unknown ranking `{other}` (expected pe or z_star)")),
        }
    }
}

/// A polar code with all frozen bits set to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarCode {
    pub n: usize,
    pub info_set: Vec<usize>,
    pub union_bound: f64,
}

impl PolarCode {
    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    /// `true` at frozen positions.
    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut mask = vec![true; self.block_len()];
        for &i in &self.info_set {
            mask[i] = false;
        }
        mask
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

pub fn construct_code(
    ch: &LabeledChannel,
    n: usize,
    k: usize,
) -> Result<PolarCode, SynthesisError> {
    construct_code_ranked(ch, n, k, Ranking::default())
}

pub fn construct_code_ranked(
    ch: &LabeledChannel,
    n: usize,
    k: usize,
    ranking: Ranking,
) -> Result<PolarCode, SynthesisError> {
    check_depth(n, DEFAULT_MAX_N)?;
    if k > 1 << n {
        return Err(SynthesisError::InfoSizeOutOfRange { k, len: 1 << n });
    }
    code_from_report(&synthesize_all(ch, n)?, k, ranking)
}

/// Picks the `k` most reliable indices of an existing report. Equal scores
/// go to the larger index.
pub fn code_from_report(
    report: &SyntheticReport,
    k: usize,
    ranking: Ranking,
) -> Result<PolarCode, SynthesisError> {
    if k > report.len() {
        return Err(SynthesisError::InfoSizeOutOfRange {
            k,
            len: report.len(),
        });
    }
    let score = |e: &IndexStats| match ranking {
        Ranking::ErrorProbability => e.pe,
        Ranking::ZStar => e.z_star,
    };
    let mut order: Vec<&IndexStats> = report.entries.iter().collect();
    order.sort_by(|a, b| score(a).total_cmp(&score(b)).then(b.i.cmp(&a.i)));
    let mut info_set: Vec<usize> = order[..k].iter().map(|e| e.i).collect();
    info_set.sort_unstable();
    let union_bound = info_set.iter().map(|&i| report.entries[i].pe).sum();
    Ok(PolarCode {
        n: report.n,
        info_set,
        union_bound,
    })
}
