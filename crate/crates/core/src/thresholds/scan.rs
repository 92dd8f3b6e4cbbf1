//! Pre-order scans that build `(G, E)` and accumulate both rates.

use std::collections::HashSet;

use crate::channels::{validate_labeler, LabeledChannel};
use crate::posynomial::{label_distribution, LabelPosynomial};

use super::{
    delta_prime_unchecked, leaf_rate, validate_tree, weight, zeta_step, ERecord, GRecord, Node,
    ScanParams, ThresholdError, ThresholdRates, ThresholdTree, MAX_G_DEPTH,
};

/// Subtrees above this depth are scanned in parallel.
const PARALLEL_DEPTH: u32 = 8;

struct Partial {
    keep: bool,
    g: Vec<GRecord>,
    e: Vec<ERecord>,
    g_count: u64,
    e_count: u64,
    r_l: f64,
    r_u: f64,
}

impl Partial {
    fn new(keep: bool) -> Self {
        Self {
            keep,
            g: Vec::new(),
            e: Vec::new(),
            g_count: 0,
            e_count: 0,
            r_l: 0.0,
            r_u: 0.0,
        }
    }

    fn join(mut self, other: Partial) -> Partial {
        self.g.extend(other.g);
        self.e.extend(other.e);
        self.g_count += other.g_count;
        self.e_count += other.e_count;
        self.r_l += other.r_l;
        self.r_u += other.r_u;
        self
    }

    fn add_g(&mut self, node: Node, mi: f64, z_star: f64) {
        if self.keep {
            self.g.push(GRecord { node, mi, z_star });
        }
        self.g_count += 1;
        self.r_u += mi * weight(node.depth());
    }

    fn add_e(&mut self, node: Node, zeta: f64) {
        if self.keep {
            self.e.push(ERecord { node, zeta });
        }
        self.e_count += 1;
        self.r_l += leaf_rate(zeta, node.depth());
    }

    fn into_tree(self, params: Option<ScanParams>) -> ThresholdTree {
        ThresholdTree {
            params,
            g: self.g,
            e: self.e,
            r_l: self.r_l,
            r_u: self.r_u,
        }
    }
}

fn require_good(ch: &LabeledChannel) -> Result<(), ThresholdError> {
    let report = validate_labeler(ch);
    if report.is_good {
        Ok(())
    } else {
        Err(ThresholdError::LabelerNotGood(report.summary()))
    }
}

/// Builds `(G, E)` dynamically with depth limits `d_G`, `d_E` and the
/// polarization threshold `eps`, returning both sets and rates.
pub fn compute_thresholds(
    ch: &LabeledChannel,
    params: ScanParams,
) -> Result<ThresholdTree, ThresholdError> {
    params.validate()?;
    require_good(ch)?;
    let partial = scan_above(&label_distribution(ch), Node::ROOT, &params, true)?;
    Ok(partial.into_tree(Some(params)))
}

/// Rates and set sizes from the same scan as [`compute_thresholds`], without
/// keeping the sets. `E` has tens of millions of leaves at the default depths.
pub fn compute_rates(
    ch: &LabeledChannel,
    params: ScanParams,
) -> Result<ThresholdRates, ThresholdError> {
    params.validate()?;
    require_good(ch)?;
    let partial = scan_above(&label_distribution(ch), Node::ROOT, &params, false)?;
    Ok(ThresholdRates {
        r_l: partial.r_l,
        r_u: partial.r_u,
        g_count: partial.g_count,
        e_count: partial.e_count,
    })
}

fn scan_above(
    p: &LabelPosynomial,
    node: Node,
    params: &ScanParams,
    keep: bool,
) -> Result<Partial, ThresholdError> {
    let mi = p.mutual_information();
    let z = p.z_star().value;
    let mut out = Partial::new(keep);
    if mi < params.eps || 1.0 - delta_prime_unchecked(z) > 1.0 - params.eps {
        out.add_g(node, mi, z);
        out.add_e(node, z);
        return Ok(out);
    }
    if node.depth() == params.d_g {
        out.add_g(node, mi, z);
        if node.depth() == params.d_e {
            out.add_e(node, z);
        } else {
            let [minus, plus] = node.children();
            scan_below(zeta_step(z, minus.branch()), minus, params, &mut out);
            scan_below(zeta_step(z, plus.branch()), plus, params, &mut out);
        }
        return Ok(out);
    }

    let [minus, plus] = node.children();
    let (left, right) = if node.depth() < PARALLEL_DEPTH {
        rayon::join(
            || scan_above(&p.minus_transform()?, minus, params, keep),
            || scan_above(&p.plus_transform()?, plus, params, keep),
        )
    } else {
        let left = scan_above(&p.minus_transform()?, minus, params, keep);
        (left, scan_above(&p.plus_transform()?, plus, params, keep))
    };
    Ok(left?.join(right?))
}

fn scan_below(zeta: f64, node: Node, params: &ScanParams, out: &mut Partial) {
    if 1.0 - delta_prime_unchecked(zeta) > 1.0 - params.eps
        || zeta > 1.0
        || node.depth() == params.d_e
    {
        out.add_e(node, zeta);
        return;
    }
    for child in node.children() {
        scan_below(zeta_step(zeta, child.branch()), child, params, out);
    }
}

/// Rates of an arbitrary valid pair `(G, E)`.
pub fn evaluate(
    ch: &LabeledChannel,
    g: &[Node],
    e: &[Node],
) -> Result<ThresholdTree, ThresholdError> {
    let report = validate_tree(g, e);
    if !report.valid {
        return Err(ThresholdError::InvalidTree(report.problems));
    }
    if let Some(deep) = g.iter().find(|n| n.depth() > MAX_G_DEPTH) {
        return Err(ThresholdError::BadParams(format!(
            "G vertex at depth {} exceeds {MAX_G_DEPTH}",
            deep.depth()
        )));
    }
    require_good(ch)?;
    let g: HashSet<Node> = g.iter().copied().collect();
    let e: HashSet<Node> = e.iter().copied().collect();
    let mut out = Partial::new(true);
    walk_above(&label_distribution(ch), Node::ROOT, &g, &e, &mut out)?;
    Ok(out.into_tree(None))
}

fn walk_above(
    p: &LabelPosynomial,
    node: Node,
    g: &HashSet<Node>,
    e: &HashSet<Node>,
    out: &mut Partial,
) -> Result<(), ThresholdError> {
    if g.contains(&node) {
        let z = p.z_star().value;
        out.add_g(node, p.mutual_information(), z);
        walk_below(z, node, e, out);
        return Ok(());
    }
    let [minus, plus] = node.children();
    walk_above(&p.minus_transform()?, minus, g, e, out)?;
    walk_above(&p.plus_transform()?, plus, g, e, out)
}

fn walk_below(zeta: f64, node: Node, e: &HashSet<Node>, out: &mut Partial) {
    if e.contains(&node) {
        out.add_e(node, zeta);
        return;
    }
    for child in node.children() {
        walk_below(zeta_step(zeta, child.branch()), child, e, out);
    }
}
