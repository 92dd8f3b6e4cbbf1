//! Structural checks on `(G, E)` pairs.

use std::collections::HashSet;

use serde::Serialize;

use super::{Node, MAX_E_DEPTH};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeReport {
    pub valid: bool,
    /// `sum over E of 2^-d`.
    pub kraft_sum: f64,
    pub problems: Vec<String>,
}

/// Checks that `E` is the leaf set of a full binary tree and that every
/// root-to-leaf path of that tree meets exactly one vertex of `G`.
pub fn validate_tree(g: &[Node], e: &[Node]) -> TreeReport {
    let mut problems = Vec::new();
    let kraft_sum = e.iter().map(|n| 0.5f64.powi(n.depth() as i32)).sum();

    for n in g.iter().chain(e) {
        if !n.is_well_formed() {
            problems.push(format!(
                "vertex ({}, {}) is not in the tree of depth {MAX_E_DEPTH}",
                n.0, n.1
            ));
        }
    }
    if !problems.is_empty() {
        return TreeReport {
            valid: false,
            kraft_sum,
            problems,
        };
    }

    let leaves: HashSet<Node> = e.iter().copied().collect();
    let g_set: HashSet<Node> = g.iter().copied().collect();
    if leaves.len() != e.len() {
        problems.push("E lists a vertex more than once".into());
    }
    if g_set.len() != g.len() {
        problems.push("G lists a vertex more than once".into());
    }
    if e.is_empty() {
        problems.push("E is empty".into());
    }

    let mut interior: HashSet<Node> = HashSet::new();
    for &leaf in &leaves {
        let mut cur = leaf;
        while let Some(parent) = cur.parent() {
            if !interior.insert(parent) {
                break;
            }
            cur = parent;
        }
    }

    let mut visited_leaves = 0usize;
    let mut visited_g: HashSet<Node> = HashSet::new();
    if !leaves.is_empty() {
        let mut stack = vec![(Node::ROOT, 0u32)];
        while let Some((node, g_seen)) = stack.pop() {
            let g_seen = g_seen + u32::from(g_set.contains(&node));
            if g_set.contains(&node) {
                visited_g.insert(node);
            }
            if leaves.contains(&node) {
                visited_leaves += 1;
                if g_seen != 1 {
                    problems.push(format!(
                        "path to leaf ({}, {}) meets {g_seen} vertices of G",
                        node.0, node.1
                    ));
                }
            } else if interior.contains(&node) {
                for child in node.children().into_iter().rev() {
                    stack.push((child, g_seen));
                }
            } else {
                problems.push(format!(
                    "vertex ({}, {}) is neither a leaf nor an ancestor of one",
                    node.0, node.1
                ));
            }
        }
    }

    if visited_leaves < leaves.len() {
        problems.push(format!(
            "{} vertices of E lie below other vertices of E",
            leaves.len() - visited_leaves
        ));
    }
    let mut stray: Vec<&Node> = g_set.iter().filter(|n| !visited_g.contains(n)).collect();
    stray.sort();
    for n in stray {
        problems.push(format!("G vertex ({}, {}) lies outside the tree", n.0, n.1));
    }

    TreeReport {
        valid: problems.is_empty(),
        kraft_sum,
        problems,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(list: &[(u32, u64)]) -> Vec<Node> {
        list.iter().map(|&(d, j)| Node(d, j)).collect()
    }

    #[test]
    fn root_pair_is_valid() {
        let r = validate_tree(&[Node::ROOT], &[Node::ROOT]);
        assert!(r.valid, "{:?}", r.problems);
        assert_eq!(r.kraft_sum, 1.0);
    }

    #[test]
    fn missing_g_on_a_path() {
        let r = validate_tree(&nodes(&[(1, 0)]), &nodes(&[(1, 0), (1, 1)]));
        assert!(!r.valid);
        assert!(r.problems[0].contains("(1, 1)"));
    }

    #[test]
    fn mixed_depth_example() {
        let g = nodes(&[(1, 0), (2, 2), (2, 3)]);
        let e = nodes(&[(2, 0), (3, 2), (3, 3), (2, 2), (3, 6), (3, 7)]);
        let r = validate_tree(&g, &e);
        assert!(r.valid, "{:?}", r.problems);
        assert!((r.kraft_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leaf_above_g_is_invalid() {
        let g = nodes(&[(1, 0), (2, 2), (3, 6), (3, 7)]);
        let e = nodes(&[(2, 0), (3, 2), (3, 3), (2, 2), (2, 3)]);
        let r = validate_tree(&g, &e);
        assert!(!r.valid);
        assert!(r.problems.iter().any(|p| p.contains("outside")));
    }

    #[test]
    fn incomplete_and_overlapping_leaves() {
        let hole = validate_tree(&[Node::ROOT], &nodes(&[(1, 0), (2, 2)]));
        assert!(!hole.valid);
        assert!(hole.kraft_sum < 1.0);
        let nested = validate_tree(&[Node::ROOT], &nodes(&[(1, 0), (1, 1), (2, 0)]));
        assert!(!nested.valid);
        let doubled = validate_tree(&nodes(&[(0, 0), (1, 0)]), &nodes(&[(1, 0), (1, 1)]));
        assert!(!doubled.valid);
        assert!(!validate_tree(&[Node(1, 5)], &[Node::ROOT]).valid);
        assert!(!validate_tree(&[], &[]).valid);
    }
}
