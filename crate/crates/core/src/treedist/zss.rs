//! Zhang-Shasha ordered tree edit distance.

use super::{DocTree, EditCosts, Label};

/// Trees above this many nodes are rejected; the distance table is `n1 × n2`.
pub const MAX_NODES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("tree has {nodes} nodes; the limit is {MAX_NODES}")]
pub struct TreeTooLarge {
    pub nodes: usize,
}

/// Postorder view of a tree: labels, leftmost-leaf descendants, and keyroots.
struct Postorder<'a> {
    labels: Vec<&'a Label>,
    /// `leftmost[i]` is the postorder index of the leftmost leaf under node `i`.
    leftmost: Vec<usize>,
    keyroots: Vec<usize>,
}

impl<'a> Postorder<'a> {
    fn new(tree: &'a DocTree) -> Self {
        let mut labels = Vec::new();
        let mut leftmost = Vec::new();
        // (node, next child to visit, leftmost leaf once known)
        let mut stack: Vec<(&DocTree, usize, Option<usize>)> = vec![(tree, 0, None)];
        while let Some(top) = stack.last_mut() {
            let (node, next, _) = *top;
            if let Some(child) = node.children.get(next) {
                top.1 += 1;
                stack.push((child, 0, None));
                continue;
            }
            let (_, _, lm) = stack.pop().expect("stack is non-empty");
            let idx = labels.len();
            let lm = lm.unwrap_or(idx);
            labels.push(&node.label);
            leftmost.push(lm);
            if let Some(parent) = stack.last_mut() {
                // The first child finished fixes the parent's leftmost leaf.
                if parent.2.is_none() {
                    parent.2 = Some(lm);
                }
            }
        }
        let n = labels.len();
        let mut seen = vec![false; n];
        let mut keyroots = Vec::new();
        for i in (0..n).rev() {
            if !seen[leftmost[i]] {
                seen[leftmost[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.reverse();
        Postorder {
            labels,
            leftmost,
            keyroots,
        }
    }
}

/// Minimum-cost edit script length between two ordered trees.
pub fn zss_distance(t1: &DocTree, t2: &DocTree, costs: &EditCosts) -> Result<usize, TreeTooLarge> {
    for t in [t1, t2] {
        let nodes = t.node_count();
        if nodes > MAX_NODES {
            return Err(TreeTooLarge { nodes });
        }
    }
    let a = Postorder::new(t1);
    let b = Postorder::new(t2);
    let (n, m) = (a.labels.len(), b.labels.len());
    let (ins, del) = (u64::from(costs.insert), u64::from(costs.delete));

    let mut tree_dist = vec![0u64; n * m];
    let mut forest = vec![0u64; (n + 1) * (m + 1)];
    let width = m + 1;

    for &i in &a.keyroots {
        for &j in &b.keyroots {
            let (li, lj) = (a.leftmost[i], b.leftmost[j]);
            let rows = i - li + 2;
            let cols = j - lj + 2;
            forest[0] = 0;
            for x in 1..rows {
                forest[x * width] = forest[(x - 1) * width] + del;
            }
            for y in 1..cols {
                forest[y] = forest[y - 1] + ins;
            }
            for x in 1..rows {
                let node_a = li + x - 1;
                for y in 1..cols {
                    let node_b = lj + y - 1;
                    let drop = forest[(x - 1) * width + y] + del;
                    let add = forest[x * width + y - 1] + ins;
                    let best = if a.leftmost[node_a] == li && b.leftmost[node_b] == lj {
                        let rel = if a.labels[node_a] == b.labels[node_b] {
                            0
                        } else {
                            u64::from(costs.relabel)
                        };
                        let v = drop.min(add).min(forest[(x - 1) * width + y - 1] + rel);
                        tree_dist[node_a * m + node_b] = v;
                        v
                    } else {
                        let px = a.leftmost[node_a] - li;
                        let py = b.leftmost[node_b] - lj;
                        drop.min(add)
                            .min(forest[px * width + py] + tree_dist[node_a * m + node_b])
                    };
                    forest[x * width + y] = best;
                }
            }
        }
    }
    Ok(tree_dist[(n - 1) * m + (m - 1)] as usize)
}
