//! Slow, obviously-correct reference implementations and random input
//! generators, shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use literate_core::treedist::{DocTree, Label};
use literate_core::{BoundingBox, PageDocument, TextLine};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// Full `(n+1) × (m+1)` Wagner-Fischer table.
pub fn levenshtein_full(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

pub fn random_string<R: Rng>(rng: &mut R, max_len: usize) -> String {
    const ALPHABET: &[char] = &['a', 'b', 'c', 'd', ' ', 'é', 'ß', '中', '😀'];
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())]).collect()
}

/// A tree flattened in preorder, with ancestor relation precomputed.
struct Flat {
    labels: Vec<Label>,
    /// `anc[i][j]`: node `i` is a proper ancestor of node `j`.
    anc: Vec<Vec<bool>>,
}

impl Flat {
    fn new(t: &DocTree) -> Self {
        let mut labels = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut stack = vec![(t, None)];
        while let Some((node, p)) = stack.pop() {
            let idx = labels.len();
            labels.push(node.label.clone());
            parent.push(p);
            for c in node.children.iter().rev() {
                stack.push((c, Some(idx)));
            }
        }
        let n = labels.len();
        let mut anc = vec![vec![false; n]; n];
        for j in 0..n {
            let mut p = parent[j];
            while let Some(i) = p {
                anc[i][j] = true;
                p = parent[i];
            }
        }
        Flat { labels, anc }
    }
}

/// Minimum-cost edit mapping by exhaustive search over every valid ordered
/// mapping (one-to-one, preserving ancestry and left-to-right order). Unit costs.
pub fn tree_distance_brute(t1: &DocTree, t2: &DocTree) -> usize {
    let a = Flat::new(t1);
    let b = Flat::new(t2);
    let mut best = a.labels.len() + b.labels.len();
    let mut used = vec![false; b.labels.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    search(&a, &b, 0, &mut used, &mut pairs, 0, &mut best);
    best
}

fn search(
    a: &Flat,
    b: &Flat,
    i: usize,
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    relabels: usize,
    best: &mut usize,
) {
    let (n1, n2) = (a.labels.len(), b.labels.len());
    if i == n1 {
        let cost = relabels + (n1 - pairs.len()) + (n2 - pairs.len());
        *best = (*best).min(cost);
        return;
    }
    search(a, b, i + 1, used, pairs, relabels, best);
    for j in 0..n2 {
        if used[j] {
            continue;
        }
        // Earlier preorder node i' is either an ancestor of i or to its left.
        let ok = pairs.iter().all(|&(pi, pj)| {
            let anc_a = a.anc[pi][i];
            let anc_b = b.anc[pj][j];
            let left_b = !b.anc[pj][j] && !b.anc[j][pj] && pj < j;
            if anc_a {
                anc_b
            } else {
                left_b
            }
        });
        if !ok {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        let r = relabels + usize::from(a.labels[i] != b.labels[j]);
        search(a, b, i + 1, used, pairs, r, best);
        pairs.pop();
        used[j] = false;
    }
}

/// Random ordered tree of `1..=max_nodes` nodes over a small label alphabet, so
/// that equal labels are common.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> DocTree {
    const LABELS: &[&str] = &["p", "em", "li", "text:a", "text:b"];
    let n = rng.random_range(1..=max_nodes);
    let labels: Vec<Label> = (0..n)
        .map(|_| LABELS[rng.random_range(0..LABELS.len())].parse().unwrap())
        .collect();
    let parents: Vec<usize> = (1..n).map(|k| rng.random_range(0..k)).collect();
    build(0, &labels, &parents)
}

fn build(node: usize, labels: &[Label], parents: &[usize]) -> DocTree {
    let children = (1..labels.len())
        .filter(|&k| parents[k - 1] == node)
        .map(|k| build(k, labels, parents))
        .collect();
    DocTree::new(labels[node].clone(), children)
}

/// IoU as an exact fraction, with the same identical-box rule as the library.
pub fn iou_exact(a: BoundingBox, b: BoundingBox) -> BigRational {
    if a == b {
        return BigRational::from_integer(1.into());
    }
    let iw = i64::from(a.x_br().min(b.x_br())) - i64::from(a.x_tl().max(b.x_tl()));
    let ih = i64::from(a.y_br().min(b.y_br())) - i64::from(a.y_tl().max(b.y_tl()));
    let inter = iw.max(0) * ih.max(0);
    let union = a.area() as i64 + b.area() as i64 - inter;
    if union == 0 {
        return BigRational::from_integer(0.into());
    }
    BigRational::new(BigInt::from(inter), BigInt::from(union))
}

/// Largest total IoU over every partial one-to-one assignment.
pub fn best_total_brute(pred: &[BoundingBox], gt: &[BoundingBox]) -> BigRational {
    fn go(i: usize, pred: &[BoundingBox], gt: &[BoundingBox], used: &mut [bool]) -> BigRational {
        if i == pred.len() {
            return BigRational::from_integer(0.into());
        }
        let mut best = go(i + 1, pred, gt, used);
        for j in 0..gt.len() {
            if !used[j] {
                used[j] = true;
                let v = iou_exact(pred[i], gt[j]) + go(i + 1, pred, gt, used);
                used[j] = false;
                if v > best {
                    best = v;
                }
            }
        }
        best
    }
    go(0, pred, gt, &mut vec![false; gt.len()])
}

/// Random box on a small grid, so overlaps and ties are frequent.
pub fn random_box<R: Rng>(rng: &mut R, grid: u32) -> BoundingBox {
    let (x0, x1) = (rng.random_range(0..=grid), rng.random_range(0..=grid));
    let (y0, y1) = (rng.random_range(0..=grid), rng.random_range(0..=grid));
    BoundingBox::new(x0.min(x1), y0.min(y1), x0.max(x1), y0.max(y1)).unwrap()
}

pub fn boxed_page(w: u32, h: u32, boxes: &[BoundingBox]) -> PageDocument {
    let lines = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| TextLine::new(&format!("line {i}"), Some(*b)).unwrap())
        .collect();
    PageDocument::new(w, h, lines).unwrap()
}

/// Random page whose sides are drawn from `dims`, with up to `max_lines` boxed lines.
pub fn random_page<R: Rng>(
    rng: &mut R,
    dims: std::ops::RangeInclusive<u32>,
    max_lines: usize,
) -> PageDocument {
    let w = rng.random_range(dims.clone());
    let h = rng.random_range(dims);
    let n = rng.random_range(0..=max_lines);
    let lines = (0..n)
        .map(|_| {
            let (x0, x1) = (rng.random_range(0..=w), rng.random_range(0..=w));
            let (y0, y1) = (rng.random_range(0..=h), rng.random_range(0..=h));
            let b = BoundingBox::new(x0.min(x1), y0.min(y1), x0.max(x1), y0.max(y1)).unwrap();
            TextLine::new(&random_string(rng, 12), Some(b)).unwrap()
        })
        .collect();
    PageDocument::new(w, h, lines).unwrap()
}
