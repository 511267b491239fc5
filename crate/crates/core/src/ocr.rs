//! Page-level OCR metrics: word F1, line-box IoU under an optimal one-to-one
//! matching, and normalized edit distance over the page text.

use std::collections::HashMap;

use serde::Serialize;

use crate::textdist::ned_pair;
use crate::types::{BoundingBox, PageDocument};

/// Intersection area over union area. Identical boxes score 1 even when they
/// have zero area; any other pair with zero union scores 0.
pub fn box_iou(a: BoundingBox, b: BoundingBox) -> f64 {
    if a == b {
        return 1.0;
    }
    let iw = a.x_br().min(b.x_br()).saturating_sub(a.x_tl().max(b.x_tl()));
    let ih = a.y_br().min(b.y_br()).saturating_sub(a.y_tl().max(b.y_tl()));
    let inter = u64::from(iw) * u64::from(ih);
    let union = a.area() + b.area() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// One-to-one pairing of predicted and ground-truth lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    /// `(pred line, gt line, iou)`, sorted by pred line; every iou is positive.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_pred: Vec<usize>,
    pub unmatched_gt: Vec<usize>,
}

impl Matching {
    pub fn total_iou(&self) -> f64 {
        self.pairs.iter().map(|p| p.2).sum()
    }
}

/// Minimum-cost assignment of every row to a distinct column (`rows <= cols`),
/// by the shortest augmenting path method with potentials. Returns the column
/// assigned to each row.
fn assign_rows(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    debug_assert!(n <= m);
    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[col0] = true;
            let r = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for c in 1..=m {
                if used[c] {
                    continue;
                }
                let cur = cost[r - 1][c - 1] - u[r] - v[c];
                if cur < minv[c] {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if minv[c] < delta {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for c in 0..=m {
                if used[c] {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0usize; n];
    for c in 1..=m {
        if owner[c] != 0 {
            out[owner[c] - 1] = c - 1;
        }
    }
    out
}

/// Pairs boxed prediction lines with boxed ground-truth lines so the total IoU
/// is maximal. Lines without a box, and pairs with zero overlap, stay unmatched.
pub fn match_lines(pred: &PageDocument, gt: &PageDocument) -> Matching {
    let boxed = |d: &PageDocument| -> Vec<(usize, BoundingBox)> {
        d.lines()
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.bbox().map(|b| (i, b)))
            .collect()
    };
    let p = boxed(pred);
    let g = boxed(gt);
    let iou: Vec<Vec<f64>> = p
        .iter()
        .map(|(_, pb)| g.iter().map(|(_, gb)| box_iou(*pb, *gb)).collect())
        .collect();

    let mut pairs = Vec::new();
    if p.len() <= g.len() {
        let cost: Vec<Vec<f64>> = iou.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        for (pi, gi) in assign_rows(&cost).into_iter().enumerate() {
            pairs.push((pi, gi));
        }
    } else {
        let cost: Vec<Vec<f64>> = (0..g.len())
            .map(|gi| (0..p.len()).map(|pi| -iou[pi][gi]).collect())
            .collect();
        for (gi, pi) in assign_rows(&cost).into_iter().enumerate() {
            pairs.push((pi, gi));
        }
    }
    pairs.sort_unstable();

    let mut matched_pred = vec![false; pred.lines().len()];
    let mut matched_gt = vec![false; gt.lines().len()];
    let pairs: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .filter(|&(pi, gi)| iou[pi][gi] > 0.0)
        .map(|(pi, gi)| {
            let (pl, gl) = (p[pi].0, g[gi].0);
            matched_pred[pl] = true;
            matched_gt[gl] = true;
            (pl, gl, iou[pi][gi])
        })
        .collect();
    let unmatched = |m: &[bool]| m.iter().enumerate().filter(|(_, &x)| !x).map(|(i, _)| i).collect();
    Matching {
        pairs,
        unmatched_pred: unmatched(&matched_pred),
        unmatched_gt: unmatched(&matched_gt),
    }
}

/// Matched IoU mass divided by `max(n_pred, n_gt)`; 1 when both are empty.
pub fn page_iou(matching: &Matching, n_pred: usize, n_gt: usize) -> f64 {
    let denom = n_pred.max(n_gt);
    if denom == 0 {
        1.0
    } else {
        matching.total_iou() / denom as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WordScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Word-level precision, recall and F1 with multiset matching on whitespace tokens.
pub fn word_f1(pred_text: &str, gt_text: &str) -> WordScores {
    let mut gt_counts: HashMap<&str, usize> = HashMap::new();
    let mut n_gt = 0usize;
    for w in gt_text.split_whitespace() {
        *gt_counts.entry(w).or_default() += 1;
        n_gt += 1;
    }
    let mut n_pred = 0usize;
    let mut tp = 0usize;
    for w in pred_text.split_whitespace() {
        n_pred += 1;
        if let Some(c) = gt_counts.get_mut(w) {
            if *c > 0 {
                *c -= 1;
                tp += 1;
            }
        }
    }
    if n_pred == 0 && n_gt == 0 {
        return WordScores {
            precision: 1.0,
            recall: 1.0,
            f1: 1.0,
        };
    }
    let precision = if n_pred == 0 { 0.0 } else { tp as f64 / n_pred as f64 };
    let recall = if n_gt == 0 { 0.0 } else { tp as f64 / n_gt as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    WordScores {
        precision,
        recall,
        f1,
    }
}

/// NED similarity of the two pages' newline-joined texts.
pub fn page_ned(pred: &PageDocument, gt: &PageDocument) -> f64 {
    ned_pair(&pred.joined_text(), &gt.joined_text()).similarity
}

/// The per-page OCR score triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OcrScores {
    pub f1: f64,
    /// `None` when the prediction (or the ground truth) carries no boxes.
    pub iou: Option<f64>,
    pub ned: f64,
}

impl OcrScores {
    pub const ZERO: OcrScores = OcrScores {
        f1: 0.0,
        iou: Some(0.0),
        ned: 0.0,
    };
}

/// Scores one page. Prediction boxes are expected in the ground truth's pixel space.
pub fn score_page(pred: &PageDocument, gt: &PageDocument) -> OcrScores {
    let f1 = word_f1(&pred.joined_text(), &gt.joined_text()).f1;
    let ned = page_ned(pred, gt);
    let iou = (pred.has_boxes() && gt.has_boxes()).then(|| {
        let m = match_lines(pred, gt);
        let n_pred = pred.lines().iter().filter(|l| l.bbox().is_some()).count();
        let n_gt = gt.lines().iter().filter(|l| l.bbox().is_some()).count();
        page_iou(&m, n_pred, n_gt)
    });
    OcrScores { f1, iou, ned }
}
