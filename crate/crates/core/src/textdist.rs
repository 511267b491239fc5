//! Levenshtein distance over Unicode scalar values and the normalized edit
//! distance similarity built on it.

use serde::Serialize;

/// Edit distance between `a` and `b` (unit insert, delete, substitute).
///
/// Runs in `O(|a|·|b|)` time and keeps a single row of `min(|a|, |b|) + 1` cells.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

pub fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    // Strip the common prefix and suffix; they never contribute edits.
    let prefix = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[prefix..], &b[prefix..]);
    let suffix = a
        .iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count();
    let (a, b) = (&a[..a.len() - suffix], &b[..b.len() - suffix]);

    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, &lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(lc != sc);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[short.len()]
}

/// Distance and normalized similarity for one prediction/target pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairScore {
    pub distance: usize,
    /// `1 - distance / max(len)`, or 1 when both strings are empty.
    pub similarity: f64,
}

pub fn ned_pair(pred: &str, gt: &str) -> PairScore {
    let p: Vec<char> = pred.chars().collect();
    let g: Vec<char> = gt.chars().collect();
    let distance = levenshtein_chars(&p, &g);
    let longest = p.len().max(g.len());
    let similarity = if longest == 0 {
        1.0
    } else {
        1.0 - distance as f64 / longest as f64
    };
    PairScore {
        distance,
        similarity,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("cannot average over an empty corpus")]
pub struct EmptyCorpus;

/// Mean of per-pair [`ned_pair`] similarities.
pub fn corpus_ned<P, G>(pairs: impl IntoIterator<Item = (P, G)>) -> Result<f64, EmptyCorpus>
where
    P: AsRef<str>,
    G: AsRef<str>,
{
    mean(
        pairs
            .into_iter()
            .map(|(p, g)| ned_pair(p.as_ref(), g.as_ref()).similarity),
    )
}

/// Arithmetic mean, summed in iteration order.
pub fn mean(values: impl IntoIterator<Item = f64>) -> Result<f64, EmptyCorpus> {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        Err(EmptyCorpus)
    } else {
        Ok(sum / n as f64)
    }
}
