//! Synthetic corpora with known overlap, shared with the acceptance suite.
#![allow(dead_code)]

use literate_curate::ShingleSet;
use rand::Rng;

/// Two shingle sets of union size `union` whose exact Jaccard is
/// `round(target * union) / union`.
pub fn sets_with_jaccard<R: Rng>(rng: &mut R, target: f64, union: usize) -> (ShingleSet, ShingleSet) {
    let common = (target * union as f64).round() as usize;
    let rest = union - common;
    let mut pool: Vec<u64> = Vec::with_capacity(union);
    while pool.len() < union {
        let h: u64 = rng.random();
        if !pool.contains(&h) {
            pool.push(h);
        }
    }
    let (shared, rest_pool) = pool.split_at(common);
    let (only_a, only_b) = rest_pool.split_at(rest / 2);
    let a = ShingleSet::from_hashes(shared.iter().chain(only_a).copied().collect());
    let b = ShingleSet::from_hashes(shared.iter().chain(only_b).copied().collect());
    (a, b)
}

/// `n` distinct words drawn from a large synthetic vocabulary.
pub fn random_words<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    (0..n).map(|_| format!("w{:x}", rng.random::<u64>())).collect()
}

/// A copy of `words` with `edits` words replaced at evenly spaced positions.
pub fn perturb<R: Rng>(rng: &mut R, words: &[String], edits: usize) -> Vec<String> {
    let mut out = words.to_vec();
    for e in 0..edits {
        let pos = (e * 2 + 1) * words.len() / (edits * 2);
        out[pos] = format!("x{:x}", rng.random::<u64>());
    }
    out
}

/// Ten-document corpus where documents 3 and 7 are near-duplicates and every
/// other pair shares nothing.
pub fn corpus_with_pair<R: Rng>(rng: &mut R) -> Vec<String> {
    let mut docs: Vec<String> = (0..10).map(|_| random_words(rng, 200).join(" ")).collect();
    let base: Vec<String> = docs[3].split(' ').map(str::to_owned).collect();
    docs[7] = perturb(rng, &base, 2).join(" ");
    docs
}
