//! Near-duplicate removal: MinHash signatures, LSH banding for candidates, and
//! confirmation against the signature similarity.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::minhash::{estimate_jaccard, shingle, HashFamily, MinHashSignature, DEFAULT_K, DEFAULT_SHINGLE};

#[derive(Debug, Clone, PartialEq)]
pub struct DedupConfig {
    /// Pairs whose estimated Jaccard is at least this are duplicates.
    pub threshold: f64,
    pub shingle: usize,
    pub k: usize,
    pub bands: usize,
    pub rows: usize,
    pub seed: u64,
}

impl Default for DedupConfig {
    fn default() -> Self {
        DedupConfig {
            threshold: 0.8,
            shingle: DEFAULT_SHINGLE,
            k: DEFAULT_K,
            bands: 32,
            rows: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("threshold {0} is outside (0, 1]")]
    Threshold(f64),
    #[error("bands × rows = {bands} × {rows} exceeds k = {k}")]
    Banding { bands: usize, rows: usize, k: usize },
    #[error("k, bands, rows and shingle size must be positive")]
    Zero,
}

impl DedupConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(ConfigError::Threshold(self.threshold));
        }
        if self.k == 0 || self.bands == 0 || self.rows == 0 || self.shingle == 0 {
            return Err(ConfigError::Zero);
        }
        if self.bands * self.rows > self.k {
            return Err(ConfigError::Banding {
                bands: self.bands,
                rows: self.rows,
                k: self.k,
            });
        }
        Ok(())
    }
}

/// A group of near-duplicates. `kept` is the member that came first in the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuplicateCluster {
    pub kept: usize,
    pub dropped: Vec<usize>,
    /// Smallest confirmed pairwise similarity that joined the cluster.
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DedupOutcome {
    /// Input indices that survive, in input order.
    pub kept: Vec<usize>,
    /// Clusters of two or more, ordered by their kept index.
    pub clusters: Vec<DuplicateCluster>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// The smaller index becomes the root, so every root is its cluster's first member.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

pub fn sign_all(texts: &[&str], cfg: &DedupConfig) -> Vec<MinHashSignature> {
    let family = HashFamily::new(cfg.k, cfg.seed);
    texts
        .par_iter()
        .map(|t| family.sign(&shingle(t, cfg.shingle)))
        .collect()
}

/// Deduplicates `texts` as one scope. Indices in the outcome refer to `texts`.
pub fn dedup(texts: &[&str], cfg: &DedupConfig) -> Result<DedupOutcome, ConfigError> {
    cfg.validate()?;
    let sigs = sign_all(texts, cfg);
    Ok(dedup_signatures(&sigs, cfg))
}

pub fn dedup_signatures(sigs: &[MinHashSignature], cfg: &DedupConfig) -> DedupOutcome {
    let n = sigs.len();
    // Bucket per band; members are pushed in input order.
    let mut buckets: HashMap<(usize, u64), Vec<usize>> = HashMap::new();
    for (i, sig) in sigs.iter().enumerate() {
        for band in 0..cfg.bands {
            let rows = &sig.mins[band * cfg.rows..(band + 1) * cfg.rows];
            let bytes: Vec<u8> = rows.iter().flat_map(|v| v.to_le_bytes()).collect();
            buckets
                .entry((band, xxh3_64_with_seed(&bytes, band as u64)))
                .or_default()
                .push(i);
        }
    }
    let mut candidates: HashSet<(usize, usize)> = HashSet::new();
    for members in buckets.values() {
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                candidates.insert((a, b));
            }
        }
    }
    let mut candidates: Vec<(usize, usize)> = candidates.into_iter().collect();
    candidates.sort_unstable();

    let confirmed: Vec<(usize, usize, f64)> = candidates
        .par_iter()
        .filter_map(|&(a, b)| {
            let s = estimate_jaccard(&sigs[a], &sigs[b]).expect("signed with one family");
            (s >= cfg.threshold).then_some((a, b, s))
        })
        .collect();

    let mut uf = UnionFind((0..n).collect());
    for &(a, b, _) in &confirmed {
        uf.union(a, b);
    }
    let mut min_sim: HashMap<usize, f64> = HashMap::new();
    for &(a, _, s) in &confirmed {
        let r = uf.find(a);
        let e = min_sim.entry(r).or_insert(s);
        *e = e.min(s);
    }
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut kept = Vec::new();
    for i in 0..n {
        let r = uf.find(i);
        if r == i {
            kept.push(i);
        } else {
            members.entry(r).or_default().push(i);
        }
    }
    let mut clusters: Vec<DuplicateCluster> = members
        .into_iter()
        .map(|(r, dropped)| DuplicateCluster {
            kept: r,
            dropped,
            similarity: min_sim[&r],
        })
        .collect();
    clusters.sort_by_key(|c| c.kept);
    DedupOutcome { kept, clusters }
}

/// Deduplicates within each scope (for example, each source), or across all
/// records when every scope is the same.
pub fn dedup_scoped(texts: &[&str], scopes: &[&str], cfg: &DedupConfig) -> Result<DedupOutcome, ConfigError> {
    assert_eq!(texts.len(), scopes.len());
    cfg.validate()?;
    let sigs = sign_all(texts, cfg);
    let mut order: Vec<&str> = Vec::new();
    let mut groups: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, s) in scopes.iter().enumerate() {
        groups
            .entry(s)
            .or_insert_with(|| {
                order.push(s);
                Vec::new()
            })
            .push(i);
    }
    let mut kept = Vec::new();
    let mut clusters = Vec::new();
    for scope in order {
        let idx = &groups[scope];
        let local: Vec<MinHashSignature> = idx.iter().map(|&i| sigs[i].clone()).collect();
        let out = dedup_signatures(&local, cfg);
        kept.extend(out.kept.iter().map(|&i| idx[i]));
        clusters.extend(out.clusters.into_iter().map(|c| DuplicateCluster {
            kept: idx[c.kept],
            dropped: c.dropped.iter().map(|&i| idx[i]).collect(),
            similarity: c.similarity,
        }));
    }
    kept.sort_unstable();
    clusters.sort_by_key(|c| c.kept);
    Ok(DedupOutcome { kept, clusters })
}
