//! Ratio-driven mixture sampling across corpus sources.
//!
//! Per-source counts are one multinomial draw (as a chain of binomials), records
//! are drawn with replacement within each source, and the combined sequence is
//! shuffled. Everything flows from a single seeded ChaCha stream.

use std::collections::HashSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

pub const RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub name: String,
    pub path: PathBuf,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MixtureSpec {
    sources: Vec<SourceSpec>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MixtureError {
    #[error("a mixture needs at least one source")]
    NoSources,
    #[error("source {name}: ratio {ratio} is not positive")]
    BadRatio { name: String, ratio: f64 },
    #[error("ratios sum to {0}, not 1")]
    Sum(f64),
    #[error("source name {0} appears twice")]
    DuplicateName(String),
    #[error("source {0} has no records")]
    EmptySource(String),
    #[error("source {name}: {message}")]
    Read { name: String, message: String },
    #[error("mixture spec: {0}")]
    Parse(String),
}

impl MixtureSpec {
    pub fn new(sources: Vec<SourceSpec>) -> Result<Self, MixtureError> {
        if sources.is_empty() {
            return Err(MixtureError::NoSources);
        }
        let mut names = HashSet::new();
        for s in &sources {
            if !(s.ratio > 0.0 && s.ratio.is_finite()) {
                return Err(MixtureError::BadRatio {
                    name: s.name.clone(),
                    ratio: s.ratio,
                });
            }
            if !names.insert(s.name.as_str()) {
                return Err(MixtureError::DuplicateName(s.name.clone()));
            }
        }
        let sum: f64 = sources.iter().map(|s| s.ratio).sum();
        if (sum - 1.0).abs() > RATIO_TOLERANCE {
            return Err(MixtureError::Sum(sum));
        }
        Ok(MixtureSpec { sources })
    }

    /// Parses a JSON array of `{"name", "path", "ratio"}` objects.
    pub fn from_json(text: &str) -> Result<Self, MixtureError> {
        let sources: Vec<SourceSpec> = serde_json::from_str(text).map_err(|e| MixtureError::Parse(e.to_string()))?;
        Self::new(sources)
    }

    pub fn sources(&self) -> &[SourceSpec] {
        &self.sources
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.sources.iter().map(|s| s.ratio).collect()
    }
}

/// Splits `total` draws over categories with the given probabilities: a
/// multinomial sample built from successive conditional binomials.
pub fn draw_counts<R: Rng>(ratios: &[f64], total: u64, rng: &mut R) -> Vec<u64> {
    let mut left = total;
    let mut mass: f64 = ratios.iter().sum();
    let mut out = Vec::with_capacity(ratios.len());
    for (i, &r) in ratios.iter().enumerate() {
        let n = if i + 1 == ratios.len() {
            left
        } else if left == 0 || mass <= 0.0 {
            0
        } else {
            let p = (r / mass).clamp(0.0, 1.0);
            Binomial::new(left, p).expect("p is in [0, 1]").sample(rng)
        };
        out.push(n);
        left -= n;
        mass -= r;
    }
    out
}

/// Draws `total` records across `pools` (one per spec source, same order).
/// Returns `(source index, record)` pairs in shuffled order.
pub fn sample_mixture<'a, T>(
    spec: &MixtureSpec,
    pools: &'a [Vec<T>],
    total: u64,
    seed: u64,
) -> Result<Vec<(usize, &'a T)>, MixtureError> {
    assert_eq!(pools.len(), spec.sources.len(), "one pool per source");
    if let Some(i) = pools.iter().position(Vec::is_empty) {
        return Err(MixtureError::EmptySource(spec.sources[i].name.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = draw_counts(&spec.ratios(), total, &mut rng);
    let mut out = Vec::with_capacity(total as usize);
    for (src, (&n, pool)) in counts.iter().zip(pools).enumerate() {
        for _ in 0..n {
            out.push((src, &pool[rng.random_range(0..pool.len())]));
        }
    }
    out.shuffle(&mut rng);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(ratios: &[f64]) -> Result<MixtureSpec, MixtureError> {
        MixtureSpec::new(
            ratios
                .iter()
                .enumerate()
                .map(|(i, &ratio)| SourceSpec {
                    name: format!("s{i}"),
                    path: format!("s{i}.jsonl").into(),
                    ratio,
                })
                .collect(),
        )
    }

    #[test]
    fn validation() {
        assert!(spec(&[1.0]).is_ok());
        assert!(spec(&[0.5, 0.5]).is_ok());
        assert!(matches!(spec(&[]), Err(MixtureError::NoSources)));
        assert!(matches!(spec(&[0.5, 0.6]), Err(MixtureError::Sum(_))));
        assert!(matches!(spec(&[1.0, 0.0]), Err(MixtureError::BadRatio { .. })));
        assert!(matches!(spec(&[-0.5, 1.5]), Err(MixtureError::BadRatio { .. })));
        let r: Vec<f64> = [10.0, 20.0, 5.0, 10.0, 3.0, 1.0, 1.0].iter().map(|x| x / 50.0).collect();
        assert!(spec(&r).is_ok());
    }

    #[test]
    fn json_form() {
        let s = MixtureSpec::from_json(r#"[{"name":"a","path":"a.jsonl","ratio":0.25},{"name":"b","path":"b.jsonl","ratio":0.75}]"#).unwrap();
        assert_eq!(s.ratios(), vec![0.25, 0.75]);
        assert!(MixtureSpec::from_json("{}").is_err());
    }

    #[test]
    fn single_source_takes_everything() {
        let s = spec(&[1.0]).unwrap();
        let pools = vec![vec!["x", "y"]];
        let out = sample_mixture(&s, &pools, 100, 1).unwrap();
        assert_eq!(out.len(), 100);
        assert!(out.iter().all(|(i, _)| *i == 0));
    }

    #[test]
    fn deterministic_per_seed() {
        let s = spec(&[0.3, 0.7]).unwrap();
        let pools = vec![vec![1, 2, 3], vec![4, 5]];
        let a = sample_mixture(&s, &pools, 500, 9).unwrap();
        assert_eq!(a, sample_mixture(&s, &pools, 500, 9).unwrap());
        assert_ne!(a, sample_mixture(&s, &pools, 500, 10).unwrap());
    }

    #[test]
    fn even_split_within_three_sigma() {
        let s = spec(&[0.5, 0.5]).unwrap();
        let pools = vec![vec![0], vec![1]];
        let out = sample_mixture(&s, &pools, 10_000, 42).unwrap();
        let first = out.iter().filter(|(i, _)| *i == 0).count() as f64;
        assert!((first - 5000.0).abs() <= 150.0, "{first}");
    }

    #[test]
    fn empty_pool_is_named() {
        let s = spec(&[0.5, 0.5]).unwrap();
        let pools: Vec<Vec<u8>> = vec![vec![1], vec![]];
        assert_eq!(sample_mixture(&s, &pools, 10, 0), Err(MixtureError::EmptySource("s1".into())));
    }
}
