//! Word shingles and MinHash signatures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xxhash_rust::xxh3::xxh3_64;

pub const DEFAULT_SHINGLE: usize = 5;
pub const DEFAULT_K: usize = 128;

/// Sorted, deduplicated 64-bit hashes of a text's word n-grams.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ShingleSet(Vec<u64>);

impl ShingleSet {
    pub fn from_hashes(mut h: Vec<u64>) -> Self {
        h.sort_unstable();
        h.dedup();
        ShingleSet(h)
    }

    pub fn hashes(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Hashes every run of `n` consecutive lowercased words. A text with fewer than
/// `n` words (but at least one) becomes a single shingle of all its words.
pub fn shingle(text: &str, n: usize) -> ShingleSet {
    let n = n.max(1);
    let words: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
    if words.is_empty() {
        return ShingleSet::default();
    }
    let hash = |w: &[String]| xxh3_64(w.join(" ").as_bytes());
    if words.len() < n {
        return ShingleSet(vec![hash(&words)]);
    }
    ShingleSet::from_hashes(words.windows(n).map(hash).collect())
}

/// `|a ∩ b| / |a ∪ b|`; two empty sets are identical.
pub fn exact_jaccard(a: &ShingleSet, b: &ShingleSet) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let (x, y) = (a.hashes(), b.hashes());
    let (mut i, mut j, mut inter) = (0, 0, 0usize);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    inter as f64 / (x.len() + y.len() - inter) as f64
}

const MERSENNE_61: u64 = (1 << 61) - 1;

fn mod_m61(x: u128) -> u64 {
    let lo = (x as u64) & MERSENNE_61;
    let hi = (x >> 61) as u64;
    let s = lo + (hi & MERSENNE_61) + ((x >> 122) as u64);
    let s = (s & MERSENNE_61) + (s >> 61);
    if s >= MERSENNE_61 {
        s - MERSENNE_61
    } else {
        s
    }
}

/// `k` hash functions `(a·x + b) mod (2^61 - 1)` with coefficients drawn from a
/// seeded ChaCha stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    seed: u64,
    coeffs: Vec<(u64, u64)>,
}

impl HashFamily {
    pub fn new(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..k)
            .map(|_| {
                (
                    rng.random_range(1..MERSENNE_61),
                    rng.random_range(0..MERSENNE_61),
                )
            })
            .collect();
        HashFamily { seed, coeffs }
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn sign(&self, s: &ShingleSet) -> MinHashSignature {
        let mut mins = vec![u64::MAX; self.coeffs.len()];
        for &h in s.hashes() {
            let x = u128::from(mod_m61(u128::from(h)));
            for (m, &(a, b)) in mins.iter_mut().zip(&self.coeffs) {
                let v = mod_m61(u128::from(a) * x + u128::from(b));
                if v < *m {
                    *m = v;
                }
            }
        }
        MinHashSignature {
            seed: self.seed,
            mins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinHashSignature {
    pub seed: u64,
    pub mins: Vec<u64>,
}

impl MinHashSignature {
    pub fn k(&self) -> usize {
        self.mins.len()
    }
}

/// One-off signature. When signing many sets, build a [`HashFamily`] once.
pub fn signature(s: &ShingleSet, k: usize, seed: u64) -> MinHashSignature {
    HashFamily::new(k, seed).sign(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("signatures are not comparable: k {k_a} vs {k_b}, seed {seed_a} vs {seed_b}")]
pub struct SignatureMismatch {
    pub k_a: usize,
    pub k_b: usize,
    pub seed_a: u64,
    pub seed_b: u64,
}

/// Fraction of positions where the two signatures agree.
pub fn estimate_jaccard(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64, SignatureMismatch> {
    if a.k() != b.k() || a.seed != b.seed || a.k() == 0 {
        return Err(SignatureMismatch {
            k_a: a.k(),
            k_b: b.k(),
            seed_a: a.seed,
            seed_b: b.seed,
        });
    }
    let agree = a.mins.iter().zip(&b.mins).filter(|(x, y)| x == y).count();
    Ok(agree as f64 / a.k() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shingle_counts() {
        assert_eq!(shingle("a b c d e f", 5).len(), 2);
        assert_eq!(shingle("a b", 5).len(), 1);
        assert_eq!(shingle("", 5).len(), 0);
        assert_eq!(shingle("A  B\tc d e", 5), shingle("a b c d e", 5));
        assert_eq!(shingle("x y z", 1).len(), 3);
    }

    #[test]
    fn jaccard_examples() {
        let s = |v: &[u64]| ShingleSet::from_hashes(v.to_vec());
        assert_eq!(exact_jaccard(&s(&[1, 2, 3]), &s(&[2, 3, 4])), 0.5);
        assert_eq!(exact_jaccard(&s(&[1, 2]), &s(&[1, 2])), 1.0);
        assert_eq!(exact_jaccard(&s(&[1]), &s(&[2])), 0.0);
        assert_eq!(exact_jaccard(&s(&[]), &s(&[])), 1.0);
    }

    #[test]
    fn mersenne_reduction() {
        for x in [0u128, 1, MERSENNE_61 as u128, MERSENNE_61 as u128 + 5, u128::from(u64::MAX), (MERSENNE_61 as u128 - 1).pow(2)] {
            assert_eq!(u128::from(mod_m61(x)), x % u128::from(MERSENNE_61));
        }
    }

    #[test]
    fn signatures() {
        let a = shingle("the quick brown fox jumps over the lazy dog again", 5);
        let sa = signature(&a, 128, 1);
        assert_eq!(estimate_jaccard(&sa, &signature(&a, 128, 1)), Ok(1.0));
        assert!(estimate_jaccard(&sa, &signature(&a, 64, 1)).is_err());
        assert!(estimate_jaccard(&sa, &signature(&a, 128, 2)).is_err());
        let b = shingle("completely different words appear in this other sentence here", 5);
        assert!(estimate_jaccard(&sa, &signature(&b, 128, 1)).unwrap() < 0.1);
    }
}
