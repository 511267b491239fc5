mod support;

use literate_curate::align::{alignment_ratio, filter_aligned};
use literate_curate::dedup::{dedup, DedupConfig};
use literate_curate::minhash::{estimate_jaccard, exact_jaccard, shingle, signature, HashFamily};
use literate_curate::mixture::{sample_mixture, MixtureSpec, SourceSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{corpus_with_pair, random_words, sets_with_jaccard};

#[test]
fn estimate_tracks_exact_jaccard() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let family = HashFamily::new(128, 77);
    let mut abs = 0.0;
    for i in 0..100 {
        let target = 0.1 + 0.8 * i as f64 / 99.0;
        let (a, b) = sets_with_jaccard(&mut rng, target, 300);
        let exact = exact_jaccard(&a, &b);
        let est = estimate_jaccard(&family.sign(&a), &family.sign(&b)).unwrap();
        abs += (est - exact).abs();
    }
    let mean = abs / 100.0;
    assert!(mean < 0.04, "mean abs error {mean}");
}

#[test]
fn estimator_is_unbiased() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut signed = 0.0;
    let n = 1200;
    for i in 0..n {
        let family = HashFamily::new(128, i as u64);
        let target = rng.random_range(0.0..1.0);
        let (a, b) = sets_with_jaccard(&mut rng, target, 150);
        signed += estimate_jaccard(&family.sign(&a), &family.sign(&b)).unwrap() - exact_jaccard(&a, &b);
    }
    let bias = signed / n as f64;
    assert!(bias.abs() < 0.01, "bias {bias}");
}

#[test]
fn disjoint_sets_estimate_near_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let family = HashFamily::new(128, 5);
    for _ in 0..100 {
        let (a, b) = sets_with_jaccard(&mut rng, 0.0, 400);
        assert_eq!(exact_jaccard(&a, &b), 0.0);
        let est = estimate_jaccard(&family.sign(&a), &family.sign(&b)).unwrap();
        assert!(est <= 0.05, "{est}");
    }
}

#[test]
fn constructed_pair_is_clustered() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let docs = corpus_with_pair(&mut rng);
    let j = exact_jaccard(&shingle(&docs[3], 5), &shingle(&docs[7], 5));
    assert!(j >= 0.8, "fixture Jaccard {j}");
    let refs: Vec<&str> = docs.iter().map(String::as_str).collect();
    let out = dedup(&refs, &DedupConfig::default()).unwrap();
    assert_eq!(out.clusters.len(), 1);
    assert_eq!(out.clusters[0].kept, 3);
    assert_eq!(out.clusters[0].dropped, vec![7]);
    assert_eq!(out.kept, vec![0, 1, 2, 3, 4, 5, 6, 8, 9]);
}

#[test]
fn low_similarity_pairs_survive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = DedupConfig::default();
    for _ in 0..200 {
        let base = random_words(&mut rng, 120);
        // Replace a random 40-60% of the words.
        let mut other = base.clone();
        let k = rng.random_range(48..72);
        let mut idx: Vec<usize> = (0..base.len()).collect();
        idx.shuffle(&mut rng);
        for &i in &idx[..k] {
            other[i] = format!("z{:x}", rng.random::<u64>());
        }
        let (a, b) = (base.join(" "), other.join(" "));
        let j = exact_jaccard(&shingle(&a, 5), &shingle(&b, 5));
        assert!(j < 0.5);
        let out = dedup(&[&a, &b], &cfg).unwrap();
        assert_eq!(out.kept, vec![0, 1], "J = {j}");
    }
}

#[test]
fn table_two_layout_ratios() {
    let weights = [10.0, 20.0, 5.0, 10.0, 3.0, 1.0, 1.0];
    check_ratios(&weights, 100_000, 8);
}

#[test]
fn table_two_markup_ratios() {
    check_ratios(&[10.0, 15.0, 15.0, 10.0], 100_000, 9);
}

fn check_ratios(weights: &[f64], total: u64, seed: u64) {
    let sum: f64 = weights.iter().sum();
    let spec = MixtureSpec::new(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| SourceSpec {
                name: format!("src{i}"),
                path: format!("src{i}.jsonl").into(),
                ratio: w / sum,
            })
            .collect(),
    )
    .unwrap();
    let pools: Vec<Vec<usize>> = (0..weights.len()).map(|i| vec![i; 3]).collect();
    let draws = sample_mixture(&spec, &pools, total, seed).unwrap();
    assert_eq!(draws.len() as u64, total);
    for (i, w) in weights.iter().enumerate() {
        let p = w / sum;
        let n = draws.iter().filter(|(s, _)| *s == i).count() as f64;
        let mu = p * total as f64;
        let sigma = (total as f64 * p * (1.0 - p)).sqrt();
        assert!((n - mu).abs() <= 3.0 * sigma, "source {i}: {n} vs {mu} ± {sigma}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn estimate_is_symmetric(a in "[a-e ]{0,80}", b in "[a-e ]{0,80}", seed in any::<u64>()) {
        let (sa, sb) = (shingle(&a, 3), shingle(&b, 3));
        let (x, y) = (signature(&sa, 64, seed), signature(&sb, 64, seed));
        prop_assert_eq!(estimate_jaccard(&x, &y).unwrap(), estimate_jaccard(&y, &x).unwrap());
        prop_assert_eq!(estimate_jaccard(&x, &x).unwrap(), 1.0);
        prop_assert_eq!(exact_jaccard(&sa, &sb), exact_jaccard(&sb, &sa));
    }

    #[test]
    fn markup_decoration_keeps_full_alignment(words in prop::collection::vec("[a-z]{1,6}", 1..20), style in 0usize..4) {
        let plain = words.join(" ");
        let md = match style {
            0 => format!("# {plain}"),
            1 => words.iter().map(|w| format!("**{w}**")).collect::<Vec<_>>().join(" "),
            2 => format!("| {} |", words.join(" | ")),
            _ => words.iter().map(|w| format!("`{w}`")).collect::<Vec<_>>().join(" "),
        };
        prop_assert_eq!(alignment_ratio(&plain, &md), 1.0);
        let (kept, _) = filter_aligned(&[(plain.as_str(), md.as_str())], 0.95).unwrap();
        prop_assert_eq!(kept, vec![0]);
    }

    #[test]
    fn dedup_kept_set_ignores_order_of_distinct_records(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let docs: Vec<String> = (0..12).map(|_| random_words(&mut rng, 30).join(" ")).collect();
        let mut shuffled = docs.clone();
        shuffled.shuffle(&mut rng);
        let keep = |d: &[String]| {
            let refs: Vec<&str> = d.iter().map(String::as_str).collect();
            let out = dedup(&refs, &DedupConfig::default()).unwrap();
            let mut k: Vec<String> = out.kept.iter().map(|&i| d[i].clone()).collect();
            k.sort();
            k
        };
        prop_assert_eq!(keep(&docs), keep(&shuffled));
    }
}
