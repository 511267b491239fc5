mod oracles;

use literate_core::eval::{evaluate_ocr, gold_predictions, EvalOptions, Metric, PredictionSet};
use literate_core::manifest::{GroundTruth, Sample};
use literate_core::Category;
use oracles::random_page;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(seed: u64, n: usize) -> (Vec<Sample>, PredictionSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Sample> = (0..n)
        .map(|i| {
            let cat = Category::ALL[rng.random_range(0..3)];
            Sample::new(format!("s{i}"), cat, GroundTruth::Page(random_page(&mut rng, 100..=900, 5)))
        })
        .collect();
    // Predictions: a random page per sample, some missing.
    let mut preds = gold_predictions(&samples);
    for p in preds.predictions.iter_mut() {
        if rng.random_bool(0.6) {
            // Page sizes differ from the ground truth, so boxes get rescaled.
            let page = random_page(&mut rng, 100..=900, 5);
            p.payload = literate_core::eval::PredictionPayload::Page(page);
        }
    }
    preds.predictions.retain(|_| rng.random_bool(0.8));
    (samples, preds)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn means_ignore_sample_order(seed in any::<u64>(), n in 1usize..25) {
        let (samples, preds) = corpus(seed, n);
        let opts = EvalOptions::default();
        let a = evaluate_ocr(&samples, &preds, &opts).unwrap();
        let mut shuffled = samples.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let b = evaluate_ocr(&shuffled, &preds, &opts).unwrap();
        for m in [Metric::F1, Metric::Iou, Metric::Ned] {
            let (x, y) = (a.overall.get(m), b.overall.get(m));
            prop_assert_eq!(x.is_some(), y.is_some());
            if let (Some(x), Some(y)) = (x, y) {
                prop_assert!((x - y).abs() < 1e-12);
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }
        prop_assert_eq!(a.per_category.len(), b.per_category.len());
    }
}
