mod oracles;

use literate_core::codec::{
    decode_bracketed, decode_layout, decode_layout_quantized, encode_bracketed, encode_layout,
    quantize_page, CodecConfig, Special,
};
use literate_core::PageDocument;
use oracles::random_page;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest coordinate error between a page and its decoded copy, as a fraction
/// of the page side, per axis.
fn max_error(a: &PageDocument, b: &PageDocument) -> (u32, u32) {
    let mut ex = 0;
    let mut ey = 0;
    for (la, lb) in a.lines().iter().zip(b.lines()) {
        let (p, q) = (la.bbox().unwrap().to_array(), lb.bbox().unwrap().to_array());
        ex = ex.max(p[0].abs_diff(q[0])).max(p[2].abs_diff(q[2]));
        ey = ey.max(p[1].abs_diff(q[1])).max(p[3].abs_diff(q[3]));
    }
    (ex, ey)
}

fn check_page(page: &PageDocument, cfg: &CodecConfig) {
    let q = quantize_page(page, cfg).unwrap();

    let tokens = encode_layout(page, cfg).unwrap();
    assert_eq!(decode_layout_quantized(&tokens, cfg).unwrap(), q);
    let back = decode_layout(&tokens, page.width(), page.height(), cfg).unwrap();
    assert_eq!(quantize_page(&back, cfg).unwrap(), q);
    assert_eq!(encode_layout(&back, cfg).unwrap(), tokens);

    let text = encode_bracketed(page, cfg).unwrap();
    assert_eq!(decode_bracketed(&text, cfg).unwrap(), q);

    let json = tokens.to_json();
    assert_eq!(literate_core::codec::TokenStream::from_json(&json).unwrap(), tokens);

    let (ex, ey) = max_error(page, &back);
    let l = u64::from(cfg.bins());
    // error < side / L, compared in integers: error * L < side
    if page.width() > cfg.bins() {
        assert!(u64::from(ex) * l < u64::from(page.width()), "x error {ex} on width {}", page.width());
    }
    if page.height() > cfg.bins() {
        assert!(u64::from(ey) * l < u64::from(page.height()), "y error {ey} on height {}", page.height());
    }
}

#[test]
fn universe_size() {
    let cfg = CodecConfig::default();
    assert_eq!(Special::location_universe(&cfg).count(), 8194);
    assert_eq!(cfg.location_token_count(), 8194);
}

#[test]
fn round_trip_on_large_pages() {
    let cfg = CodecConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let page = random_page(&mut rng, 4097..=20_000, 8);
        check_page(&page, &cfg);
    }
}

#[test]
fn round_trip_on_small_pages() {
    // Below L several bins share a pixel; decode∘encode still fixes the bins.
    let cfg = CodecConfig::new(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let page = random_page(&mut rng, 1..=300, 6);
        check_page(&page, &cfg);
    }
}

#[test]
fn bound_is_tight_when_side_equals_bins() {
    // Pixels L-1 and L share the last bin, so one of them is off by exactly 1 = W/L.
    let cfg = CodecConfig::new(8).unwrap();
    let page = oracles::boxed_page(8, 8, &[literate_core::BoundingBox::new(7, 7, 8, 8).unwrap()]);
    let tokens = encode_layout(&page, &cfg).unwrap();
    let back = decode_layout(&tokens, 8, 8, &cfg).unwrap();
    assert_eq!(max_error(&page, &back), (1, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_bins_round_trip(seed in any::<u64>(), bins in 1u32..5000) {
        let cfg = CodecConfig::new(bins).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let page = random_page(&mut rng, 1..=12_000, 5);
        let q = quantize_page(&page, &cfg).unwrap();
        let tokens = encode_layout(&page, &cfg).unwrap();
        prop_assert_eq!(decode_layout_quantized(&tokens, &cfg).unwrap(), q.clone());
        prop_assert_eq!(decode_bracketed(&encode_bracketed(&page, &cfg).unwrap(), &cfg).unwrap(), q);
    }

    #[test]
    fn decoders_never_panic(text in "\\PC{0,120}") {
        let cfg = CodecConfig::default();
        let _ = decode_bracketed(&text, &cfg);
        let _ = literate_core::codec::decode_bracketed_lenient(&text, &cfg);
        let _ = literate_core::codec::TokenStream::from_json(&text);
    }
}
