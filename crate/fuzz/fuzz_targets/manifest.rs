#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_core::manifest::{parse_sample, read_manifest, sample_to_json};

fuzz_target!(|data: &[u8]| {
    let _ = read_manifest(data);
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(sample) = parse_sample(text, 1) {
            let again = parse_sample(&sample_to_json(&sample), 1).expect("written samples parse");
            assert_eq!(again, sample);
        }
    }
});
