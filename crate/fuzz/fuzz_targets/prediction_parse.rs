#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_core::eval::{parse_prediction, read_predictions};

fuzz_target!(|data: &[u8]| {
    let _ = read_predictions(data);
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_prediction(text, 1);
    }
});
