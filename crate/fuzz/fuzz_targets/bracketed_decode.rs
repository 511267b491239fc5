#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_core::codec::{bracketed, decode_bracketed, CodecConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let cfg = CodecConfig::default();
    let _ = bracketed::decode_bracketed_lenient(text, &cfg);
    if let Ok(lines) = decode_bracketed(text, &cfg) {
        let encoded = bracketed::encode_quantized(&lines);
        assert_eq!(decode_bracketed(&encoded, &cfg).unwrap(), lines);
    }
});
