#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_core::codec::{decode_layout_lenient, decode_layout_quantized, tokens, CodecConfig, TokenStream};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(stream) = TokenStream::from_json(text) else { return };
    let cfg = CodecConfig::default();
    let _ = decode_layout_lenient(&stream, &cfg);
    if let Ok(lines) = decode_layout_quantized(&stream, &cfg) {
        let again = tokens::encode_quantized(&lines);
        assert_eq!(decode_layout_quantized(&again, &cfg).unwrap(), lines);
    }
});
