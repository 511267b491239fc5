#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_curate::mixture::MixtureSpec;
use literate_curate::records::{parse_record, read_records};

fuzz_target!(|data: &[u8]| {
    let _ = read_records(data);
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_record(text, 1);
        let _ = MixtureSpec::from_json(text);
    }
});
