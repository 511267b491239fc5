#![no_main]

use libfuzzer_sys::fuzz_target;
use literate_core::treedist::{nted_pair, parse_markdown_str};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let out = parse_markdown_str(text);
    if out.tree.node_count() <= 400 {
        assert_eq!(nted_pair(&out.tree, &out.tree).unwrap(), 1.0);
    }
});
