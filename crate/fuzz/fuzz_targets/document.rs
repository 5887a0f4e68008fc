#![no_main]

use libfuzzer_sys::fuzz_target;
use mzl_cli::doc::decode_document;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = decode_document(s) {
        // accepted documents re-encode to an accepted, equal document
        assert_eq!(decode_document(&d.to_json()).unwrap(), d);
    }
});
