#![no_main]

use libfuzzer_sys::fuzz_target;
use mzl_cli::range::{parse_even_range, parse_int_range, MAX_RANGE_LEN};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_int_range(s) {
        assert!(r.lo <= r.hi && r.len() <= MAX_RANGE_LEN);
    }
    if let Ok(r) = parse_even_range(s) {
        assert!(r.lo % 2 == 0 && r.hi % 2 == 0);
        assert_eq!(r.iter().count() as u64, r.len());
    }
});
