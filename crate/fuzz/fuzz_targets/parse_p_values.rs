//! p-value list parsing never panics and only accepts values in (0, 1].

#![no_main]

use depmine::multiple::parse_p_values;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ps) = parse_p_values(text) {
        assert!(ps.iter().all(|p| *p > 0.0 && *p <= 1.0));
    }
});
