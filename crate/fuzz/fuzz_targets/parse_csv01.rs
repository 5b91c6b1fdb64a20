//! 0/1 CSV parsing never panics; accepted input survives a round trip.

#![no_main]

use depmine::Dataset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    let Ok(d) = Dataset::parse_csv01(data) else {
        return;
    };
    let again = Dataset::parse_csv01(d.to_csv01().as_bytes()).expect("own output parses");
    assert_eq!(again, d);
});
