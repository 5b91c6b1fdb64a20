//! Transaction parsing never panics; accepted input survives a round trip.

#![no_main]

use depmine::Dataset;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    let Ok(d) = Dataset::parse_transactions(data) else {
        return;
    };
    let text = d.to_transactions();
    let again = Dataset::parse_transactions(text.as_bytes()).expect("own output parses");
    assert_eq!(again.n_rows(), d.n_rows());
    let mut a: Vec<(String, usize)> = d.names().iter().cloned().zip(d.freqs().iter().copied()).collect();
    let mut b: Vec<(String, usize)> = again.names().iter().cloned().zip(again.freqs().iter().copied()).collect();
    // columns that never occur cannot be written as transactions
    a.retain(|(_, f)| *f > 0);
    b.retain(|(_, f)| *f > 0);
    a.sort();
    b.sort();
    assert_eq!(a, b);
});
