//! Rule parsing never panics; an accepted rule re-parses to itself.

#![no_main]

use depmine::{parse_rule_spec, Sign};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok((lhs, rhs, sign)) = parse_rule_spec(text) else {
        return;
    };
    assert!(!lhs.is_empty() && !rhs.is_empty());
    let neg = if sign == Sign::Negated { "!" } else { "" };
    let again = parse_rule_spec(&format!("{} -> {neg}{rhs}", lhs.join(", "))).expect("canonical form parses");
    assert_eq!(again, (lhs, rhs, sign));
});
