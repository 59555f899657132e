//! Fuzzes the text grammar: any input must either fail cleanly or produce
//! a canonical polynomial whose rendering parses back to the same value.

#![no_main]

use kdvcalc::jetpoly::DiffPoly;
use libfuzzer_sys::fuzz_target;

const DEPS: &[&str] = &["u", "v", "w"];

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(poly) = DiffPoly::parse(src, DEPS) else {
        return;
    };
    let printed = poly.to_string();
    let reparsed = DiffPoly::parse(&printed, DEPS)
        .unwrap_or_else(|e| panic!("canonical rendering `{printed}` failed to parse: {e}"));
    assert_eq!(reparsed, poly, "round trip changed the value of `{printed}`");
});
