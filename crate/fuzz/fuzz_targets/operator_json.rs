//! Fuzzes the operator JSON decoder: any input must either fail cleanly
//! or decode to a canonical value whose encoding decodes back unchanged.

#![no_main]

use kdvcalc::opcalc::Operator;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(op) = Operator::from_json_str(src) else {
        return;
    };
    let encoded = op.to_json_string();
    let redecoded = Operator::from_json_str(&encoded)
        .unwrap_or_else(|e| panic!("canonical encoding `{encoded}` failed to decode: {e}"));
    assert_eq!(redecoded, op, "round trip changed the value of `{encoded}`");
});
