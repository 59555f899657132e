//! Fuzzes the reference-catalog JSON decoder: any input must either fail
//! cleanly or decode to a value whose encoding decodes back unchanged.

#![no_main]

use kdvcalc::conserve::ReferenceCatalog;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(catalog) = ReferenceCatalog::from_json_str(src) else {
        return;
    };
    let encoded = catalog.to_json_string();
    let redecoded = ReferenceCatalog::from_json_str(&encoded)
        .unwrap_or_else(|e| panic!("canonical encoding `{encoded}` failed to decode: {e}"));
    assert_eq!(
        redecoded, catalog,
        "round trip changed the value of `{encoded}`"
    );
});
