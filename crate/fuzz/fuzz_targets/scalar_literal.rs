#![no_main]

use bbtspec::symbolkit::Scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = Scalar::parse_literal(text) {
        let _ = v.to_f64();
        let _ = v.checked_mul(&v);
        let _ = v.checked_div(&v);
    }
});
