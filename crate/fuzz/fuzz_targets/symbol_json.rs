#![no_main]

use bbtspec::symbolkit::{char_function, parse_symbol, symbol_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(symbol) = parse_symbol(text) else { return };
    // Round trip through the canonical JSON form.
    let again = parse_symbol(&symbol_to_json(&symbol).to_string()).expect("canonical form parses");
    assert_eq!(symbol, again);
    if symbol.k() <= 3 && symbol.r() + symbol.s() <= 6 {
        let _ = char_function(&symbol);
    }
});
