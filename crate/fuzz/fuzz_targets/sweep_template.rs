#![no_main]

use std::collections::HashMap;

use bbtspec::symbolkit::{parse_symbol_with, placeholders, Scalar};
use libfuzzer_sys::fuzz_target;

// First line: the value bound to every placeholder. Rest: the symbol template.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (value, template) = text.split_once('\n').unwrap_or(("0", text));
    let Ok(value) = Scalar::parse_literal(value) else { return };
    let Ok(names) = placeholders(template) else { return };
    let bindings: HashMap<String, Scalar> = names.into_iter().map(|n| (n, value.clone())).collect();
    let _ = parse_symbol_with(template, &bindings);
});
