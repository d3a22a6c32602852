#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use bbtspec::symbolkit::{load_symbol, parse_symbol_with, MatrixSymbol, Scalar};
use proptest::prelude::*;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/symbols")
}

pub fn stored(name: &str) -> MatrixSymbol {
    load_symbol(data_dir().join(format!("{name}.json"))).unwrap()
}

pub fn b3(zeta: i64) -> MatrixSymbol {
    let text = std::fs::read_to_string(data_dir().join("b3.json")).unwrap();
    let bindings = HashMap::from([("ZETA".to_string(), Scalar::integer(zeta))]);
    parse_symbol_with(&text, &bindings).unwrap()
}

/// Every stored example, with the placeholder symbol at each sweep value.
pub fn all_stored() -> Vec<(String, MatrixSymbol)> {
    let mut out: Vec<(String, MatrixSymbol)> =
        ["b1", "b2", "two_ovals", "joukowski"].iter().map(|n| (n.to_string(), stored(n))).collect();
    for z in [70, 47, 40, 10] {
        out.push((format!("b3({z})"), b3(z)));
    }
    out
}

/// Integer symbols with `1 <= k <= 3`, blocks at `-r..=s` for `r, s` in `{1, 2}`
/// and entries in `[-9, 9]`; zero boundary blocks are rejected.
pub fn integer_symbol(max_k: usize) -> impl Strategy<Value = MatrixSymbol> {
    (1..=max_k, 1i32..=2, 1i32..=2)
        .prop_flat_map(|(k, r, s)| {
            let blocks = (r + s + 1) as usize;
            (Just(k), Just(r), proptest::collection::vec(-9i64..=9, blocks * k * k))
        })
        .prop_filter_map("boundary block vanishes", |(k, r, data)| {
            let blocks: Vec<(i32, Vec<Vec<i64>>)> = data
                .chunks(k * k)
                .enumerate()
                .map(|(i, c)| (i as i32 - r, c.chunks(k).map(|row| row.to_vec()).collect()))
                .collect();
            let nonzero = |b: &Vec<Vec<i64>>| b.iter().flatten().any(|&v| v != 0);
            if !nonzero(&blocks[0].1) || !nonzero(&blocks[blocks.len() - 1].1) {
                return None;
            }
            MatrixSymbol::from_integer_blocks(k, &blocks).ok()
        })
}
