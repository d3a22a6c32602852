use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;
use thiserror::Error;

use super::laurent::LaurentPoly;
use super::scalar::{Mode, Scalar, ScalarError};

/// Largest block size accepted at load time.
pub const MAX_BLOCK_SIZE: usize = 64;
/// Largest absolute block exponent accepted at load time.
pub const MAX_EXPONENT: i32 = 512;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("cannot read symbol file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid symbol layout: {0}")]
    Layout(String),
    #[error("block {block}, entry ({row},{col}): {source}")]
    Entry {
        block: i32,
        row: usize,
        col: usize,
        #[source]
        source: ScalarError,
    },
    #[error("block {block}, entry ({row},{col}) is complex; only real symbols are supported")]
    NonReal { block: i32, row: usize, col: usize },
    #[error("placeholder {0:?} has no value")]
    UnboundPlaceholder(String),
    #[error("block size k must be at least 1")]
    ZeroBlockSize,
    #[error("every block is zero")]
    AllZero,
    #[error("symbol needs nonzero blocks at some negative and some positive power (found r={r}, s={s})")]
    BandTooNarrow { r: i32, s: i32 },
    #[error("entries mix exact and floating-point values")]
    MixedMode,
    #[error("periodic sequences have different lengths ({0} vs {1})")]
    RaggedSequences(usize, usize),
    #[error("{0}")]
    TooLarge(String),
}

/// Matrix-valued Laurent symbol `B(z) = sum_{m=-r}^{s} A_m z^m` with real `k x k` blocks.
#[derive(Clone, PartialEq)]
pub struct MatrixSymbol {
    k: usize,
    r: i32,
    s: i32,
    blocks: BTreeMap<i32, Vec<Vec<Scalar>>>,
    mode: Mode,
}

impl fmt::Debug for MatrixSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("MatrixSymbol");
        d.field("k", &self.k).field("r", &self.r).field("s", &self.s);
        for (m, block) in &self.blocks {
            let rows: Vec<Vec<String>> = block.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect();
            d.field(&format!("A[{m}]"), &rows);
        }
        d.finish()
    }
}

impl MatrixSymbol {
    /// Validates and normalizes: zero blocks are dropped and the band bounds recomputed.
    pub fn new(k: usize, blocks: BTreeMap<i32, Vec<Vec<Scalar>>>) -> Result<Self, SymbolError> {
        if k == 0 {
            return Err(SymbolError::ZeroBlockSize);
        }
        if k > MAX_BLOCK_SIZE {
            return Err(SymbolError::TooLarge(format!("block size {k} exceeds {MAX_BLOCK_SIZE}")));
        }
        let mut modes = BTreeSet::new();
        let mut kept = BTreeMap::new();
        for (m, block) in blocks {
            if m.abs() > MAX_EXPONENT {
                return Err(SymbolError::TooLarge(format!("exponent {m} exceeds {MAX_EXPONENT} in magnitude")));
            }
            if block.len() != k || block.iter().any(|row| row.len() != k) {
                return Err(SymbolError::Layout(format!("block {m} is not {k}x{k}")));
            }
            for v in block.iter().flatten() {
                modes.insert(match v.mode() {
                    Mode::Exact => 0,
                    Mode::Float => 1,
                });
                if let Scalar::Float(x) = v {
                    if !x.is_finite() {
                        return Err(SymbolError::Layout(format!("block {m} has a non-finite entry")));
                    }
                }
            }
            if block.iter().flatten().any(|v| !v.is_zero()) {
                kept.insert(m, block);
            }
        }
        if modes.len() > 1 {
            return Err(SymbolError::MixedMode);
        }
        let mode = if modes.contains(&1) { Mode::Float } else { Mode::Exact };
        let (Some(&lo), Some(&hi)) = (kept.keys().next(), kept.keys().next_back()) else {
            return Err(SymbolError::AllZero);
        };
        let (r, s) = (-lo, hi);
        if r < 1 || s < 1 {
            return Err(SymbolError::BandTooNarrow { r, s });
        }
        Ok(MatrixSymbol { k, r, s, blocks: kept, mode })
    }

    /// Builds a symbol from integer blocks; convenient for tests and examples.
    pub fn from_integer_blocks(k: usize, blocks: &[(i32, Vec<Vec<i64>>)]) -> Result<Self, SymbolError> {
        let map = blocks
            .iter()
            .map(|(m, b)| (*m, b.iter().map(|row| row.iter().map(|&v| Scalar::integer(v)).collect()).collect()))
            .collect();
        Self::new(k, map)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of negative block powers.
    pub fn r(&self) -> i32 {
        self.r
    }

    /// Number of positive block powers.
    pub fn s(&self) -> i32 {
        self.s
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    pub fn blocks(&self) -> &BTreeMap<i32, Vec<Vec<Scalar>>> {
        &self.blocks
    }

    pub fn block(&self, m: i32) -> Option<&Vec<Vec<Scalar>>> {
        self.blocks.get(&m)
    }

    /// Explicit conversion of every entry to floating point.
    pub fn to_float(&self) -> MatrixSymbol {
        let blocks = self
            .blocks
            .iter()
            .map(|(m, b)| (*m, b.iter().map(|row| row.iter().map(Scalar::to_float).collect()).collect()))
            .collect();
        MatrixSymbol { blocks, mode: Mode::Float, ..*self }
    }

    /// Entry `(i, j)` of `B(z)` as a Laurent polynomial with converted coefficients.
    pub fn entry_poly<C: super::coeff::Coeff>(&self, i: usize, j: usize, conv: impl Fn(&Scalar) -> C) -> LaurentPoly<C> {
        let coeffs = (-self.r..=self.s)
            .map(|m| self.blocks.get(&m).map(|b| conv(&b[i][j])).unwrap_or_else(C::zero))
            .collect();
        LaurentPoly::from_coeffs(-self.r, coeffs)
    }

    /// Exact entry polynomials, when the symbol is in exact mode.
    pub fn exact_entries(&self) -> Option<Vec<Vec<LaurentPoly<BigRational>>>> {
        if !self.is_exact() {
            return None;
        }
        Some(
            (0..self.k)
                .map(|i| (0..self.k).map(|j| self.entry_poly(i, j, |v| v.as_exact().unwrap().clone())).collect())
                .collect(),
        )
    }

    pub fn float_entries(&self) -> Vec<Vec<LaurentPoly<f64>>> {
        (0..self.k).map(|i| (0..self.k).map(|j| self.entry_poly(i, j, Scalar::to_f64)).collect()).collect()
    }

    /// Float copies of the blocks, `(m, row-major k*k)`.
    pub fn float_blocks(&self) -> Vec<(i32, Vec<f64>)> {
        self.blocks.iter().map(|(m, b)| (*m, b.iter().flatten().map(Scalar::to_f64).collect())).collect()
    }

    /// `B(z)` at a nonzero complex point.
    pub fn eval(&self, z: Complex64) -> DMatrix<Complex64> {
        let k = self.k;
        let mut out = DMatrix::zeros(k, k);
        for (m, block) in &self.blocks {
            let zm = z.powi(*m);
            for i in 0..k {
                for j in 0..k {
                    let v = block[i][j].to_f64();
                    if v != 0.0 {
                        out[(i, j)] += zm * v;
                    }
                }
            }
        }
        out
    }

    /// Symbol `B(rho z)`: the block Toeplitz matrices are similar through `diag(rho^i I_k)`.
    pub fn rescaled(&self, rho: f64) -> MatrixSymbol {
        let blocks = self
            .blocks
            .iter()
            .map(|(m, b)| {
                let f = rho.powi(*m);
                (*m, b.iter().map(|row| row.iter().map(|v| Scalar::Float(v.to_f64() * f)).collect()).collect())
            })
            .collect();
        MatrixSymbol { blocks, mode: Mode::Float, ..*self }
    }
}

/// Reads a symbol file.
pub fn load_symbol(path: impl AsRef<Path>) -> Result<MatrixSymbol, SymbolError> {
    let text = std::fs::read_to_string(path)?;
    parse_symbol(&text)
}

/// Parses the JSON symbol format `{"k": int, "blocks": {"<m>": [[entry, ...], ...]}}`.
pub fn parse_symbol(text: &str) -> Result<MatrixSymbol, SymbolError> {
    parse_symbol_with(text, &HashMap::new())
}

/// Parses a symbol whose string entries `"$NAME"` are looked up in `bindings`.
pub fn parse_symbol_with(text: &str, bindings: &HashMap<String, Scalar>) -> Result<MatrixSymbol, SymbolError> {
    let value: Value = serde_json::from_str(text).map_err(|e| SymbolError::Json(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| SymbolError::Layout("top level must be an object".into()))?;
    let k_value = obj.get("k").ok_or_else(|| SymbolError::Layout("missing \"k\"".into()))?;
    let k = k_value
        .as_u64()
        .ok_or_else(|| SymbolError::Layout(format!("\"k\" must be a non-negative integer, got {k_value}")))?;
    if k == 0 {
        return Err(SymbolError::ZeroBlockSize);
    }
    if k > MAX_BLOCK_SIZE as u64 {
        return Err(SymbolError::TooLarge(format!("block size {k} exceeds {MAX_BLOCK_SIZE}")));
    }
    let k = k as usize;
    let blocks_value = obj.get("blocks").ok_or_else(|| SymbolError::Layout("missing \"blocks\"".into()))?;
    let blocks_obj = blocks_value
        .as_object()
        .ok_or_else(|| SymbolError::Layout("\"blocks\" must be an object keyed by exponent".into()))?;
    let mut blocks = BTreeMap::new();
    for (key, block_value) in blocks_obj {
        let m: i32 = key
            .trim()
            .parse()
            .map_err(|_| SymbolError::Layout(format!("block key {key:?} is not a signed integer")))?;
        if m.abs() > MAX_EXPONENT {
            return Err(SymbolError::TooLarge(format!("exponent {m} exceeds {MAX_EXPONENT} in magnitude")));
        }
        let rows = block_value
            .as_array()
            .ok_or_else(|| SymbolError::Layout(format!("block {m} must be an array of rows")))?;
        if rows.len() != k {
            return Err(SymbolError::Layout(format!("block {m} has {} rows, expected {k}", rows.len())));
        }
        let mut block = Vec::with_capacity(k);
        for (row_idx, row_value) in rows.iter().enumerate() {
            let row = row_value
                .as_array()
                .ok_or_else(|| SymbolError::Layout(format!("block {m}, row {row_idx} must be an array")))?;
            if row.len() != k {
                return Err(SymbolError::Layout(format!(
                    "block {m}, row {row_idx} has {} entries, expected {k}",
                    row.len()
                )));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(col, v)| parse_entry(v, bindings, m, row_idx, col))
                .collect::<Result<Vec<_>, _>>()?;
            block.push(parsed);
        }
        if blocks.insert(m, block).is_some() {
            return Err(SymbolError::Layout(format!("duplicate block exponent {m}")));
        }
    }
    MatrixSymbol::new(k, blocks)
}

fn parse_entry(
    v: &Value,
    bindings: &HashMap<String, Scalar>,
    block: i32,
    row: usize,
    col: usize,
) -> Result<Scalar, SymbolError> {
    let wrap = |source| SymbolError::Entry { block, row, col, source };
    match v {
        Value::Number(n) => Scalar::parse_literal(&n.to_string()).map_err(wrap),
        Value::String(s) => {
            if let Some(name) = s.strip_prefix('$') {
                return bindings.get(name).cloned().ok_or_else(|| SymbolError::UnboundPlaceholder(s.clone()));
            }
            Scalar::parse_literal(s).map_err(|e| match e {
                ScalarError::NonReal(_) => SymbolError::NonReal { block, row, col },
                other => wrap(other),
            })
        }
        Value::Object(map) if map.contains_key("re") || map.contains_key("im") => {
            let im = match map.get("im") {
                Some(im) => parse_entry(im, bindings, block, row, col)?,
                None => Scalar::integer(0),
            };
            if !im.is_zero() {
                return Err(SymbolError::NonReal { block, row, col });
            }
            match map.get("re") {
                Some(re) => parse_entry(re, bindings, block, row, col),
                None => Ok(Scalar::integer(0)),
            }
        }
        other => Err(SymbolError::Layout(format!(
            "block {block}, entry ({row},{col}) must be a number or string, got {other}"
        ))),
    }
}

/// Names of all `"$NAME"` placeholders appearing as entries.
pub fn placeholders(text: &str) -> Result<BTreeSet<String>, SymbolError> {
    fn walk(v: &Value, out: &mut BTreeSet<String>) {
        match v {
            Value::String(s) => {
                if let Some(name) = s.strip_prefix('$') {
                    out.insert(name.to_string());
                }
            }
            Value::Array(items) => items.iter().for_each(|i| walk(i, out)),
            Value::Object(map) => map.values().for_each(|i| walk(i, out)),
            _ => {}
        }
    }
    let value: Value = serde_json::from_str(text).map_err(|e| SymbolError::Json(e.to_string()))?;
    let mut out = BTreeSet::new();
    if let Some(blocks) = value.get("blocks") {
        walk(blocks, &mut out);
    }
    Ok(out)
}

/// Serializes a symbol back into the JSON file format (exact entries as strings when fractional).
pub fn symbol_to_json(symbol: &MatrixSymbol) -> Value {
    let blocks: serde_json::Map<String, Value> = symbol
        .blocks()
        .iter()
        .map(|(m, block)| {
            let rows = block
                .iter()
                .map(|row| Value::Array(row.iter().map(scalar_to_json).collect()))
                .collect();
            (m.to_string(), Value::Array(rows))
        })
        .collect();
    serde_json::json!({ "k": symbol.k(), "blocks": blocks })
}

fn scalar_to_json(v: &Scalar) -> Value {
    match v {
        Scalar::Exact(r) if r.is_integer() => {
            serde_json::from_str(&r.numer().to_string()).unwrap_or_else(|_| Value::String(v.to_string()))
        }
        Scalar::Exact(_) => Value::String(v.to_string()),
        Scalar::Float(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
    }
}

/// Builds the symbol of the k-periodic banded matrix with entries
/// `A[i][j] = a_{i-j, min(i,j) mod k}`, where `seqs[c][n + p] = a_{n,c}` for `-p <= n <= q`.
pub fn from_periodic_sequences(seqs: &[Vec<Scalar>], p: usize, q: usize) -> Result<MatrixSymbol, SymbolError> {
    let k = seqs.len();
    if k == 0 {
        return Err(SymbolError::ZeroBlockSize);
    }
    let len = p + q + 1;
    for s in seqs {
        if s.len() != len {
            return Err(SymbolError::RaggedSequences(len, s.len()));
        }
    }
    let ki = k as i64;
    let (p, q) = (p as i64, q as i64);
    let zero = match seqs[0][0].mode() {
        Mode::Exact => Scalar::integer(0),
        Mode::Float => Scalar::Float(0.0),
    };
    let m_lo = (-p - (ki - 1)).div_euclid(ki) - 1;
    let m_hi = (q + ki - 1).div_euclid(ki) + 1;
    let mut blocks = BTreeMap::new();
    for m in m_lo..=m_hi {
        let mut block = vec![vec![zero.clone(); k]; k];
        for (i, row) in block.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                // Global row index of block row m (relative to block column 0).
                let global_row = ki * m + i as i64;
                let global_col = j as i64;
                let offset = global_row - global_col;
                if offset < -p || offset > q {
                    continue;
                }
                let class = global_row.min(global_col).rem_euclid(ki) as usize;
                *entry = seqs[class][(offset + p) as usize].clone();
            }
        }
        blocks.insert(m as i32, block);
    }
    MatrixSymbol::new(k, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const B1_JSON: &str = r#"{"k": 2, "blocks": {
        "-1": [[-2, 0], [-4, 1]],
        "0":  [[8, -5], [-2, 5]],
        "1":  [[0, -6], [0, 0]]}}"#;

    #[test]
    fn loads_b1() {
        let s = parse_symbol(B1_JSON).unwrap();
        assert_eq!((s.k(), s.r(), s.s()), (2, 1, 1));
        assert!(s.is_exact());
    }

    #[test]
    fn loads_b2() {
        let s = parse_symbol(
            r#"{"k": 3, "blocks": {
            "-1": [[0,0,0],[0,0,0],[-6,4,0]],
            "0": [[8,8,10],[9,-5,8],[0,3,-7]],
            "1": [[0,0,-3],[0,0,0],[0,0,0]]}}"#,
        )
        .unwrap();
        assert_eq!((s.k(), s.r(), s.s()), (3, 1, 1));
    }

    #[test]
    fn trailing_zero_blocks_are_trimmed() {
        let s = parse_symbol(r#"{"k":1,"blocks":{"-3":[[0]],"-1":[[1]],"0":[[0]],"1":[[1]],"2":[[0.0]]}}"#).unwrap();
        assert_eq!((s.r(), s.s()), (1, 1));
        assert!(s.block(2).is_none());
    }

    #[test]
    fn rejects_constant_symbol() {
        let err = parse_symbol(r#"{"k":1,"blocks":{"0":[[1]]}}"#).unwrap_err();
        assert!(matches!(err, SymbolError::BandTooNarrow { r: 0, s: 0 }));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(parse_symbol("{"), Err(SymbolError::Json(_))));
        assert!(matches!(parse_symbol(r#"{"k":0,"blocks":{}}"#), Err(SymbolError::ZeroBlockSize)));
        assert!(matches!(parse_symbol(r#"{"k":1,"blocks":{"-1":[[0]],"1":[[0]]}}"#), Err(SymbolError::AllZero)));
        assert!(matches!(parse_symbol(r#"{"k":1,"blocks":{"-1":[["1+2i"]],"1":[[1]]}}"#), Err(SymbolError::NonReal { .. })));
        assert!(matches!(
            parse_symbol(r#"{"k":1,"blocks":{"-1":[[{"re":1,"im":2}]],"1":[[1]]}}"#),
            Err(SymbolError::NonReal { .. })
        ));
        assert!(matches!(parse_symbol(r#"{"k":2,"blocks":{"-1":[[1]],"1":[[1]]}}"#), Err(SymbolError::Layout(_))));
        assert!(matches!(parse_symbol(r#"{"k":1,"blocks":{"x":[[1]]}}"#), Err(SymbolError::Layout(_))));
        assert!(matches!(parse_symbol(r#"{"k":1,"blocks":{"-1":[["$a"]],"1":[[1]]}}"#), Err(SymbolError::UnboundPlaceholder(_))));
        assert!(matches!(parse_symbol(r#"{"k":1,"blocks":{"-1":[[true]],"1":[[1]]}}"#), Err(SymbolError::Layout(_))));
    }

    #[test]
    fn decimal_and_fraction_entries_are_exact() {
        let s = parse_symbol(r#"{"k":1,"blocks":{"-1":[["1/3"]],"1":[[0.25]]}}"#).unwrap();
        assert_eq!(s.block(-1).unwrap()[0][0], Scalar::ratio(1, 3).unwrap());
        assert_eq!(s.block(1).unwrap()[0][0], Scalar::ratio(1, 4).unwrap());
    }

    #[test]
    fn placeholders_are_substituted() {
        let text = r#"{"k":1,"blocks":{"-1":[["$zeta"]],"1":[[1]]}}"#;
        assert_eq!(placeholders(text).unwrap().into_iter().collect::<Vec<_>>(), vec!["zeta".to_string()]);
        let mut b = HashMap::new();
        b.insert("zeta".to_string(), Scalar::integer(7));
        let s = parse_symbol_with(text, &b).unwrap();
        assert_eq!(s.block(-1).unwrap()[0][0], Scalar::integer(7));
    }

    #[test]
    fn json_round_trip() {
        let s = parse_symbol(B1_JSON).unwrap();
        let again = parse_symbol(&symbol_to_json(&s).to_string()).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn periodic_scalar_case() {
        // b(z) = 3 z^-1 + 1 - 2 z  <->  a_{-1} = 3, a_0 = 1, a_1 = -2
        let seq = vec![vec![Scalar::integer(3), Scalar::integer(1), Scalar::integer(-2)]];
        let s = from_periodic_sequences(&seq, 1, 1).unwrap();
        assert_eq!(s.k(), 1);
        assert_eq!(s.block(-1).unwrap()[0][0], Scalar::integer(3));
        assert_eq!(s.block(0).unwrap()[0][0], Scalar::integer(1));
        assert_eq!(s.block(1).unwrap()[0][0], Scalar::integer(-2));
    }

    #[test]
    fn periodic_sequences_reproduce_b1() {
        // Diagonals -2..=1 of the 2-periodic matrix T(B1), classes min(i,j) mod 2.
        let int = |v: &[i64]| v.iter().map(|&x| Scalar::integer(x)).collect::<Vec<_>>();
        let seqs = vec![int(&[-2, -5, 8, -2]), int(&[1, -4, 5, -6])];
        let s = from_periodic_sequences(&seqs, 2, 1).unwrap();
        assert_eq!(s, parse_symbol(B1_JSON).unwrap());
    }

    #[test]
    fn ragged_sequences_rejected() {
        let seqs = vec![vec![Scalar::integer(1); 3], vec![Scalar::integer(1); 2]];
        assert!(matches!(from_periodic_sequences(&seqs, 1, 1), Err(SymbolError::RaggedSequences(3, 2))));
    }
}
