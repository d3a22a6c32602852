//! Newton polygons of random integer symbols against a brute-force expansion.
//!
//! A trial is *generic* when, for both boundary blocks `A_{-r}` and `A_s`,
//! every sum of principal minors `E_1 .. E_k` is nonzero. These are the
//! extreme coefficients of `f` along the lower edges of the triangle, so on a
//! generic trial `p = k r`, `q = k s`, the hull is the triangle and the order
//! and degree formulas hold. Non-generic trials are legal and reported apart.

use bbtspec::symbolkit::det::det_permutation_sum;
use bbtspec::symbolkit::{char_function, newton_polygon, BiPoly, MatrixSymbol, Scalar};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::summarize_symbol;
use crate::error::CliError;

pub const ENTRY_RANGE: i64 = 9;

#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub trial: usize,
    pub k: usize,
    pub r: i32,
    pub s: i32,
    pub p: i32,
    pub q: i32,
    pub generic: bool,
    /// Characteristic function equals the permutation-sum expansion exactly.
    pub oracle_match: bool,
    /// Hull is the triangle `(-p,0), (q,0), (0,k)` for the `p, q` of `f`.
    pub triangle: bool,
    /// Order/degree formulas hold for every coefficient `g_l`.
    pub ord_deg: bool,
    /// `p = k r` and `q = k s`.
    pub full_width: bool,
    pub newton_polygon: Vec<(i64, i64)>,
}

impl TrialResult {
    /// What a generic trial must satisfy.
    pub fn conforming(&self) -> bool {
        self.triangle && self.ord_deg && self.full_width
    }

    pub fn passed(&self) -> bool {
        self.oracle_match && (!self.generic || self.conforming())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonCheckSummary {
    pub trials: usize,
    pub oracle_matches: usize,
    pub generic: usize,
    pub generic_conforming: usize,
    pub non_generic: usize,
    /// Non-generic trials whose hull is still the triangle.
    pub non_generic_triangle: usize,
    pub failed: Vec<usize>,
    pub passed: bool,
}

pub fn summarize(results: &[TrialResult]) -> NewtonCheckSummary {
    let generic: Vec<&TrialResult> = results.iter().filter(|r| r.generic).collect();
    let non_generic: Vec<&TrialResult> = results.iter().filter(|r| !r.generic).collect();
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed()).map(|r| r.trial).collect();
    NewtonCheckSummary {
        trials: results.len(),
        oracle_matches: results.iter().filter(|r| r.oracle_match).count(),
        generic: generic.len(),
        generic_conforming: generic.iter().filter(|r| r.conforming()).count(),
        non_generic: non_generic.len(),
        non_generic_triangle: non_generic.iter().filter(|r| r.triangle).count(),
        passed: failed.is_empty(),
        failed,
    }
}

/// Random `k x k` integer symbol with blocks at `z^-1, z^0, z^1`, entries
/// uniform in `[-9, 9]`, redrawn while a boundary block has a zero row or column.
pub fn random_symbol(k: usize, rng: &mut ChaCha8Rng) -> MatrixSymbol {
    loop {
        let mut draw = || -> Vec<Vec<i64>> {
            (0..k).map(|_| (0..k).map(|_| rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE)).collect()).collect()
        };
        let blocks = vec![(-1, draw()), (0, draw()), (1, draw())];
        let degenerate = |b: &Vec<Vec<i64>>| {
            (0..k).any(|i| b[i].iter().all(|&v| v == 0)) || (0..k).any(|j| b.iter().all(|row| row[j] == 0))
        };
        if degenerate(&blocks[0].1) || degenerate(&blocks[2].1) {
            continue;
        }
        return MatrixSymbol::from_integer_blocks(k, &blocks).expect("nonzero boundary blocks");
    }
}

fn exact(v: &Scalar) -> Result<BigRational, CliError> {
    v.as_exact().cloned().ok_or_else(|| CliError::Input("newton-check needs exact symbol entries".into()))
}

/// `det(B(z) - lambda I)` by the Leibniz sum over entries built term by term.
pub fn brute_force_char(symbol: &MatrixSymbol) -> Result<BiPoly<BigRational>, CliError> {
    let k = symbol.k();
    let mut entries: Vec<Vec<Vec<((i32, u32), BigRational)>>> = vec![vec![Vec::new(); k]; k];
    for (&m, block) in symbol.blocks() {
        for i in 0..k {
            for j in 0..k {
                entries[i][j].push(((m, 0), exact(&block[i][j])?));
            }
        }
    }
    let one = BigRational::from_integer(1.into());
    let matrix: Vec<Vec<BiPoly<BigRational>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut t = entries[i][j].clone();
                    if i == j {
                        t.push(((0, 1), -one.clone()));
                    }
                    BiPoly::from_terms(t)
                })
                .collect()
        })
        .collect();
    Ok(det_permutation_sum(&matrix))
}

/// Whether all of `E_1(A) .. E_k(A)` are nonzero, read off `det(A - mu I)`.
fn minor_sums_nonzero(block: &[Vec<Scalar>]) -> Result<bool, CliError> {
    let k = block.len();
    let one = BigRational::from_integer(1.into());
    let mut matrix = Vec::with_capacity(k);
    for (i, row) in block.iter().enumerate() {
        let mut out = Vec::with_capacity(k);
        for (j, v) in row.iter().enumerate() {
            let mut t = vec![((0, 0), exact(v)?)];
            if i == j {
                t.push(((0, 1), -one.clone()));
            }
            out.push(BiPoly::from_terms(t));
        }
        matrix.push(out);
    }
    let cp = det_permutation_sum(&matrix);
    Ok((0..k as u32).all(|l| cp.coeff(0, l).is_some()))
}

pub fn check_symbol(trial: usize, symbol: &MatrixSymbol) -> Result<TrialResult, CliError> {
    let k = symbol.k();
    let (r, s) = (symbol.r(), symbol.s());
    let f = char_function(symbol).map_err(|e| CliError::Input(format!("characteristic function: {e}")))?;
    let oracle = brute_force_char(symbol)?;
    let oracle_match = f.exact() == Some(&oracle);
    let boundary = |m: i32| symbol.block(m).map(|b| minor_sums_nonzero(b)).transpose();
    let generic = boundary(-r)?.unwrap_or(false) && boundary(s)?.unwrap_or(false);
    let (_, chr) = summarize_symbol(symbol, &f);
    let kk = k as i32;
    Ok(TrialResult {
        trial,
        k,
        r,
        s,
        p: f.p(),
        q: f.q(),
        generic,
        oracle_match,
        triangle: chr.triangle,
        ord_deg: chr.generic,
        full_width: f.p() == kk * r && f.q() == kk * s,
        newton_polygon: newton_polygon(&f).vertices,
    })
}

/// Trial `i` uses block size `block_sizes[i % len]` and its own stream seeded by `seed + i`.
pub fn run_trials(trials: usize, block_sizes: &[usize], seed: u64) -> Result<Vec<TrialResult>, CliError> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let k = block_sizes[i % block_sizes.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            check_symbol(i, &random_symbol(k, &mut rng))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_symbols_are_deterministic() {
        let a = random_symbol(3, &mut ChaCha8Rng::seed_from_u64(7));
        let b = random_symbol(3, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        assert_eq!((a.r(), a.s()), (1, 1));
    }

    #[test]
    fn scalar_trials_are_always_generic_triangles() {
        for r in run_trials(20, &[1], 3).unwrap() {
            assert!(r.generic && r.oracle_match && r.triangle, "{r:?}");
            assert_eq!(r.newton_polygon.len(), 3);
        }
    }

    #[test]
    fn zero_trace_boundary_is_not_generic() {
        // A_{-1} = [[1, 0], [0, -1]] has trace 0, so z^{-1} lambda is missing from f.
        let s = MatrixSymbol::from_integer_blocks(
            2,
            &[(-1, vec![vec![1, 0], vec![0, -1]]), (0, vec![vec![0, 1], vec![1, 0]]), (1, vec![vec![2, 1], vec![1, 3]])],
        )
        .unwrap();
        let r = check_symbol(0, &s).unwrap();
        assert!(!r.generic);
        assert!(r.oracle_match && r.triangle && !r.ord_deg);
        assert!(r.passed());
    }
}
