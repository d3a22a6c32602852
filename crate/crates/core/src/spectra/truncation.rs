use num_complex::Complex64;

use super::eigen::{eigenvalues_dense, hausdorff, Dense, NoConvergence};
use crate::symbolkit::MatrixSymbol;

/// `T_n(B) = (A_{i-j})_{i,j=1..n}` as a dense `nk x nk` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub n: usize,
    pub k: usize,
    pub matrix: Dense,
    /// Block exponents present in the symbol, needed for diagonal rescaling.
    bands: Vec<i32>,
}

pub fn truncation(symbol: &MatrixSymbol, n: usize) -> Truncation {
    let k = symbol.k();
    let size = n * k;
    let mut matrix = Dense::zeros(size);
    let blocks = symbol.float_blocks();
    for (m, data) in &blocks {
        for bi in 0..n {
            let bj = bi as i64 - *m as i64;
            if bj < 0 || bj >= n as i64 {
                continue;
            }
            let bj = bj as usize;
            for i in 0..k {
                for j in 0..k {
                    matrix.set(bi * k + i, bj * k + j, data[i * k + j]);
                }
            }
        }
    }
    Truncation { n, k, matrix, bands: blocks.iter().map(|(m, _)| *m).collect() }
}

impl Truncation {
    pub fn size(&self) -> usize {
        self.n * self.k
    }

    /// `D T D^{-1}` with `D = diag(rho^{block index})`: block `A_m` becomes `rho^m A_m`.
    pub fn rescaled(&self, rho: f64) -> Dense {
        let mut out = self.matrix.clone();
        let size = self.size();
        for i in 0..size {
            for j in 0..size {
                let v = out.a[i * size + j];
                if v != 0.0 {
                    let m = (i / self.k) as i32 - (j / self.k) as i32;
                    out.a[i * size + j] = v * rho.powi(m);
                }
            }
        }
        out
    }

    pub fn bands(&self) -> &[i32] {
        &self.bands
    }
}

/// Eigenvalues together with the diagonal scaling that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Sorted by (re, im).
    pub values: Vec<Complex64>,
    pub rho: f64,
    /// Hausdorff distance to the spectra computed at neighbouring scalings.
    pub stability: f64,
}

impl Spectrum {
    pub fn max_abs_im(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues of the unscaled matrix (balancing, Hessenberg, shifted QR).
pub fn eigenvalues_plain(t: &Truncation) -> Result<Vec<Complex64>, NoConvergence> {
    eigenvalues_dense(&t.matrix)
}

/// Eigenvalues of `T_n(B)`.
///
/// Banded Toeplitz truncations are very nonnormal, and the computed spectrum
/// depends on the basis. The matrix is similar to `D T D^{-1}` for every
/// `D = diag(rho^i I_k)`; the spectrum is computed on a geometric grid of
/// `rho` in `[0.1, 10]` and the `rho` whose result agrees best with its
/// neighbours is kept, then refined once on a finer grid around it.
pub fn eigenvalues(t: &Truncation) -> Result<Spectrum, NoConvergence> {
    let coarse: Vec<f64> = (0..=16).map(|j| 10f64.powf(-1.0 + j as f64 / 8.0)).collect();
    let (best, _) = most_stable(t, &coarse)?;
    let centre = coarse[best].log10();
    let fine: Vec<f64> = (0..=8).map(|j| 10f64.powf(centre - 0.125 + j as f64 / 32.0)).collect();
    let (best_fine, spectra) = most_stable(t, &fine)?;
    let (values, stability) = spectra.into_iter().nth(best_fine).unwrap();
    Ok(Spectrum { values: values.unwrap(), rho: fine[best_fine], stability })
}

type Scan = Vec<(Option<Vec<Complex64>>, f64)>;

fn most_stable(t: &Truncation, rhos: &[f64]) -> Result<(usize, Scan), NoConvergence> {
    let spectra: Vec<Option<Vec<Complex64>>> = rhos.iter().map(|&rho| eigenvalues_dense(&t.rescaled(rho)).ok()).collect();
    let dist = |a: usize, b: usize| match (&spectra[a], &spectra[b]) {
        (Some(x), Some(y)) => hausdorff(x, y),
        _ => f64::INFINITY,
    };
    let mut scores = Vec::with_capacity(rhos.len());
    for j in 0..rhos.len() {
        let mut s: f64 = 0.0;
        if spectra[j].is_none() {
            s = f64::INFINITY;
        }
        if j > 0 {
            s = s.max(dist(j, j - 1));
        }
        if j + 1 < rhos.len() {
            s = s.max(dist(j, j + 1));
        }
        scores.push(s);
    }
    let best = (0..rhos.len())
        .filter(|&j| spectra[j].is_some())
        .min_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    match best {
        Some(b) => Ok((b, spectra.into_iter().zip(scores).collect())),
        None => {
            let plain = eigenvalues_dense(&t.matrix);
            Err(plain.err().unwrap_or(NoConvergence { found: Vec::new() }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b1() -> MatrixSymbol {
        MatrixSymbol::from_integer_blocks(
            2,
            &[(-1, vec![vec![-2, 0], vec![-4, 1]]), (0, vec![vec![8, -5], vec![-2, 5]]), (1, vec![vec![0, -6], vec![0, 0]])],
        )
        .unwrap()
    }

    #[test]
    fn first_truncation_is_a0() {
        let t = truncation(&b1(), 1);
        assert_eq!(t.matrix.a, vec![8.0, -5.0, -2.0, 5.0]);
    }

    #[test]
    fn scalar_tridiagonal() {
        let s = MatrixSymbol::from_integer_blocks(1, &[(-1, vec![vec![1]]), (1, vec![vec![1]])]).unwrap();
        let t = truncation(&s, 2);
        assert_eq!(t.matrix.a, vec![0.0, 1.0, 1.0, 0.0]);
        let sp = eigenvalues(&t).unwrap();
        assert!((sp.values[0].re + 1.0).abs() < 1e-12 && (sp.values[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaling_preserves_small_spectra() {
        let t = truncation(&b1(), 4);
        let a = eigenvalues_dense(&t.matrix).unwrap();
        let b = eigenvalues_dense(&t.rescaled(1.7)).unwrap();
        assert!(hausdorff(&a, &b) < 1e-9);
    }
}
