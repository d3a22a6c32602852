//! Division-free determinants over commutative rings of polynomials.

use super::bivariate::BiPoly;
use super::coeff::Coeff;

pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl<C: Coeff> Ring for BiPoly<C> {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::from_terms([((0, 0), C::one())])
    }
    fn add(&self, other: &Self) -> Self {
        BiPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        BiPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        BiPoly::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
}

/// Determinant by Laplace expansion with memoized minors over column subsets.
///
/// Uses `O(2^n n)` ring multiplications and no division, so it is exact over
/// any commutative ring. Intended for `n <= 12`.
pub fn det_expansion<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n <= 20, "matrix too large for subset expansion");
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    if n == 0 {
        return R::one();
    }
    let mut minors: Vec<Option<R>> = vec![None; 1 << n];
    minors[0] = Some(R::one());
    for row in 0..n {
        let mut next: Vec<Option<R>> = vec![None; 1 << n];
        for (set, minor) in minors.iter().enumerate() {
            let Some(minor) = minor else { continue };
            if set.count_ones() as usize != row || minor.is_zero() {
                continue;
            }
            for (col, entry) in m[row].iter().enumerate() {
                if set & (1 << col) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (set >> (col + 1)).count_ones();
                let term = entry.mul(minor);
                let target = set | (1 << col);
                let acc = next[target].take().unwrap_or_else(R::zero);
                next[target] = Some(if above % 2 == 0 { acc.add(&term) } else { acc.sub(&term) });
            }
        }
        minors = next;
    }
    minors[(1 << n) - 1].take().unwrap_or_else(R::zero)
}

/// Leibniz permutation-sum determinant. Exponential; kept as an independent check.
pub fn det_permutation_sum<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = R::zero();
    permute(&mut perm, 0, &mut |p| {
        let mut term = R::one();
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]);
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        total = if inversions % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    });
    total
}

fn permute(perm: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        visit(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        permute(perm, start + 1, visit);
        perm.swap(start, i);
    }
}
