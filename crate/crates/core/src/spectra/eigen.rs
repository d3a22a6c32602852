//! Dense nonsymmetric eigenvalues: balancing, Householder Hessenberg
//! reduction and Francis double-shift QR.

use num_complex::Complex64;

const RADIX: f64 = 2.0;
const MAX_ITS_PER_EIGENVALUE: usize = 60;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Dense {
        Dense { n, a: vec![0.0; n * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }
}

/// Non-convergence of the QR iteration; `found` holds the eigenvalues deflated so far.
#[derive(Clone, Debug, PartialEq)]
pub struct NoConvergence {
    pub found: Vec<Complex64>,
}

/// Parlett-Reinsch balancing by powers of two (similarity, exact in floating point).
pub fn balance(m: &mut Dense) {
    let n = m.n;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m.get(j, i).abs();
                    r += m.get(i, j).abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    m.a[i * n + j] *= g;
                }
                for j in 0..n {
                    m.a[j * n + i] *= f;
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form.
pub fn hessenberg(m: &mut Dense) {
    let n = m.n;
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let mut norm = 0.0;
        for i in k + 1..n {
            norm += m.get(i, k) * m.get(i, k);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = m.get(k + 1, k);
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = m.get(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v[k + 1..n].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // Left: rows k+1.., columns k..
        for j in k..n {
            let mut s = 0.0;
            for i in k + 1..n {
                s += v[i] * m.a[i * n + j];
            }
            s *= beta;
            for i in k + 1..n {
                m.a[i * n + j] -= s * v[i];
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut m.a[i * n..(i + 1) * n];
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            s *= beta;
            for j in k + 1..n {
                row[j] -= s * v[j];
            }
        }
        m.set(k + 1, k, alpha);
        for i in k + 2..n {
            m.set(i, k, 0.0);
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed in the process).
pub fn hqr(h: &mut Dense) -> Result<Vec<Complex64>, NoConvergence> {
    let n = h.n;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut known = vec![false; n];
    if n == 0 {
        return Ok(Vec::new());
    }
    let nn_stride = n;
    macro_rules! a {
        ($i:expr, $j:expr) => {
            h.a[($i) * nn_stride + ($j)]
        };
    }
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a!(i, j).abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a!(l - 1, l - 1).abs() + a!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a!(l, l - 1).abs() <= f64::EPSILON * s {
                    a!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a!(nu, nu);
            if l == nu {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                known[nu] = true;
                nn -= 1;
                break;
            }
            let mut y = a!(nu - 1, nu - 1);
            let mut w = a!(nu, nu - 1) * a!(nu - 1, nu);
            if l == nu - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                known[nu - 1] = true;
                known[nu] = true;
                nn -= 2;
                break;
            }
            if its == MAX_ITS_PER_EIGENVALUE {
                let found = (0..n).filter(|&i| known[i]).map(|i| Complex64::new(wr[i], wi[i])).collect();
                return Err(NoConvergence { found });
            }
            if its > 0 && its % 10 == 0 {
                t += x;
                for i in 0..=nu {
                    a!(i, i) -= x;
                }
                let s = a!(nu, nu - 1).abs() + a!(nu - 1, nu - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a!(m, m);
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a!(m + 1, m) + a!(m, m + 1);
                q = a!(m + 1, m + 1) - z - rr - ss;
                r = a!(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a!(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (a!(m - 1, m - 1).abs() + z.abs() + a!(m + 1, m + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a!(i, i - 2) = 0.0;
                if i != m + 2 {
                    a!(i, i - 3) = 0.0;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a!(k, k - 1);
                    q = a!(k + 1, k - 1);
                    r = 0.0;
                    if k + 1 != nu {
                        r = a!(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a!(k, k - 1) = -a!(k, k - 1);
                        }
                    } else {
                        a!(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a!(k, j) + q * a!(k + 1, j);
                        if k + 1 != nu {
                            pp += r * a!(k + 2, j);
                            a!(k + 2, j) -= pp * z;
                        }
                        a!(k + 1, j) -= pp * y;
                        a!(k, j) -= pp * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a!(i, k) + y * a!(i, k + 1);
                        if k + 1 != nu {
                            pp += z * a!(i, k + 2);
                            a!(i, k + 2) -= pp * r;
                        }
                        a!(i, k + 1) -= pp * q;
                        a!(i, k) -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(r, i)| Complex64::new(r, i)).collect())
}

/// Balance, reduce and iterate. Output sorted by (re, im).
pub fn eigenvalues_dense(m: &Dense) -> Result<Vec<Complex64>, NoConvergence> {
    let mut work = m.clone();
    balance(&mut work);
    hessenberg(&mut work);
    let mut ev = hqr(&mut work)?;
    sort_complex(&mut ev);
    Ok(ev)
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { f64::INFINITY };
    }
    let directed = |u: &[Complex64], v: &[Complex64]| {
        u.iter()
            .map(|x| v.iter().map(|y| (x - y).norm_sqr()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
            .sqrt()
    };
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from_rows(rows: &[&[f64]]) -> Dense {
        let n = rows.len();
        Dense { n, a: rows.iter().flat_map(|r| r.iter().copied()).collect() }
    }

    #[test]
    fn swap_matrix() {
        let ev = eigenvalues_dense(&from_rows(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((ev[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn two_by_two_block_a0() {
        let ev = eigenvalues_dense(&from_rows(&[&[8.0, -5.0], &[-2.0, 5.0]])).unwrap();
        assert!((ev[0].re - 3.0).abs() < 1e-13 && (ev[1].re - 10.0).abs() < 1e-13);
    }

    #[test]
    fn rotation_has_complex_pair() {
        let ev = eigenvalues_dense(&from_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 2.0]])).unwrap();
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((ev[2] - Complex64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn matches_nalgebra_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 10, 40] {
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mine = eigenvalues_dense(&Dense { n, a: data.clone() }).unwrap();
            let oracle: Vec<Complex64> = DMatrix::from_row_slice(n, n, &data).complex_eigenvalues().iter().copied().collect();
            assert!(hausdorff(&mine, &oracle) < 1e-10, "n={n}");
            let trace: f64 = (0..n).map(|i| data[i * n + i]).sum();
            let sum: Complex64 = mine.iter().sum();
            assert!((sum.re - trace).abs() < 1e-10 && sum.im.abs() < 1e-10);
        }
    }

    #[test]
    fn triangular_and_zero() {
        let ev = eigenvalues_dense(&from_rows(&[&[1.0, 5.0, 7.0], &[0.0, 2.0, 3.0], &[0.0, 0.0, 3.0]])).unwrap();
        for (e, want) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert!((e.re - want).abs() < 1e-14);
        }
        let ev = eigenvalues_dense(&Dense::zeros(4)).unwrap();
        assert!(ev.iter().all(|e| e.norm() == 0.0));
    }

    #[test]
    fn hausdorff_basic() {
        let a = [Complex64::new(0.0, 0.0)];
        let b = [Complex64::new(3.0, 4.0), Complex64::new(0.0, 0.0)];
        assert_eq!(hausdorff(&a, &b), 5.0);
    }
}
