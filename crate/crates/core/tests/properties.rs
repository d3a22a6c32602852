mod common;

use bbtspec::gammacurve::{gamma_member, node_field, p_value, sign_field, trace_contours, default_gamma_box};
use bbtspec::grid::Rect;
use bbtspec::rootsolve::{branches_lambda, matching_distance, sorted_roots_z};
use bbtspec::spectra::{eigenvalues_plain, lambda0_gap, truncation};
use bbtspec::symbolkit::{char_function, CharFunction, MatrixSymbol};
use common::{all_stored, integer_symbol};
use num_complex::Complex64;
use proptest::prelude::*;

fn z_point() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, 0.0f64..std::f64::consts::TAU).prop_map(|(lr, th)| Complex64::from_polar(lr.exp(), th))
}

fn lambda_point() -> impl Strategy<Value = Complex64> {
    (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| Complex64::new(x, y))
}

/// Coefficient of `z^m` in `f(z, lambda)`, summed straight from the term list.
fn z_coefficient(f: &CharFunction, m: i32, lambda: Complex64) -> Complex64 {
    f.float().terms().filter(|((zm, _), _)| *zm == m).map(|((_, l), c)| *c * lambda.powu(*l)).sum()
}

fn check_vieta_lambda(symbol: &MatrixSymbol, z: Complex64) -> Result<(), TestCaseError> {
    let f = char_function(symbol).unwrap();
    let b = branches_lambda(&f, z).unwrap();
    prop_assert_eq!(b.roots.len(), symbol.k());
    let m = symbol.eval(z);
    let size: f64 = b.roots.iter().map(|l| l.norm().max(1.0)).product();
    let sum: Complex64 = b.roots.iter().sum();
    let prod: Complex64 = b.roots.iter().product();
    prop_assert!((sum - m.trace()).norm() <= 1e-8 * size, "trace {} vs {}", sum, m.trace());
    prop_assert!((prod - m.determinant()).norm() <= 1e-8 * size, "det {} vs {}", prod, m.determinant());
    Ok(())
}

fn check_vieta_z(f: &CharFunction, lambda: Complex64) -> Result<(), TestCaseError> {
    let (p, q) = (f.p(), f.q());
    let low = z_coefficient(f, -p, lambda);
    let high = z_coefficient(f, q, lambda);
    let next = z_coefficient(f, q - 1, lambda);
    if low.norm() < 1e-6 * f.scale() || high.norm() < 1e-6 * f.scale() {
        return Ok(());
    }
    let r = sorted_roots_z(f, lambda).unwrap();
    let n = (p + q) as usize;
    prop_assert_eq!(r.roots.len(), n);
    let size: f64 = r.roots.iter().map(|z| z.norm().max(1.0)).product();
    let sum: Complex64 = r.roots.iter().sum();
    let prod: Complex64 = r.roots.iter().product();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    prop_assert!((sum + next / high).norm() <= 1e-7 * size, "sum {} vs {}", sum, -next / high);
    let expected = low / high * sign;
    prop_assert!((prod - expected).norm() <= 1e-7 * size.max(expected.norm()), "prod {} vs {}", prod, expected);
    Ok(())
}

fn check_conjugation(f: &CharFunction, z: Complex64, lambda: Complex64) -> Result<(), TestCaseError> {
    let a = f.eval(z, lambda);
    let b = f.eval(z.conj(), lambda.conj());
    prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(f.scale()));

    if let (Ok(g1), Ok(g2)) = (lambda0_gap(f, lambda), lambda0_gap(f, lambda.conj())) {
        prop_assert!((g1 - g2).abs() <= 1e-8 * (1.0 + g1), "gap {} vs {}", g1, g2);
    }

    if let (Some(p1), Some(p2)) = (p_value(f, z), p_value(f, z.conj())) {
        let scale: f64 = branches_lambda(f, z).unwrap().roots.iter().map(|l| l.norm().max(1.0)).product();
        let sign = if f.k().is_multiple_of(2) { 1.0 } else { -1.0 };
        prop_assert!((p2 - sign * p1).abs() <= 1e-8 * scale, "P {} vs {}", p1, p2);
        prop_assert_eq!(gamma_member(f, z, 1e-9).unwrap(), gamma_member(f, z.conj(), 1e-9).unwrap());
    }
    Ok(())
}

fn check_two_views(f: &CharFunction, z: Complex64, lambda: Complex64) -> Result<(), TestCaseError> {
    let direct = f.eval(z, lambda);
    let by_lambda: Complex64 = (0..=f.k() as u32).map(|l| f.g(l).eval(z) * lambda.powu(l)).sum();
    let by_z: Complex64 = (-f.p()..=f.q())
        .map(|m| {
            let c: Complex64 = f.f_m(m).iter().enumerate().map(|(l, c)| *c * lambda.powu(l as u32)).sum();
            c * z.powi(m)
        })
        .sum();
    let scale = f.scale() * (1.0 + lambda.norm()).powi(f.k() as i32) * z.norm().max(1.0 / z.norm()).powi(f.p().max(f.q()));
    prop_assert!((direct - by_lambda).norm() <= 1e-12 * scale, "{} vs {}", direct, by_lambda);
    prop_assert!((direct - by_z).norm() <= 1e-12 * scale, "{} vs {}", direct, by_z);
    Ok(())
}

fn check_nesting(symbol: &MatrixSymbol, n: usize) -> Result<(), TestCaseError> {
    let k = symbol.k();
    let small = truncation(symbol, n);
    let big = truncation(symbol, n + 1);
    for i in 0..n * k {
        for j in 0..n * k {
            prop_assert_eq!(small.matrix.get(i, j), big.matrix.get(i, j));
        }
    }
    for bi in 0..=n {
        for bj in 0..=n {
            let m = bi as i32 - bj as i32;
            for i in 0..k {
                for j in 0..k {
                    let want = symbol.block(m).map_or(0.0, |b| b[i][j].to_f64());
                    prop_assert_eq!(big.matrix.get(bi * k + i, bj * k + j), want);
                }
            }
        }
    }
    Ok(())
}

fn check_eigen_conjugation(symbol: &MatrixSymbol, n: usize) -> Result<(), TestCaseError> {
    let ev = eigenvalues_plain(&truncation(symbol, n)).unwrap();
    let conj: Vec<Complex64> = ev.iter().map(|z| z.conj()).collect();
    let size = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    prop_assert!(matching_distance(&ev, &conj) <= 1e-9 * size);
    Ok(())
}

fn check_no_terminating_arcs(f: &CharFunction) -> Result<(), TestCaseError> {
    let Ok(bbox) = default_gamma_box(f, &[]) else { return Ok(()) };
    let field = sign_field(f, bbox, 64);
    let c = trace_contours(&field.net, |_, _| None);
    prop_assert_eq!(c.interior_endpoints, 0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_branches_satisfy_vieta(symbol in integer_symbol(3), z in z_point()) {
        check_vieta_lambda(&symbol, z)?;
    }

    #[test]
    fn z_roots_satisfy_vieta(symbol in integer_symbol(3), lambda in lambda_point()) {
        check_vieta_z(&char_function(&symbol).unwrap(), lambda)?;
    }

    #[test]
    fn conjugation_symmetries(symbol in integer_symbol(3), z in z_point(), lambda in lambda_point()) {
        check_conjugation(&char_function(&symbol).unwrap(), z, lambda)?;
    }

    #[test]
    fn coefficient_views_agree(symbol in integer_symbol(3), z in z_point(), lambda in lambda_point()) {
        check_two_views(&char_function(&symbol).unwrap(), z, lambda)?;
    }

    #[test]
    fn truncations_are_nested(symbol in integer_symbol(3), n in 1usize..8) {
        check_nesting(&symbol, n)?;
    }

    #[test]
    fn truncation_spectra_are_conjugation_closed(symbol in integer_symbol(3), n in 1usize..12) {
        check_eigen_conjugation(&symbol, n)?;
    }

    #[test]
    fn scalar_net_membership_is_im_b(symbol in integer_symbol(1), z in z_point()) {
        let f = char_function(&symbol).unwrap();
        let b = symbol.eval(z)[(0, 0)];
        let tol = 1e-6;
        prop_assume!((b.im.abs() - tol).abs() > 1e-9 * b.norm().max(1.0));
        prop_assert_eq!(gamma_member(&f, z, tol).unwrap(), b.im.abs() <= tol);
    }

    /// Sums of Gaussian bumps have generic level sets, which must not stop
    /// inside the box.
    #[test]
    fn level_sets_do_not_end_inside(
        bumps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.1f64..0.6, -1.0f64..1.0), 1..5),
        level in -0.3f64..0.3,
    ) {
        let bbox = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let field = node_field(bbox, 64, 0.0, |z| {
            let v: f64 = bumps.iter().map(|(cx, cy, w, a)| a * (-((z.re - cx).powi(2) + (z.im - cy).powi(2)) / (w * w)).exp()).sum();
            Some(v - level)
        });
        let c = trace_contours(&field, |_, _| None);
        prop_assert_eq!(c.interior_endpoints, 0);
        let cell = field.spacing();
        for comp in c.components.iter().filter(|c| !c.closed) {
            for &(x, y) in [comp.points[0], *comp.points.last().unwrap()].iter() {
                let edge = (1.0 - x.abs()).min(1.0 - y.abs());
                prop_assert!(edge <= cell, "open arc ends at ({}, {})", x, y);
            }
        }
    }

    #[test]
    fn net_traces_do_not_end_inside(symbol in integer_symbol(3)) {
        check_no_terminating_arcs(&char_function(&symbol).unwrap())?;
    }
}

#[test]
fn stored_examples_satisfy_the_properties() {
    let zs = [Complex64::new(0.7, 0.4), Complex64::new(-1.3, 0.9), Complex64::new(0.05, -2.2)];
    let lambdas = [Complex64::new(3.0, 1.0), Complex64::new(-7.5, 0.25), Complex64::new(12.0, -6.0)];
    for (name, symbol) in all_stored() {
        let f = char_function(&symbol).unwrap();
        for (&z, &lambda) in zs.iter().zip(&lambdas) {
            let run = || -> Result<(), TestCaseError> {
                check_vieta_lambda(&symbol, z)?;
                check_vieta_z(&f, lambda)?;
                check_conjugation(&f, z, lambda)?;
                check_two_views(&f, z, lambda)?;
                Ok(())
            };
            run().unwrap_or_else(|e| panic!("{name} at z={z}, lambda={lambda}: {e}"));
        }
        check_nesting(&symbol, 5).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_eigen_conjugation(&symbol, 20).unwrap_or_else(|e| panic!("{name}: {e}"));
        check_no_terminating_arcs(&f).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
