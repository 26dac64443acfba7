use std::f64::consts::{E, PI};

use super::*;
use crate::decompose::{d_bipolar, d_mostow};
use crate::matcore::{c, diag, diag_real, from_real_rows, identity, r};
use crate::validate::rng::{gaussian, nonsingular, stream, unit_direction, unitary};

/// Dense trapezoid rule for beta on [0, t_max].
fn beta_trapezoid(cm: &ComplexMatrix, t_max: f64, steps: usize) -> f64 {
    let h = t_max / steps as f64;
    (0..=steps)
        .map(|j| {
            let w = if j == 0 || j == steps { 0.5 } else { 1.0 };
            w * norm2(&(cm * r(-(j as f64) * h)).exp()).powi(2)
        })
        .sum::<f64>()
        * h
}

#[test]
fn beta_trivial_and_oracle() {
    let mut g = stream(31, 0);
    let real = nonsingular(&mut g, 3, 20.0).map(|z| r(z.re));
    assert!((beta(&real).unwrap() - 0.5).abs() < 1e-9);
    assert!((beta(&unitary(&mut g, 3)).unwrap() - 0.5).abs() < 1e-9);

    let z = ComplexMatrix::from_row_slice(2, 2, &[r(1.0), c(0.0, 1.0), r(0.0), r(1.0)]);
    let b = beta(&z).unwrap();
    let cm = c_matrix(&z).unwrap();
    let oracle = beta_trapezoid(&cm, 60.0, 120_000);
    assert!((b - oracle).abs() < 1e-7, "{b} vs {oracle}");
}

#[test]
fn beta_and_k_invariances() {
    let mut g = stream(31, 1);
    let z = nonsingular(&mut g, 3, 5.0);
    let u = unitary(&mut g, 3);
    assert!((beta(&(&u * &z)).unwrap() - beta(&z).unwrap()).abs() < 1e-8);
    let k = k_of_z(&z).unwrap();
    assert!((k_of_z(&(&z * r(3.7))).unwrap() - k).abs() < 1e-8 * k);
}

#[test]
fn k_examples() {
    let mut g = stream(31, 2);
    assert!((k_of_z(&unitary(&mut g, 4)).unwrap() - 1.0).abs() < 1e-10);
    assert!((k_of_z(&(identity(3) * r(2.5))).unwrap() - 1.0).abs() < 1e-10);
    let t = 3.0 * PI / 4.0;
    let z = diag_real(&[t.sin().exp(), (t + PI / 2.0).sin().exp()]);
    let s2 = 2f64.sqrt();
    let expected = 0.5 * s2.exp() * (1.0 + (4.0 * s2).exp());
    assert!((k_of_z(&z).unwrap() - expected).abs() < 1e-10 * expected);
}

#[test]
fn c_of_w_examples() {
    assert_eq!(c_of_w(&identity(2)).unwrap(), 1.0);
    let w = diag(&[Complex64::from_polar(1.0, PI / 2.0)]);
    // integral of 1/((1-t)^2 + t^2) over [0, 1]
    assert!((c_of_w(&w).unwrap() - PI / 2.0).abs() < 1e-8);
    assert!(matches!(c_of_w(&diag_real(&[-1.0, 1.0])), Err(Error::SegmentSingular { .. })));
}

#[test]
fn mostow_bounds_calibration() {
    let mut g = stream(31, 3);
    let rep = mostow_bounds(&unitary(&mut g, 3), NormKind::Spectral).unwrap();
    for b in [rep.b_w, rep.b_p1, rep.b_p2] {
        assert!((b - 1.0).abs() < 1e-10, "{rep:?}");
    }
    let rep = mostow_bounds(&diag_real(&[0.5f64.exp(), (-0.5f64).exp()]), NormKind::Frobenius).unwrap();
    assert!((rep.b_p2 - 0.5 * E * (1.0 + E.powi(4))).abs() < 1e-9 * rep.b_p2);
}

#[test]
fn mostow_bounds_dominate_sampled_derivatives() {
    let mut g = stream(31, 4);
    for n in [2, 3] {
        let z = nonsingular(&mut g, n, 5.0);
        let f = mostow(&z).unwrap();
        let rep = mostow_bounds_for(&z, &f, NormKind::Frobenius).unwrap();
        for _ in 0..200 {
            let a = unit_direction(&mut g, n, NormKind::Frobenius);
            let t = d_mostow(&f, &z, &a).unwrap();
            assert!(t.dp2.norm() <= rep.b_p2 + 1e-6);
            assert!(t.dp2.norm() <= rep.b_p2_remark32 + 1e-6);
            assert!(t.dp1.norm() <= rep.b_p1_remark33 + 1e-6);
        }
    }
}

#[test]
fn split_bound_examples() {
    let e = Complex64::from_polar(1.0, 1.2);
    let w = diag(&[e, e]);
    let (seq, b) = unitary_split_bound(&w, DeltaPolicy::Auto).unwrap();
    assert!((seq.delta - MARGIN_DELTA).abs() < 1e-12 && b <= 1.01);
    let (_, b) = unitary_split_bound(&identity(3), DeltaPolicy::Auto).unwrap();
    assert!(b <= 1.01);

    let w = diag(&[Complex64::from_polar(1.0, -0.4), Complex64::from_polar(1.0, 0.4)]);
    let (seq, b) = unitary_split_bound(&w, DeltaPolicy::Auto).unwrap();
    assert!((seq.delta - (0.8 + MARGIN_DELTA)).abs() < 1e-9);
    assert!(b <= analytic_cap(0.8 + MARGIN_DELTA));
    assert!(matches!(unitary_split_bound(&w, DeltaPolicy::Explicit(0.5)), Err(Error::DeltaOutOfRange(_))));
}

#[test]
fn polar_comparison_examples() {
    assert!((polar_comparison_bound(&identity(2)).unwrap() - 0.5).abs() < 1e-10);
    let theta = 1.2f64;
    let e = Complex64::from_polar(1.0, theta);
    let v = polar_comparison_bound(&diag(&[e, e])).unwrap();
    assert!((v - 1.0 / (2.0 * theta.cos())).abs() < 1e-6 && v > 1.0);
    let (_, b) = unitary_split_bound(&diag(&[e, e]), DeltaPolicy::Auto).unwrap();
    assert!(b < v);
    let i = c(0.0, 1.0);
    assert!(matches!(polar_comparison_bound(&diag(&[i])), Err(Error::DivergentIntegral { .. })));
}

#[test]
fn bipolar_bounds_at_identity() {
    let rep = bipolar_bounds(&identity(3), NormKind::Spectral).unwrap();
    assert!((rep.b_s - 1.0).abs() < 1e-10 && (rep.b_k - 1.0).abs() < 1e-10);
    assert!((rep.k - 1.0).abs() < 1e-10);
    assert!(rep.b_l <= 2.03 && rep.b_t <= 2.03 && rep.b_l >= 1.0);
    assert_eq!(rep.b_t_direct, 1.0);
}

#[test]
fn bipolar_hypothesis() {
    // W^T W = diag(-1, 1): -1 in the spectrum
    let z = diag(&[Complex64::from_polar(1.0, PI / 2.0), r(1.0)]);
    assert!(matches!(bipolar_bounds(&z, NormKind::Spectral), Err(Error::HypothesisViolated { .. })));
    let z = from_real_rows(&[&[2.0, 1.0], &[0.0, 1.0]]);
    assert!(bipolar_bounds(&z, NormKind::Spectral).unwrap().hypothesis_distance > 1.0);
}

#[test]
fn bipolar_bounds_dominate_sampled_derivatives() {
    let mut g = stream(31, 5);
    for n in [2, 3] {
        let z = nonsingular(&mut g, n, 10.0);
        let f = bipolar(&z, BranchSpec::Auto).unwrap();
        let rep = bipolar_bounds_for(&z, &f, NormKind::Frobenius).unwrap();
        for _ in 0..100 {
            let a = gaussian(&mut g, n);
            let a = &a / r(a.norm());
            let t = d_bipolar(&f, &z, &a).unwrap();
            assert!(t.ds.norm() <= rep.b_s + 1e-6);
            assert!(t.dk.norm() <= rep.b_k + 1e-6);
            assert!(t.dl.norm() <= rep.b_l + 1e-6, "{} {}", t.dl.norm(), rep.b_l);
            assert!(t.dt.norm() <= rep.b_t + 1e-6, "{} {}", t.dt.norm(), rep.b_t);
        }
    }
}
