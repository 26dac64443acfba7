use std::f64::consts::PI;

use num_complex::Complex64;

use super::*;
use crate::matcore::{c, classify, diag, diag_real, from_real_rows, identity, skew_part};
use crate::validate::rng::{gaussian, nonsingular, orthogonal, stream, unitary};

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn mostow_collapses_on_special_inputs() {
    let mut g = stream(21, 0);
    let u = unitary(&mut g, 3);
    let f = mostow(&u).unwrap();
    assert!(close(&f.w, &u, 1e-12) && f.k.norm() < 1e-12 && f.s.norm() < 1e-12);

    let o = orthogonal(&mut g, 3);
    let spd = &o * diag_real(&[0.5, 2.0, 3.0]) * o.transpose();
    let f = mostow(&spd).unwrap();
    assert!(close(&f.w, &identity(3), 1e-12) && f.k.norm() < 1e-12);
    assert!(close(&mexp(&f.s), &spd, 1e-12));

    let k0 = from_real_rows(&[&[0.0, 0.3], &[-0.3, 0.0]]);
    let f = mostow(&mexp(&(&k0 * I))).unwrap();
    assert!(close(&f.w, &identity(2), 1e-12) && f.s.norm() < 1e-12);
    assert!(close(&f.k, &k0, 1e-12));
}

#[test]
fn mostow_random_invariants() {
    let mut g = stream(21, 1);
    for n in [1, 2, 5, 8] {
        let z = nonsingular(&mut g, n, 1e4);
        let f = mostow(&z).unwrap();
        assert!(relative_residual(&z, &f.reconstruct()) < 1e-9);
        let w = classify(&f.w).unwrap();
        let p1 = classify(&f.p1).unwrap();
        let p2 = classify(&f.p2).unwrap();
        assert!(w.residuals.unitary < 1e-9);
        assert!(p1.residuals.circular < 1e-9 && p1.is_positive_definite);
        assert!(p2.is_real && p2.is_positive_definite);
        assert!(classify(&f.k).unwrap().residuals.skew_symmetric < 1e-12);
        assert!(close(&mexp(&(&f.k * I)), &f.p1, 1e-9));
        // uniqueness: factor the reconstruction again
        let again = mostow(&f.reconstruct()).unwrap();
        assert!(close(&again.w, &f.w, 1e-9) && close(&again.p2, &f.p2, 1e-9));
    }
}

#[test]
fn mostow_rejects_singular() {
    let z = from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
    assert!(matches!(mostow(&z), Err(Error::SingularMatrix { .. })));
}

#[test]
fn split_examples() {
    let (s, co) = 0.7f64.sin_cos();
    let rot = from_real_rows(&[&[co, s], &[-s, co]]);
    let sp = unitary_split(&rot, Branch::Principal).unwrap();
    assert!(close(&sp.w1, &rot, 1e-14) && close(&sp.w2, &identity(2), 1e-14) && sp.t.norm() < 1e-14);

    let e = Complex64::from_polar(1.0, 1.2);
    let w = diag(&[e, e]);
    let sp = unitary_split(&w, Branch::Principal).unwrap();
    assert!(close(&sp.w1, &identity(2), 1e-14) && close(&sp.w2, &w, 1e-14));

    let m = diag_real(&[-1.0, 1.0]);
    assert!(matches!(unitary_split(&m, Branch::Principal), Err(Error::EigenvalueOnCut { .. })));
    let sp = unitary_split_spec(&m, BranchSpec::Auto).unwrap();
    assert_eq!(sp.branches.t, Branch::Angle(-PI / 2.0));
    assert!(close(&sp.w1, &m, 1e-14) && close(&sp.w2, &identity(2), 1e-14));
    assert!((sp.l[(0, 0)] - c(0.0, PI)).norm() < 1e-14);
}

#[test]
fn branch_consistency_of_factors() {
    let mut g = stream(21, 2);
    // det W1 = -1 puts an eigenvalue of W1 on the principal cut; redraw
    let (w, p) = loop {
        let w = unitary(&mut g, 4);
        if let Ok(p) = unitary_split(&w, Branch::Principal) {
            break (w, p);
        }
    };
    let wtw_args: Vec<f64> = crate::matcore::eig(&(w.transpose() * &w)).unwrap().values.iter().map(|z| z.arg()).collect();
    let w1_args: Vec<f64> = crate::matcore::eig(&p.w1).unwrap().values.iter().map(|z| z.arg()).collect();
    // any alpha in (-pi, 0) with no argument of W^T W below it keeps W2
    let lowest = wtw_args.iter().chain(w1_args.iter()).copied().fold(f64::INFINITY, f64::min);
    if lowest > -PI + 0.2 {
        let alpha = -PI + 0.5 * (lowest + PI);
        let q = unitary_split(&w, Branch::Angle(alpha)).unwrap();
        assert!(close(&q.w1, &p.w1, 1e-10) && close(&q.w2, &p.w2, 1e-10));
    }
}

#[test]
fn bipolar_examples_and_random() {
    let f = bipolar(&identity(3), BranchSpec::Auto).unwrap();
    assert!(f.l.norm() + f.t.norm() + f.k.norm() + f.s.norm() < 1e-14);
    let f = bipolar(&diag_real(&[0.5f64.exp(), (-0.2f64).exp()]), BranchSpec::Auto).unwrap();
    assert!(close(&f.s, &diag_real(&[0.5, -0.2]), 1e-13));
    assert!(f.l.norm() + f.t.norm() + f.k.norm() < 1e-13);

    let mut g = stream(21, 3);
    for i in 0..20 {
        let n = 2 + i % 5;
        let z = nonsingular(&mut g, n, 1e3);
        let f = bipolar(&z, BranchSpec::Auto).unwrap();
        assert!(relative_residual(&z, &f.reconstruct()) < 1e-9, "n={n}");
        assert!(classify(&f.t).unwrap().is_real && classify(&f.t).unwrap().is_symmetric);
        if f.branches.l == Branch::Principal {
            let cl = classify(&f.l).unwrap();
            assert!(cl.is_real && cl.residuals.skew_symmetric < 1e-9);
        }
    }
}

fn fd<F: Fn(&ComplexMatrix) -> ComplexMatrix>(f: F, z: &ComplexMatrix, a: &ComplexMatrix, h: f64) -> ComplexMatrix {
    (f(&(z + a * r(h))) - f(&(z - a * r(h)))) / r(2.0 * h)
}

#[test]
fn d_mostow_identity_cases() {
    let mut g = stream(21, 4);
    let a = skew_part(&gaussian(&mut g, 3));
    let f = mostow(&identity(3)).unwrap();
    let t = d_mostow(&f, &identity(3), &a).unwrap();
    assert!(close(&t.dw, &a, 1e-12) && t.dp1.norm() < 1e-12 && t.dp2.norm() < 1e-12);
    let ah = herm_part(&gaussian(&mut g, 3));
    let t = d_mostow(&f, &identity(3), &ah).unwrap();
    assert!(close(&t.dp2, &real_part(&ah), 1e-12));
    assert!(close(&t.dp1, &(crate::matcore::imag_part(&ah) * I), 1e-12));
    assert!(t.dw.norm() < 1e-12);
}

#[test]
fn d_mostow_matches_finite_differences() {
    let mut g = stream(21, 5);
    for n in 2..=4 {
        let z = nonsingular(&mut g, n, 10.0);
        let a = gaussian(&mut g, n);
        let f = mostow(&z).unwrap();
        let t = d_mostow(&f, &z, &a).unwrap();
        let h = 1e-5;
        let rel = |fdv: ComplexMatrix, an: &ComplexMatrix| (fdv - an).norm() / an.norm().max(1e-30);
        assert!(rel(fd(|x| mostow(x).unwrap().w, &z, &a, h), &t.dw) < 1e-5);
        assert!(rel(fd(|x| mostow(x).unwrap().p1, &z, &a, h), &t.dp1) < 1e-5);
        assert!(rel(fd(|x| mostow(x).unwrap().p2, &z, &a, h), &t.dp2) < 1e-5);
        assert!(close(&t.reassemble(&f), &a, 1e-9));
        let (dk, ds) = t.exponents(&f).unwrap();
        assert!(rel(fd(|x| mostow(x).unwrap().k, &z, &a, h), &dk) < 1e-5);
        assert!(rel(fd(|x| mostow(x).unwrap().s, &z, &a, h), &ds) < 1e-5);
    }
}

#[test]
fn d_unitary_split_identity_cases() {
    let rr = from_real_rows(&[&[0.0, 0.4], &[-0.4, 0.0]]);
    let sp = unitary_split(&identity(2), Branch::Principal).unwrap();
    let t = d_unitary_split(&sp, &rr).unwrap();
    assert!(close(&t.x, &rr, 1e-14) && t.y.norm() < 1e-14);
    let m = from_real_rows(&[&[0.3, 0.1], &[0.1, -0.2]]);
    let t = d_unitary_split(&sp, &(&m * I)).unwrap();
    assert!(t.x.norm() < 1e-14 && close(&t.y, &(&m * I), 1e-14));
}

#[test]
fn d_unitary_split_matches_finite_differences() {
    let mut g = stream(21, 6);
    let w = diag(&[Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, -0.3)]);
    let mut cases = vec![w];
    for _ in 0..3 {
        cases.push(unitary(&mut g, 3));
    }
    // a det W1 = -1 instance handled by a flipped T branch
    cases.push(diag(&[Complex64::from_polar(1.0, 2.9), Complex64::from_polar(1.0, 0.3)]));
    for w in cases {
        let n = w.nrows();
        let b = auto_branches(&w).unwrap();
        let sp = unitary_split_with(&w, b).unwrap();
        let s = skew_part(&gaussian(&mut g, n));
        let t = d_unitary_split(&sp, &s).unwrap();
        assert!(t.consistency_residual(&sp) < 1e-9);
        let h = 1e-5;
        let path = |x: f64| unitary_split_with(&(&w * mexp(&(&s * r(x)))), b).unwrap();
        let (p, m) = (path(h), path(-h));
        let rel = |a: ComplexMatrix, an: &ComplexMatrix| (a / r(2.0 * h) - an).norm() / an.norm().max(1e-30);
        assert!(rel(&p.w1 - &m.w1, &t.dw1) < 1e-5);
        assert!(rel(&p.w2 - &m.w2, &t.dw2) < 1e-5);
        assert!(rel(&p.t - &m.t, &t.dt) < 1e-5);
        assert!(rel(&p.l - &m.l, &t.dl) < 1e-5);
    }
}

#[test]
fn d_mostow_is_linear() {
    let mut g = stream(21, 7);
    let z = nonsingular(&mut g, 3, 10.0);
    let (a1, a2) = (gaussian(&mut g, 3), gaussian(&mut g, 3));
    let f = mostow(&z).unwrap();
    let alpha = c(0.7, 0.0);
    let lhs = d_mostow(&f, &z, &(&a1 * alpha + &a2)).unwrap();
    let t1 = d_mostow(&f, &z, &a1).unwrap();
    let t2 = d_mostow(&f, &z, &a2).unwrap();
    assert!(close(&lhs.dw, &(&t1.dw * alpha + &t2.dw), 1e-9));
    assert!(close(&lhs.dp1, &(&t1.dp1 * alpha + &t2.dp1), 1e-9));
    assert!(close(&lhs.dp2, &(&t1.dp2 * alpha + &t2.dp2), 1e-9));
}
