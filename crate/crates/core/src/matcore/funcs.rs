use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eig::{eig_hermitian, schur, Schur};
use super::{
    ensure_same_dim, ensure_square, hermitian_residual, identity, r, skew_hermitian_residual, tol,
    ComplexMatrix, I,
};
use crate::error::{Error, Result};

/// Branch of the scalar logarithm.
///
/// `Angle(alpha)` selects arguments in `[alpha, alpha + 2 pi)`; `Principal`
/// is the usual `(-pi, pi]` branch with the cut on the negative real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Principal,
    Angle(f64),
}

impl Branch {
    /// Rotation gamma such that log_alpha(z) = log(e^{-i gamma} z) + i gamma.
    pub fn rotation(self) -> f64 {
        match self {
            Branch::Principal => 0.0,
            Branch::Angle(alpha) => alpha + PI,
        }
    }

    pub fn alpha(self) -> Option<f64> {
        match self {
            Branch::Principal => None,
            Branch::Angle(a) => Some(a),
        }
    }

    /// Scalar logarithm on this branch.
    pub fn ln(self, z: Complex64) -> Complex64 {
        let g = self.rotation();
        if g == 0.0 {
            z.ln()
        } else {
            (z * Complex64::from_polar(1.0, -g)).ln() + I * g
        }
    }

    /// True when `z` sits on the cut to within `tol` in angle.
    pub fn on_cut(self, z: Complex64, tol: f64) -> bool {
        let w = z * Complex64::from_polar(1.0, -self.rotation());
        w.re < 0.0 && w.im.abs() <= tol * w.norm()
    }
}

/// f applied to the Hermitian part of `m` through its eigendecomposition.
pub fn hermitian_fn(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let e = eig_hermitian(m);
    let n = m.nrows();
    let mut scaled = e.vectors.clone();
    for j in 0..n {
        let fj = f(e.values[j].re);
        scaled.column_mut(j).scale_mut(fj);
    }
    scaled * e.vectors.adjoint()
}

/// Matrix exponential. Hermitian and skew-Hermitian inputs use the
/// symmetric eigensolver; everything else uses Pade scaling-and-squaring.
pub fn mexp(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    if n == 0 {
        return m.clone();
    }
    if hermitian_residual(m) <= 1e-14 {
        return hermitian_fn(m, f64::exp);
    }
    if skew_hermitian_residual(m) <= 1e-14 {
        // M = iH with H Hermitian.
        let h = m * (-I);
        let e = eig_hermitian(&h);
        let mut scaled = e.vectors.clone();
        for j in 0..n {
            let w = Complex64::from_polar(1.0, e.values[j].re);
            scaled.column_mut(j).scale_mut(1.0);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        return scaled * e.vectors.adjoint();
    }
    m.exp()
}

fn check_spectrum_for_log(s: &Schur, branch: Branch) -> Result<()> {
    let vals = s.eigenvalues();
    let scale = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for z in vals {
        if z.norm() <= tol::SING * scale || scale == 0.0 {
            return Err(Error::SingularMatrix { ratio: z.norm() / scale.max(f64::MIN_POSITIVE) });
        }
        if branch.on_cut(z, tol::SING) {
            return Err(Error::BranchCut { re: z.re, im: z.im });
        }
    }
    Ok(())
}

/// Matrix logarithm on the chosen branch.
///
/// Normal inputs take scalar logarithms of the Schur diagonal; non-normal
/// inputs go through inverse scaling and squaring on the triangular factor.
pub fn mlog(m: &ComplexMatrix, branch: Branch) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    let s = schur(m)?;
    check_spectrum_for_log(&s, branch)?;
    if s.is_normal() {
        return Ok(s.map_diagonal(|z| branch.ln(z)));
    }
    let g = branch.rotation();
    let t = &s.t * Complex64::from_polar(1.0, -g);
    let log_t = logm_triangular(&t) + identity(n) * (I * g);
    Ok(s.reassemble(&log_t))
}

/// Principal square root of an upper-triangular matrix whose spectrum
/// avoids the closed negative real axis.
pub(crate) fn sqrtm_triangular(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = t[(i, i)].sqrt();
    }
    for d in 1..n {
        for i in 0..(n - d) {
            let j = i + d;
            let mut acc = t[(i, j)];
            for k in (i + 1)..j {
                acc -= out[(i, k)] * out[(k, j)];
            }
            out[(i, j)] = acc / (out[(i, i)] + out[(j, j)]);
        }
    }
    out
}

fn logm_triangular(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.nrows();
    let id = identity(n);
    let mut rt = t.clone();
    let mut k = 0;
    while (&rt - &id).norm() > 0.25 && k < 64 {
        rt = sqrtm_triangular(&rt);
        k += 1;
    }
    // log(I + X) = sum_{j>=1} (-1)^{j+1} X^j / j, ||X|| <= 1/4.
    let x = &rt - &id;
    let mut term = x.clone();
    let mut sum = x.clone();
    for j in 2..200 {
        term = &term * &x;
        let coef = if j % 2 == 0 { -1.0 } else { 1.0 } / j as f64;
        sum += &term * r(coef);
        if term.norm() / (j as f64) <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    sum * r((1u64 << k) as f64)
}

fn check_pd(p: &ComplexMatrix) -> Result<()> {
    ensure_square(p)?;
    let h = hermitian_residual(p);
    if h > tol::CLASS {
        return Err(Error::NotHermitian { residual: h });
    }
    Ok(())
}

/// Hermitian positive-definite power P^e.
pub fn pd_power(p: &ComplexMatrix, e: f64) -> Result<ComplexMatrix> {
    check_pd(p)?;
    if p.is_empty() {
        return Ok(p.clone());
    }
    let ed = eig_hermitian(p);
    let lambda_min = ed.values[0].re;
    if lambda_min <= 0.0 {
        return Err(Error::NotPositiveDefinite { lambda_min });
    }
    let mut scaled = ed.vectors.clone();
    for j in 0..p.nrows() {
        scaled.column_mut(j).scale_mut(ed.values[j].re.powf(e));
    }
    Ok(scaled * ed.vectors.adjoint())
}

/// Hermitian positive-definite square root.
pub fn sqrt_pd(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    pd_power(p, 0.5)
}

/// Square root with positive spectrum of a matrix whose eigenvalues are
/// real and positive (e.g. A^{-1}B with A, B positive definite).
pub fn sqrt_positive_spectrum(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    let s = schur(m)?;
    for z in s.eigenvalues() {
        if z.re <= 0.0 || z.im.abs() > tol::CLASS * z.norm() {
            return Err(Error::SpectrumNotPositive { re: z.re, im: z.im });
        }
    }
    if s.is_normal() {
        return Ok(s.map_diagonal(|z| r(z.re.sqrt())));
    }
    let mut t = s.t.clone();
    for i in 0..n {
        t[(i, i)] = r(t[(i, i)].re);
    }
    Ok(s.reassemble(&sqrtm_triangular(&t)))
}

/// First divided difference of the branch logarithm at (a, b).
fn log_divided_difference(a: Complex64, b: Complex64, la: Complex64, lb: Complex64) -> Complex64 {
    let sum = a + b;
    let z = (a - b) / sum;
    if z.norm() < 0.1 {
        // log(a/b) = 2 atanh(z); atanh(z)/z = sum z^{2k}/(2k+1).
        let z2 = z * z;
        let mut acc = r(0.0);
        let mut p = r(1.0);
        for k in 0..20 {
            acc += p / (2 * k + 1) as f64;
            p *= z2;
        }
        acc * 2.0 / sum
    } else {
        (la - lb) / (a - b)
    }
}

/// Frechet derivative of the branch logarithm at a normal matrix M in
/// direction X, via the divided-difference (Daleckii-Krein) formula.
pub fn dlog_normal(m: &ComplexMatrix, x: &ComplexMatrix, branch: Branch) -> Result<ComplexMatrix> {
    ensure_same_dim(m, x)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(x.clone());
    }
    let s = schur(m)?;
    if !s.is_normal() {
        return Err(Error::InvalidArgument("dlog_normal requires a normal matrix".into()));
    }
    check_spectrum_for_log(&s, branch)?;
    let vals = s.eigenvalues();
    let logs: Vec<Complex64> = vals.iter().map(|&z| branch.ln(z)).collect();
    let mut y = s.q.adjoint() * x * &s.q;
    for i in 0..n {
        for j in 0..n {
            y[(i, j)] *= log_divided_difference(vals[i], vals[j], logs[i], logs[j]);
        }
    }
    Ok(&s.q * y * s.q.adjoint())
}
