//! Dense complex matrix kernel: norms, structure tests, spectral
//! decompositions, matrix functions and the decay integrals used by the
//! bound formulas.

mod decay;
mod eig;
mod funcs;
pub mod quad;
pub mod serde_matrix;

pub use decay::{c_of_w, decay_integral, dlog_apply, DecayMode, Envelope};
pub use eig::{eig, eig_hermitian, schur, EigDecomposition, EigKind, Schur};
pub use funcs::{
    dlog_normal, hermitian_fn, mexp, mlog, pd_power, sqrt_pd, sqrt_positive_spectrum, Branch,
};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix, row/column storage handled by nalgebra.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Eigendecomposition residual, relative Frobenius.
    pub const EIG: f64 = 1e-12;
    /// Matrix-function backward error, relative Frobenius.
    pub const FUN: f64 = 1e-12;
    /// Structural class membership (Hermitian, unitary, ...).
    pub const CLASS: f64 = 1e-10;
    /// Numerical singularity, relative to the largest singular value.
    pub const SING: f64 = 1e-13;
    /// Decay-integral and Sylvester-integral truncation/quadrature.
    pub const QUAD: f64 = 1e-9;
    /// Sylvester solvability gap, relative to ||A|| + ||B||.
    pub const SEP: f64 = 1e-10;
    /// Sylvester residual.
    pub const SYL: f64 = 1e-9;
    /// Decomposition reconstruction, relative.
    pub const DEC: f64 = 1e-9;
    /// Condition-number cap for decompositions.
    pub const COND_CAP: f64 = 1e8;
    /// Fourier reproduction.
    pub const FOURIER: f64 = 1e-6;
}

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Spectral,
    Frobenius,
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(NormKind::Spectral),
            "frobenius" => Ok(NormKind::Frobenius),
            other => Err(Error::InvalidArgument(format!("unknown norm '{other}'"))),
        }
    }
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormKind::Spectral => "spectral",
            NormKind::Frobenius => "frobenius",
        })
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn from_real_rows(rows: &[&[f64]]) -> ComplexMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    ComplexMatrix::from_fn(n, m, |i, j| r(rows[i][j]))
}

pub fn diag(values: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            r(values[i])
        } else {
            Complex64::default()
        }
    })
}

pub fn conj(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| z.conj())
}

pub fn real_part(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| r(z.re))
}

pub fn imag_part(m: &ComplexMatrix) -> ComplexMatrix {
    m.map(|z| r(z.im))
}

/// (M + M*)/2
pub fn herm_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * r(0.5)
}

/// (M - M*)/2
pub fn skew_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m - m.adjoint()) * r(0.5)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

pub fn ensure_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    ensure_square(a)?;
    ensure_square(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
    }
    Ok(())
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn norm(m: &ComplexMatrix, which: NormKind) -> f64 {
    match which {
        NormKind::Frobenius => m.norm(),
        NormKind::Spectral => singular_values(m).first().copied().unwrap_or(0.0),
    }
}

pub fn norm2(m: &ComplexMatrix) -> f64 {
    norm(m, NormKind::Spectral)
}

/// sigma_max / sigma_min.
pub fn cond(m: &ComplexMatrix) -> Result<f64> {
    ensure_square(m)?;
    let s = singular_values(m);
    let (Some(&hi), Some(&lo)) = (s.first(), s.last()) else {
        return Ok(1.0);
    };
    if hi == 0.0 || lo <= tol::SING * hi {
        return Err(Error::SingularMatrix { ratio: if hi == 0.0 { 0.0 } else { lo / hi } });
    }
    Ok(hi / lo)
}

pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(m.clone());
    }
    cond(m)?;
    m.clone()
        .try_inverse()
        .ok_or(Error::SingularMatrix { ratio: 0.0 })
}

fn rel(residual: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        residual
    } else {
        residual / scale
    }
}

pub fn hermitian_residual(m: &ComplexMatrix) -> f64 {
    rel((m - m.adjoint()).norm(), m.norm())
}

pub fn skew_hermitian_residual(m: &ComplexMatrix) -> f64 {
    rel((m + m.adjoint()).norm(), m.norm())
}

pub fn unitary_residual(m: &ComplexMatrix) -> f64 {
    (m.adjoint() * m - identity(m.nrows())).norm()
}

pub fn circular_residual(m: &ComplexMatrix) -> f64 {
    (conj(m) * m - identity(m.nrows())).norm()
}

pub fn real_residual(m: &ComplexMatrix) -> f64 {
    rel(imag_part(m).norm(), m.norm())
}

pub fn symmetric_residual(m: &ComplexMatrix) -> f64 {
    rel((m - m.transpose()).norm(), m.norm())
}

pub fn skew_symmetric_residual(m: &ComplexMatrix) -> f64 {
    rel((m + m.transpose()).norm(), m.norm())
}

/// Distance from positive definiteness: the Hermitian residual, or the
/// relative size of the most negative eigenvalue of the Hermitian part.
pub fn positive_definite_residual(m: &ComplexMatrix) -> f64 {
    let h = hermitian_residual(m);
    if m.is_empty() {
        return h;
    }
    let lambda_min = eig_hermitian(&herm_part(m))
        .values
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    let scale = norm2(m).max(f64::MIN_POSITIVE);
    let neg = if lambda_min > 0.0 { 0.0 } else { 1.0 + (-lambda_min / scale) };
    h.max(neg)
}

pub fn commutator_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    rel((a * b - b * a).norm(), norm2(a) * norm2(b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassResiduals {
    pub hermitian: f64,
    pub positive_definite: f64,
    pub unitary: f64,
    pub real: f64,
    pub symmetric: f64,
    pub skew_symmetric: f64,
    pub circular: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixClassReport {
    pub is_hermitian: bool,
    pub is_positive_definite: bool,
    pub is_unitary: bool,
    pub is_real: bool,
    pub is_symmetric: bool,
    pub is_skew_symmetric: bool,
    pub is_circular: bool,
    pub residuals: ClassResiduals,
}

pub fn classify(m: &ComplexMatrix) -> Result<MatrixClassReport> {
    ensure_square(m)?;
    let res = ClassResiduals {
        hermitian: hermitian_residual(m),
        positive_definite: positive_definite_residual(m),
        unitary: unitary_residual(m),
        real: real_residual(m),
        symmetric: symmetric_residual(m),
        skew_symmetric: skew_symmetric_residual(m),
        circular: circular_residual(m),
    };
    let ok = |x: f64| x <= tol::CLASS;
    Ok(MatrixClassReport {
        is_hermitian: ok(res.hermitian),
        is_positive_definite: ok(res.positive_definite),
        is_unitary: ok(res.unitary),
        is_real: ok(res.real),
        is_symmetric: ok(res.symmetric),
        is_skew_symmetric: ok(res.skew_symmetric),
        is_circular: ok(res.circular),
        residuals: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    #[test]
    fn identity_spectral_norm_is_one() {
        assert!((norm(&identity(3), NormKind::Spectral) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_of_pythagorean_diagonal() {
        let m = diag(&[r(3.0), c(0.0, -4.0)]);
        assert!((norm(&m, NormKind::Frobenius) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn cond_of_diagonal_and_zn() {
        let m = diag_real(&[E, 1.0 / E]);
        assert!((cond(&m).unwrap() - E * E).abs() < 1e-12);
        let t = 3.0 * PI / 4.0;
        let z = diag_real(&[t.sin().exp(), (t + FRAC_PI_2).sin().exp()]);
        let expected = 2f64.sqrt().exp();
        assert!((cond(&z).unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn cond_rejects_singular() {
        let m = from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(cond(&m), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn classify_circular_matrix() {
        // e^{iK} for real skew K is circular and positive definite.
        let k = from_real_rows(&[&[0.0, 0.3], &[-0.3, 0.0]]);
        let p = mexp(&(k * I));
        let rep = classify(&p).unwrap();
        assert!(rep.is_circular && rep.is_positive_definite && rep.is_hermitian);
        assert!(!rep.is_real && !rep.is_unitary);
    }

    #[test]
    fn classify_rotation() {
        let (s, co) = 1f64.sin_cos();
        let m = from_real_rows(&[&[co, s], &[-s, co]]);
        let rep = classify(&m).unwrap();
        assert!(rep.is_unitary && rep.is_real && !rep.is_symmetric && !rep.is_positive_definite);
    }

    #[test]
    fn degenerate_sizes() {
        let e = ComplexMatrix::zeros(0, 0);
        assert_eq!(norm(&e, NormKind::Spectral), 0.0);
        assert_eq!(cond(&e).unwrap(), 1.0);
        let one = diag(&[c(0.0, 2.0)]);
        assert!((norm(&one, NormKind::Spectral) - 2.0).abs() < 1e-15);
    }
}
