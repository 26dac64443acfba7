use nalgebra::linalg::{Schur as NaSchur, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ensure_square, herm_part, hermitian_residual, identity, r, ComplexMatrix};
use crate::error::{Error, Result};

/// Inputs whose Hermitian residual is below this are routed to the
/// symmetric eigensolver.
const HERMITIAN_ROUTE: f64 = 1e-14;
/// Strictly-upper mass of a Schur factor below which it is treated as diagonal.
const NORMAL_ROUTE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigKind {
    Hermitian,
    General,
}

#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub values: Vec<Complex64>,
    /// Columns are eigenvectors, normalized to unit length.
    pub vectors: ComplexMatrix,
    pub kind: EigKind,
}

/// Complex Schur form M = Q T Q*, T upper triangular.
#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diagonal().iter().copied().collect()
    }

    /// True when the triangular factor is numerically diagonal, i.e. the
    /// source matrix is normal.
    pub fn is_normal(&self) -> bool {
        strict_upper_norm(&self.t) <= NORMAL_ROUTE * self.t.norm().max(f64::MIN_POSITIVE)
    }

    /// Q T' Q* for a replacement triangular factor.
    pub fn reassemble(&self, t: &ComplexMatrix) -> ComplexMatrix {
        &self.q * t * self.q.adjoint()
    }

    /// Q diag(f(t_ii)) Q*, valid when `is_normal`.
    pub fn map_diagonal(&self, f: impl Fn(Complex64) -> Complex64) -> ComplexMatrix {
        let n = self.t.nrows();
        let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j { f(self.t[(i, i)]) } else { r(0.0) });
        self.reassemble(&d)
    }
}

pub(crate) fn strict_upper_norm(t: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for j in 0..t.ncols() {
        for i in 0..j.min(t.nrows()) {
            s += t[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Schur form. Hermitian inputs go through the symmetric eigensolver so
/// that T is exactly diagonal and real.
pub fn schur(m: &ComplexMatrix) -> Result<Schur> {
    let n = ensure_square(m)?;
    if n == 0 {
        return Ok(Schur { q: m.clone(), t: m.clone() });
    }
    if hermitian_residual(m) <= HERMITIAN_ROUTE {
        let e = eig_hermitian(m);
        let t = ComplexMatrix::from_fn(n, n, |i, j| if i == j { e.values[i] } else { r(0.0) });
        return Ok(Schur { q: e.vectors, t });
    }
    let s = NaSchur::try_new(m.clone(), f64::EPSILON, 10_000 * n.max(1))
        .ok_or(Error::NoConvergence)?;
    let (q, mut t) = s.unpack();
    for j in 0..n {
        for i in (j + 1)..n {
            t[(i, j)] = r(0.0);
        }
    }
    Ok(Schur { q, t })
}

/// Symmetric eigensolver on the Hermitian part of `m`; eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> EigDecomposition {
    let n = m.nrows();
    if n == 0 {
        return EigDecomposition { values: Vec::new(), vectors: m.clone(), kind: EigKind::Hermitian };
    }
    let h = herm_part(m);
    let se = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| r(se.eigenvalues[k])).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    EigDecomposition { values, vectors, kind: EigKind::Hermitian }
}

/// Eigendecomposition: symmetric solver for Hermitian input, otherwise
/// Schur followed by triangular back-substitution for the eigenvectors.
pub fn eig(m: &ComplexMatrix) -> Result<EigDecomposition> {
    let n = ensure_square(m)?;
    if hermitian_residual(m) <= HERMITIAN_ROUTE {
        return Ok(eig_hermitian(m));
    }
    let s = schur(m)?;
    let values = s.eigenvalues();
    if s.is_normal() {
        return Ok(EigDecomposition { values, vectors: s.q, kind: EigKind::General });
    }
    let t = &s.t;
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut vt = identity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        for i in (0..k).rev() {
            let mut acc = t[(i, k)];
            for j in (i + 1)..k {
                acc += t[(i, j)] * vt[(j, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < smin {
                d = r(smin);
            }
            vt[(i, k)] = -acc / d;
        }
        let nk = vt.column(k).norm();
        vt.column_mut(k).unscale_mut(nk);
    }
    Ok(EigDecomposition { values, vectors: &s.q * vt, kind: EigKind::General })
}
