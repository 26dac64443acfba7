//! Geometric mean of positive-definite matrices and its derivative.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    commutator_residual, decay_integral, eig, ensure_same_dim, herm_part, hermitian_residual, norm2,
    pd_power, positive_definite_residual, sqrt_pd, tol, ComplexMatrix, DecayMode,
};
use crate::sylvester::{solve, SylvesterProblem};

fn check_pd(m: &ComplexMatrix) -> Result<()> {
    let h = hermitian_residual(m);
    if h > tol::CLASS {
        return Err(Error::NotHermitian { residual: h });
    }
    if positive_definite_residual(m) > tol::CLASS {
        let lambda_min = crate::matcore::eig_hermitian(m).values.first().map_or(0.0, |z| z.re);
        return Err(Error::NotPositiveDefinite { lambda_min });
    }
    Ok(())
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let h = hermitian_residual(m);
    if h > tol::CLASS {
        return Err(Error::NotHermitian { residual: h });
    }
    Ok(())
}

/// A^{1/2}, A^{-1/2} and (A^{-1/2} B A^{-1/2})^{1/2}.
fn pieces(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    ensure_same_dim(a, b)?;
    check_pd(a)?;
    check_pd(b)?;
    let ah = sqrt_pd(a)?;
    let aih = pd_power(a, -0.5)?;
    let mid = sqrt_pd(&herm_part(&(&aih * b * &aih)))?;
    Ok((ah, aih, mid))
}

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
pub fn gm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (ah, _, mid) = pieces(a, b)?;
    Ok(herm_part(&(&ah * mid * &ah)))
}

/// C = (A^{-1} B)^{1/2}, the square root with positive spectrum.
pub fn c_factor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (ah, aih, mid) = pieces(a, b)?;
    Ok(aih * mid * ah)
}

#[derive(Debug, Clone)]
pub struct GeoMeanDerivative {
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

impl GeoMeanDerivative {
    /// ||C* D + D C - Y - C* X C||_F
    pub fn residual(&self) -> f64 {
        let cs = self.c.adjoint();
        (&cs * &self.d + &self.d * &self.c - &self.y - &cs * &self.x * &self.c).norm()
    }
}

/// Derivative of (A, B) -> A # B in direction (X, Y): the solution D of
/// C* D + D C = Y + C* X C.
pub fn dgm(a: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<GeoMeanDerivative> {
    ensure_same_dim(a, x)?;
    ensure_same_dim(a, y)?;
    check_hermitian(x)?;
    check_hermitian(y)?;
    let c = c_factor(a, b)?;
    let cs = c.adjoint();
    let rhs = y + &cs * x * &c;
    let d = solve(&SylvesterProblem::new(cs, c.clone(), rhs))?;
    Ok(GeoMeanDerivative { c, d: herm_part(&d), a: a.clone(), b: b.clone(), x: x.clone(), y: y.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GmBoundVariant {
    General,
    CommutingPi4,
    CommutingHalf,
}

/// Upper bound for the norm of the derivative map on pairs normed by
/// max(|||X|||, |||Y|||).
pub fn dgm_bound(a: &ComplexMatrix, b: &ComplexMatrix, variant: GmBoundVariant) -> Result<f64> {
    let c = c_factor(a, b)?;
    let cn = norm2(&c);
    let factor = 1.0 + cn * cn;
    if variant == GmBoundVariant::General {
        return Ok(decay_integral(&c, DecayMode::Quadrature)? * factor);
    }
    let residual = commutator_residual(a, b);
    if residual > tol::CLASS {
        return Err(Error::NotCommuting { residual });
    }
    let lmin = eig(&c)?.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    Ok(match variant {
        GmBoundVariant::CommutingPi4 => PI / (4.0 * lmin) * factor,
        _ => 0.5 / lmin * factor,
    })
}

/// ||D G(A, B)(I, I)||_2, which equals the spectral-norm operator norm of
/// the derivative map because the map is positive.
pub fn dgm_opnorm_identity_value(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let id = crate::matcore::identity(a.nrows());
    Ok(norm2(&dgm(a, b, &id, &id)?.d))
}
