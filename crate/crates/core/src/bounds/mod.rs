//! Closed-form first-order perturbation bounds for the Mostow, unitary-split
//! and bipolar factors.
//!
//! Norms written ||.|| below are spectral; |||.||| is the caller's
//! unitarily invariant norm (`NormKind`).

mod fourier;

pub use fourier::{analytic_cap, f as fourier_f, fourier_an, FourierSequence, GRID, TOL_ANGLE};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::{bipolar, mostow, unitary_split_spec, BipolarFactors, BranchSpec, MostowFactors, UnitarySplit};
use crate::error::{Error, Result};
use crate::geomean::gm;
use crate::matcore::{
    c_of_w, cond, conj, decay_integral, eig, herm_part, inverse, norm, norm2, pd_power, sqrt_pd, tol,
    ComplexMatrix, DecayMode, NormKind,
};

/// Margin added to the argument spread of sigma(W2) under `DeltaPolicy::Auto`.
pub const MARGIN_DELTA: f64 = 1e-3;

/// C with C^2 = (Z*Z)^{-1} conj(Z*Z) and positive spectrum.
///
/// Formed as Z^{-1} |Y| Z with Y = conj(Z) Z^{-1}, which is the same matrix
/// without squaring the condition number.
fn c_matrix(z: &ComplexMatrix) -> Result<ComplexMatrix> {
    cond(z)?;
    let zi = inverse(z)?;
    let y = conj(z) * &zi;
    let abs_y = sqrt_pd(&herm_part(&(y.adjoint() * &y)))?;
    Ok(zi * abs_y * z)
}

/// beta(Z): integral of ||e^{-tC}||^2 over [0, inf).
pub fn beta(z: &ComplexMatrix) -> Result<f64> {
    decay_integral(&c_matrix(z)?, DecayMode::Quadrature)
}

/// k(Z) = beta(Z) cond(Z) (1 + cond(Z)^4).
pub fn k_of_z(z: &ComplexMatrix) -> Result<f64> {
    let c = cond(z)?;
    Ok(beta(z)? * c * (1.0 + c.powi(4)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MostowBoundReport {
    pub beta: f64,
    pub k: f64,
    pub cond_z: f64,
    pub b_w: f64,
    pub b_p1: f64,
    pub b_p2: f64,
    pub b_p2_remark32: f64,
    pub b_p1_remark33: f64,
    pub norm_kind: NormKind,
}

pub fn mostow_bounds(z: &ComplexMatrix, norm_kind: NormKind) -> Result<MostowBoundReport> {
    let f = mostow(z)?;
    mostow_bounds_for(z, &f, norm_kind)
}

pub(crate) fn mostow_bounds_for(z: &ComplexMatrix, f: &MostowFactors, norm_kind: NormKind) -> Result<MostowBoundReport> {
    let b = beta(z)?;
    let cz = cond(z)?;
    let k = b * cz * (1.0 + cz.powi(4));
    let (p1, p1i, p2i) = (norm2(&f.p1), norm2(&f.p1_inv), norm2(&f.p2_inv));
    let tail = 1.0 + p1 * k;

    let q = herm_part(&(z.adjoint() * z));
    let qc = conj(&q);
    let inner_inv = pd_power(&qc, -0.25)? * pd_power(&q, -0.5)? * pd_power(&qc, -0.25)?;
    let inner = pd_power(&qc, 0.25)? * sqrt_pd(&q)? * pd_power(&qc, 0.25)?;
    let zi = norm2(&inverse(z)?);
    let b_p2_remark32 = norm2(z) * b * norm2(&inner_inv) * (1.0 + zi.powi(4) * norm2(&inner).powi(2));

    Ok(MostowBoundReport {
        beta: b,
        k,
        cond_z: cz,
        b_w: 0.5 * p1i * p2i * tail,
        b_p1: 0.5 * p1 * p1i * p2i * tail,
        b_p2: k,
        b_p2_remark32,
        b_p1_remark33: p1 * p1 * p2i * tail,
        norm_kind,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaPolicy {
    Auto,
    Explicit(f64),
}

/// Largest difference between the eigenvalues of T (the arguments of sigma(W2)).
pub fn argument_spread(split: &UnitarySplit) -> f64 {
    let a = split.w2_arguments();
    let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
    if a.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Fourier sequence and bound 2 sum |a_n| for the derivatives of the
/// unitary-split factors.
pub fn unitary_split_bound(w: &ComplexMatrix, policy: DeltaPolicy) -> Result<(FourierSequence, f64)> {
    let split = unitary_split_spec(w, BranchSpec::Auto)?;
    split_bound_for(&split, policy)
}

pub fn split_bound_for(split: &UnitarySplit, policy: DeltaPolicy) -> Result<(FourierSequence, f64)> {
    let spread = argument_spread(split);
    let delta = match policy {
        DeltaPolicy::Auto => spread + MARGIN_DELTA,
        DeltaPolicy::Explicit(d) if d > spread => d,
        DeltaPolicy::Explicit(d) => return Err(Error::DeltaOutOfRange(d)),
    };
    if delta >= std::f64::consts::PI {
        return Err(Error::SpreadTooWide(delta));
    }
    let seq = fourier_an(delta, tol::FOURIER)?;
    let b = seq.double_l1_sum;
    Ok((seq, b))
}

/// Integral of ||e^{-t W2}||^2 over [0, inf).
pub fn polar_comparison_bound(w2: &ComplexMatrix) -> Result<f64> {
    decay_integral(w2, DecayMode::Quadrature)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BipolarBoundReport {
    pub k: f64,
    pub c_el: f64,
    pub c_eit: f64,
    pub c_wtw: f64,
    pub fourier: FourierSequence,
    pub b_l: f64,
    pub b_t: f64,
    pub b_k: f64,
    pub b_s: f64,
    /// Against |||W~ - W|||.
    pub b_l_direct: f64,
    /// Against |||W~ - W|||.
    pub b_t_direct: f64,
    /// None when sigma(W2) leaves the open right half plane.
    pub polar_comparison: Option<f64>,
    /// Distance from -1 to sigma(Z^T Z ((Z*Z)^{-1} # conj(Z*Z)^{-1})).
    pub hypothesis_distance: f64,
    pub mostow: MostowBoundReport,
    pub norm_kind: NormKind,
}

fn rotate(m: &ComplexMatrix, gamma: f64) -> ComplexMatrix {
    m * Complex64::from_polar(1.0, -gamma)
}

/// Distance from -1 to sigma(Z^T Z ((Z*Z)^{-1} # conj(Z*Z)^{-1})).
pub fn hypothesis_distance(z: &ComplexMatrix) -> Result<f64> {
    let q = herm_part(&(z.adjoint() * z));
    let qi = herm_part(&inverse(&q)?);
    let m = z.transpose() * z * gm(&qi, &conj(&qi))?;
    Ok(eig(&m)?
        .values
        .iter()
        .map(|l| (l + 1.0).norm())
        .fold(f64::INFINITY, f64::min))
}

pub fn bipolar_bounds(z: &ComplexMatrix, norm_kind: NormKind) -> Result<BipolarBoundReport> {
    let f = bipolar(z, BranchSpec::Auto)?;
    bipolar_bounds_for(z, &f, norm_kind)
}

/// Bounds for given bipolar factors (the branches are taken from `f`).
pub fn bipolar_bounds_for(z: &ComplexMatrix, f: &BipolarFactors, norm_kind: NormKind) -> Result<BipolarBoundReport> {
    let distance = hypothesis_distance(z)?;
    if distance <= tol::SING * norm2(z).powi(2).max(1.0) {
        return Err(Error::HypothesisViolated { distance });
    }
    let m = &f.mostow;
    let split = &f.split;
    let mostow = mostow_bounds_for(z, m, norm_kind)?;
    let k = mostow.k;

    let c_el = c_of_w(&rotate(&split.w1, split.branches.l.rotation()))?;
    let c_eit = c_of_w(&rotate(&split.w2, split.w2_rotation()))?;
    let w = &m.w;
    let c_wtw = c_of_w(&rotate(&(w.transpose() * w), split.branches.t.rotation()))?;
    let (fourier, double_l1) = split_bound_for(split, DeltaPolicy::Auto)?;

    let (eik, e_ik, e_s) = (&m.p1, &m.p1_inv, &m.p2_inv);
    let tail = 1.0 + norm2(eik) * k;
    let common = double_l1 * 0.5 * norm2(e_ik) * norm2(e_s) * tail;
    Ok(BipolarBoundReport {
        k,
        c_el,
        c_eit,
        c_wtw,
        b_l: c_el * common,
        b_t: c_eit * common,
        b_k: norm(e_ik, norm_kind) * 0.5 * norm2(eik) * norm2(e_ik) * norm2(e_s) * tail,
        b_s: norm(e_s, norm_kind) * k,
        b_l_direct: 1.0 + c_wtw,
        b_t_direct: c_wtw,
        polar_comparison: polar_comparison_bound(&split.w2).ok(),
        hypothesis_distance: distance,
        fourier,
        mostow,
        norm_kind,
    })
}

#[cfg(test)]
mod tests;
