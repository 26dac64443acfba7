use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::rng::{gaussian, stream, unit_direction};
use crate::error::{Error, Result};
use crate::matcore::{c, norm, r, ComplexMatrix, NormKind};

const LINEARITY_TOL: f64 = 1e-8;
const POWER_TOL: f64 = 1e-8;

/// Operator norm of a real-linear map, with a flag telling whether the value
/// is exact (Frobenius) or a sampled lower bound (spectral).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpNorm {
    pub value: f64,
    pub exact: bool,
}

fn check_linear<F>(map: &F, n: usize, seed: u64) -> Result<()>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let mut g = stream(seed, u64::MAX);
    for _ in 0..3 {
        let (x, y) = (gaussian(&mut g, n), gaussian(&mut g, n));
        let s: f64 = g.random_range(-2.0..2.0);
        let lhs = map(&(&x * r(s) + &y))?;
        let rhs = map(&x)? * r(s) + map(&y)?;
        let defect = (&lhs - &rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
        if defect > LINEARITY_TOL {
            return Err(Error::NotLinear { defect });
        }
    }
    Ok(())
}

fn to_real(m: &ComplexMatrix) -> DVector<f64> {
    DVector::from_iterator(2 * m.len(), m.iter().flat_map(|z| [z.re, z.im]))
}

/// Real matrix of the map on the basis {E_jk, i E_jk}.
fn real_representation<F>(map: &F, n: usize) -> Result<DMatrix<f64>>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let mut cols = Vec::with_capacity(2 * n * n);
    for k in 0..n * n {
        for unit in [c(1.0, 0.0), c(0.0, 1.0)] {
            let mut e = ComplexMatrix::zeros(n, n);
            e[k] = unit;
            cols.push(to_real(&map(&e)?));
        }
    }
    Ok(DMatrix::from_columns(&cols))
}

/// sup |||map(X)||| over |||X||| = 1 for a real-linear map on n x n matrices.
///
/// Frobenius: largest singular value of the real representation (exact).
/// Spectral: maximum over `trials` random unit directions (a lower bound).
pub fn estimate_opnorm<F>(map: F, n: usize, kind: NormKind, trials: usize, seed: u64) -> Result<OpNorm>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    check_linear(&map, n, seed)?;
    match kind {
        NormKind::Frobenius => {
            let m = real_representation(&map, n)?;
            let value = m.singular_values().iter().copied().fold(0.0, f64::max);
            Ok(OpNorm { value, exact: true })
        }
        NormKind::Spectral => {
            let mut g = stream(seed, 0);
            let mut best = 0.0f64;
            for _ in 0..trials.max(1) {
                let x = unit_direction(&mut g, n, NormKind::Spectral);
                best = best.max(norm(&map(&x)?, NormKind::Spectral));
            }
            Ok(OpNorm { value: best, exact: false })
        }
    }
}

/// sup ||map(X, Y)||_F over max(||X||_F, ||Y||_F) = 1.
///
/// Alternating ascent from `trials` random starts: for fixed output
/// direction v the best X and Y are the normalized adjoint images. The
/// result is a lower bound that is attained at a stationary point.
pub fn estimate_pair_opnorm_frobenius<F>(map: F, n: usize, trials: usize, seed: u64) -> Result<OpNorm>
where
    F: Fn(&ComplexMatrix, &ComplexMatrix) -> Result<ComplexMatrix>,
{
    let zero = ComplexMatrix::zeros(n, n);
    check_linear(&|x: &ComplexMatrix| map(x, x), n, seed)?;
    let m1 = real_representation(&|x: &ComplexMatrix| map(x, &zero), n)?;
    let m2 = real_representation(&|y: &ComplexMatrix| map(&zero, y), n)?;
    let unit = |v: DVector<f64>| {
        let s = v.norm();
        if s > 0.0 { v / s } else { v }
    };
    let mut g = stream(seed, 1);
    let mut best = 0.0f64;
    for _ in 0..trials.max(1) {
        let mut x = unit(to_real(&gaussian(&mut g, n)));
        let mut y = unit(to_real(&gaussian(&mut g, n)));
        let mut value = 0.0;
        for _ in 0..500 {
            let out = &m1 * &x + &m2 * &y;
            let next = out.norm();
            let v = unit(out);
            x = unit(m1.transpose() * &v);
            y = unit(m2.transpose() * &v);
            let done = (next - value).abs() <= POWER_TOL * next;
            value = next;
            if done {
                break;
            }
        }
        best = best.max(value);
    }
    Ok(OpNorm { value: best, exact: false })
}

/// ||(map(Z + hA) - map(Z - hA))/(2h) - analytic||_F / max(||analytic||_F, 1e-30).
pub fn fd_check<F>(map: F, z: &ComplexMatrix, a: &ComplexMatrix, analytic: &ComplexMatrix, h: f64) -> Result<f64>
where
    F: Fn(&ComplexMatrix) -> Result<ComplexMatrix>,
{
    let plus = map(&(z + a * r(h))).map_err(|e| Error::MapUndefined(Box::new(e)))?;
    let minus = map(&(z - a * r(h))).map_err(|e| Error::MapUndefined(Box::new(e)))?;
    let fd = (plus - minus) / r(2.0 * h);
    Ok((fd - analytic).norm() / analytic.norm().max(1e-30))
}
