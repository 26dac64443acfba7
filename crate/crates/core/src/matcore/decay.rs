use serde::{Deserialize, Serialize};

use super::eig::{eig_hermitian, schur, strict_upper_norm, Schur};
use super::quad::integrate;
use super::{ensure_finite, ensure_same_dim, ensure_square, hermitian_residual, identity, r, singular_values, tol, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayMode {
    Quadrature,
    HermitianPartBound,
    CommutingExact,
}

/// Upper envelope for ||e^{-tC}||_2 built from a Schur form C = Q(D + N)Q*:
/// e^{-lambda t} * sum_{k<n} (t ||N||)^k / k!, lambda the spectral abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lambda_hat: f64,
    pub nilpotent_norm: f64,
    pub dim: usize,
}

impl Envelope {
    pub fn from_schur(s: &Schur) -> Self {
        let lambda_hat = s.eigenvalues().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let nilpotent_norm = if s.is_normal() { 0.0 } else { strict_upper_norm(&s.t) };
        Envelope { lambda_hat, nilpotent_norm, dim: s.t.nrows() }
    }

    fn poly_coefficients(&self) -> Vec<f64> {
        let n = if self.nilpotent_norm == 0.0 { 1 } else { self.dim.max(1) };
        let mut c = Vec::with_capacity(n);
        let mut term = 1.0;
        for k in 0..n {
            if k > 0 {
                term *= self.nilpotent_norm / k as f64;
            }
            c.push(term);
        }
        c
    }

    pub fn at(&self, t: f64) -> f64 {
        let p: f64 = self.poly_coefficients().iter().rev().fold(0.0, |acc, &ck| acc * t + ck);
        (-self.lambda_hat * t).exp() * p
    }

    /// Exact value of the integral of the squared envelope over [t0, inf).
    pub fn tail_squared(&self, t0: f64) -> f64 {
        self.tail_product(self, t0)
    }

    /// Exact value of the integral of env_self(t) * env_other(t) over [t0, inf).
    pub fn tail_product(&self, other: &Envelope, t0: f64) -> f64 {
        let c1 = self.poly_coefficients();
        let c2 = other.poly_coefficients();
        let mut prod = vec![0.0; c1.len() + c2.len() - 1];
        for (i, ci) in c1.iter().enumerate() {
            for (j, cj) in c2.iter().enumerate() {
                prod[i + j] += ci * cj;
            }
        }
        // int_{t0}^inf t^m e^{-a t} dt = e^{-a t0} sum_{j<=m} m!/j! t0^j / a^{m-j+1}
        let a = self.lambda_hat + other.lambda_hat;
        let mut total = 0.0;
        for (m, dm) in prod.iter().enumerate() {
            let mut inner = 0.0;
            let mut ratio = 1.0; // m!/j!, built from j = m downward
            for j in (0..=m).rev() {
                inner += ratio * t0.powi(j as i32) / a.powi((m - j + 1) as i32);
                ratio *= j as f64;
            }
            total += dm * inner;
        }
        (-a * t0).exp() * total
    }
}

fn spectral_norm_sq(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().map_or(0.0, |s| s * s)
}

fn quadrature(s: &Schur, env: &Envelope) -> Result<f64> {
    let lam = env.lambda_hat;
    // ||e^{-tC}|| >= e^{-lambda t}, so the integral is at least 1/(2 lambda).
    let scale = 0.5 / lam;
    let target = 1e-2 * tol::QUAD * scale;
    let mut horizon = 1.0 / lam;
    let mut guard = 0;
    while env.tail_squared(horizon) > target {
        horizon *= 2.0;
        guard += 1;
        if guard > 200 || !horizon.is_finite() {
            return Err(Error::NoConvergence);
        }
    }
    let panels = ((horizon * lam).ceil() as usize).clamp(1, 256);
    let bps: Vec<f64> = (0..=panels).map(|k| horizon * k as f64 / panels as f64).collect();
    let normal = s.is_normal();
    let t_mat = &s.t;
    let integrand = |t: f64| -> f64 {
        if normal {
            (-2.0 * lam * t).exp()
        } else {
            spectral_norm_sq(&(t_mat * r(-t)).exp())
        }
    };
    let q = integrate(integrand, &bps, target, 1e-2 * tol::QUAD, MAX_PANELS);
    if !q.converged {
        return Err(Error::NoConvergence);
    }
    Ok(q.value)
}

/// The integral of ||e^{-tC}||_2^2 over [0, inf), or one of its closed-form
/// bounds.
pub fn decay_integral(c: &ComplexMatrix, mode: DecayMode) -> Result<f64> {
    let n = ensure_square(c)?;
    ensure_finite(c)?;
    if n == 0 {
        return Ok(0.0);
    }
    let s = schur(c)?;
    let env = Envelope::from_schur(&s);
    if env.lambda_hat <= 0.0 {
        return Err(Error::DivergentIntegral { min_re: env.lambda_hat });
    }
    match mode {
        DecayMode::Quadrature => quadrature(&s, &env),
        DecayMode::CommutingExact => {
            if hermitian_residual(c) > tol::CLASS {
                return Err(Error::ModeInapplicable("commuting_exact requires a Hermitian matrix"));
            }
            Ok(0.5 / eig_hermitian(c).values[0].re)
        }
        DecayMode::HermitianPartBound => {
            let lmin = eig_hermitian(c).values[0].re;
            if lmin <= 0.0 {
                return Err(Error::ModeInapplicable("Hermitian part is not positive definite"));
            }
            Ok(0.5 / lmin)
        }
    }
}

/// Rejects A when t(A - I) + I is singular for some t in [0, 1], i.e. when
/// A has an eigenvalue on the closed negative real axis.
fn check_segment(s: &Schur) -> Result<()> {
    let vals = s.eigenvalues();
    let scale = vals.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for z in vals {
        let on_axis = z.re <= 0.0 && z.im.abs() <= tol::SING * scale;
        if on_axis || z.norm() <= tol::SING * scale {
            return Err(Error::SegmentSingular { re: z.re, im: z.im });
        }
    }
    Ok(())
}

fn shifted(t_mat: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = t_mat.nrows();
    let mut m = t_mat * r(t);
    for i in 0..n {
        m[(i, i)] += 1.0 - t;
    }
    m
}

/// C(W): integral over [0, 1] of ||(t(W - I) + I)^{-1}||_2^2.
pub fn c_of_w(w: &ComplexMatrix) -> Result<f64> {
    let n = ensure_square(w)?;
    ensure_finite(w)?;
    if n == 0 || (w - identity(n)).norm() == 0.0 {
        return Ok(1.0);
    }
    let s = schur(w)?;
    check_segment(&s)?;
    let vals = s.eigenvalues();
    let normal = s.is_normal();
    let integrand = |t: f64| -> f64 {
        if normal {
            vals.iter()
                .map(|&z| 1.0 / (r(1.0) + (z - 1.0) * t).norm_sqr())
                .fold(0.0, f64::max)
        } else {
            let smin = singular_values(&shifted(&s.t, t)).last().copied().unwrap_or(1.0);
            1.0 / (smin * smin)
        }
    };
    let q = integrate(integrand, &[0.0, 0.25, 0.5, 0.75, 1.0], 0.0, 1e-12, MAX_PANELS);
    if !q.converged {
        return Err(Error::NoConvergence);
    }
    Ok(q.value)
}

/// Derivative of the principal logarithm at A in direction X:
/// the integral over [0, 1] of R(t) X R(t) with R(t) = (t(A - I) + I)^{-1}.
pub fn dlog_apply(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_dim(a, x)?;
    ensure_finite(a)?;
    ensure_finite(x)?;
    if a.nrows() == 0 {
        return Ok(x.clone());
    }
    let s = schur(a)?;
    check_segment(&s)?;
    let xt = s.q.adjoint() * x * &s.q;
    let t_mat = &s.t;
    let integrand = |t: f64| -> ComplexMatrix {
        let res = shifted(t_mat, t)
            .try_inverse()
            .unwrap_or_else(|| ComplexMatrix::from_element(t_mat.nrows(), t_mat.nrows(), r(f64::NAN)));
        &res * &xt * &res
    };
    let q = integrate(integrand, &[0.0, 0.25, 0.5, 0.75, 1.0], 1e-15 * x.norm(), 1e-13, MAX_PANELS);
    if !q.value.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        let z = s.eigenvalues()[0];
        return Err(Error::SegmentSingular { re: z.re, im: z.im });
    }
    Ok(s.reassemble(&q.value))
}
