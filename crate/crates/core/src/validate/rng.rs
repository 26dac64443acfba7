//! Seeded random matrices.
//!
//! Every stream is a `ChaCha8Rng` seeded with `seed` and switched to stream
//! `index`, so records are reproducible across platforms and independent of
//! scheduling order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matcore::{c, diag_real, herm_part, norm, r, ComplexMatrix, NormKind};

pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
pub fn gaussian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(s * re, s * im)
    })
}

pub fn gaussian_real(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| r(rng.sample(StandardNormal)))
}

/// Gaussian direction scaled to unit norm.
pub fn unit_direction(rng: &mut impl Rng, n: usize, kind: NormKind) -> ComplexMatrix {
    let g = gaussian(rng, n);
    let s = norm(&g, kind);
    g / r(s)
}

/// Haar unitary: QR of a Gaussian matrix with the phases of R removed.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let qr = gaussian(rng, n).qr();
    let (q, rr) = (qr.q(), qr.r());
    let mut out = q;
    for j in 0..n {
        let d = rr[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { r(1.0) };
        for i in 0..n {
            out[(i, j)] *= ph;
        }
    }
    out
}

pub fn orthogonal(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (q, rr) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(n, n, |i, j| r(q[(i, j)] * rr[(j, j)].signum()))
}

/// Singular values log-spaced at random in [1, cond], with both ends hit.
fn spread(rng: &mut impl Rng, n: usize, cond: f64) -> Vec<f64> {
    let mut s: Vec<f64> = (0..n)
        .map(|k| match k {
            0 => 1.0,
            1 => cond,
            _ => cond.powf(rng.random::<f64>()),
        })
        .collect();
    if n == 1 {
        s[0] = 1.0;
    }
    s
}

/// U diag(sigma) V* with cond exactly `cond` (for n >= 2).
pub fn with_cond(rng: &mut impl Rng, n: usize, cond: f64) -> ComplexMatrix {
    let s = spread(rng, n, cond);
    unitary(rng, n) * diag_real(&s) * unitary(rng, n).adjoint()
}

/// Nonsingular matrix with cond drawn log-uniformly from [1, max_cond].
pub fn nonsingular(rng: &mut impl Rng, n: usize, max_cond: f64) -> ComplexMatrix {
    let k = max_cond.powf(rng.random::<f64>());
    with_cond(rng, n, k)
}

pub fn positive_definite(rng: &mut impl Rng, n: usize, cond: f64) -> ComplexMatrix {
    let s = spread(rng, n, cond);
    let u = unitary(rng, n);
    herm_part(&(&u * diag_real(&s) * u.adjoint()))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    herm_part(&gaussian(rng, n))
}

/// Random point on the unit circle.
pub fn phase(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}
