use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::k_of_z;
use crate::decompose::mostow;
use crate::error::{Error, Result};
use crate::matcore::{diag_real, norm2, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub t: f64,
    /// ||e^{-S}|| k(Z) through mostow and the bound pipeline.
    pub f_n: f64,
    /// (1/2) ||e^{-S}|| (1 + k(Z)).
    pub g_n: f64,
    pub f_closed: f64,
    pub g_closed: f64,
}

impl SweepRow {
    /// Relative disagreement between pipeline and closed form.
    pub fn mismatch(&self) -> f64 {
        ((self.f_n - self.f_closed) / self.f_closed)
            .abs()
            .max(((self.g_n - self.g_closed) / self.g_closed).abs())
    }
}

/// Z_n(t) = diag(e^{sin t}, e^{sin(t + pi/n)}).
pub fn zn(n: usize, t: f64) -> ComplexMatrix {
    diag_real(&[t.sin().exp(), (t + PI / n as f64).sin().exp()])
}

/// Closed forms of f_n and g_n for the diagonal family.
pub fn zn_closed_form(n: usize, t: f64) -> (f64, f64) {
    let (a, b) = (t.sin(), (t + PI / n as f64).sin());
    let minus = (-a).exp().max((-b).exp());
    let plus = a.exp().max(b.exp());
    let quartic = (-4.0 * a).exp().max((-4.0 * b).exp()) * (4.0 * a).exp().max((4.0 * b).exp());
    let f = 0.5 * minus * minus * plus * (1.0 + quartic);
    // k = f / ||e^{-S}||
    let g = 0.5 * minus * (1.0 + f / minus);
    (f, g)
}

pub fn zn_row(n: usize, t: f64) -> Result<SweepRow> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let z = zn(n, t);
    let m = mostow(&z)?;
    let k = k_of_z(&z)?;
    let e_s = norm2(&m.p2_inv);
    let (f_closed, g_closed) = zn_closed_form(n, t);
    Ok(SweepRow { n, t, f_n: e_s * k, g_n: 0.5 * e_s * (1.0 + k), f_closed, g_closed })
}

/// `steps` points from t_min to t_max inclusive; a single step gives t_min.
pub fn linspace(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => (0..steps)
            .map(|j| t_min + (t_max - t_min) * j as f64 / (steps - 1) as f64)
            .collect(),
    }
}
