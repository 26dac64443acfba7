use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample count of the periodic grid on [-pi, pi).
pub const GRID: usize = 1 << 18;

/// Smallest admissible distance of delta from pi.
pub const TOL_ANGLE: f64 = 1e-8;

const REPRODUCTION_SAMPLES: usize = 64;

/// Coefficients a_n with sum (-1)^n a_n e^{in theta} = 1/(1 + e^{i theta})
/// on (-delta, delta), built from the piecewise function `f`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierSequence {
    pub delta: f64,
    pub n_trunc: usize,
    /// a_{-N}, ..., a_N.
    #[serde(skip)]
    pub coefficients: Vec<Complex64>,
    /// 2 (sum |a_n| + tail_estimate).
    pub double_l1_sum: f64,
    pub tail_estimate: f64,
    pub analytic_cap: f64,
    /// Max reproduction error over 64 points of (-delta, delta).
    pub reproduction_error: f64,
}

impl FourierSequence {
    pub fn a(&self, n: i64) -> Complex64 {
        let k = n + self.n_trunc as i64;
        if k < 0 || k as usize >= self.coefficients.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[k as usize]
        }
    }

    /// sum (-1)^n a_n e^{in theta}
    pub fn eval(&self, theta: f64) -> Complex64 {
        let n0 = -(self.n_trunc as i64);
        let step = Complex64::from_polar(1.0, theta + PI);
        let mut e = Complex64::from_polar(1.0, (theta + PI) * n0 as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in &self.coefficients {
            acc += a * e;
            e *= step;
        }
        acc
    }

    /// Max |eval(theta) - 1/(1 + e^{i theta})| over the given points.
    pub fn max_error(&self, thetas: &[f64]) -> f64 {
        thetas
            .iter()
            .map(|&t| (self.eval(t) - target(t)).norm())
            .fold(0.0, f64::max)
    }
}

fn target(theta: f64) -> Complex64 {
    Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, theta))
}

/// Piecewise f on [-pi, pi]; the middle piece equals 1/(1 + e^{i theta}).
pub fn f(theta: f64, delta: f64) -> Complex64 {
    let h = (0.5 * delta).tan();
    let im = if theta <= -delta {
        h * (theta + PI) / (2.0 * (PI - delta))
    } else if theta < delta {
        -0.5 * (0.5 * theta).tan()
    } else {
        0.5 * h * (-1.0 + (theta - delta) / (PI - delta))
    };
    Complex64::new(0.5, im)
}

/// 1 + (pi/sqrt 3) sqrt(2 tan^2(d/2)/(pi - d) + tan^2(d/2)/3 + tan(d/2)).
pub fn analytic_cap(delta: f64) -> f64 {
    let h = (0.5 * delta).tan();
    1.0 + PI / 3f64.sqrt() * (2.0 * h * h / (PI - delta) + h * h / 3.0 + h).sqrt()
}

/// Constant M with |b_n| <= M / n^2, from the jumps of f' and the total
/// variation of f''.
fn decay_constant(delta: f64) -> f64 {
    let h = (0.5 * delta).tan();
    let sec2 = 1.0 + h * h;
    let jump = 0.25 * sec2 + h / (2.0 * (PI - delta));
    (2.0 * jump + 0.5 * h * h) / (2.0 * PI)
}

pub fn fourier_an(delta: f64, tol: f64) -> Result<FourierSequence> {
    if !(delta > 0.0 && delta < PI - TOL_ANGLE) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let mut buf: Vec<Complex64> = (0..GRID)
        .map(|k| f(-PI + 2.0 * PI * k as f64 / GRID as f64, delta))
        .collect();
    FftPlanner::new().plan_fft_forward(GRID).process(&mut buf);

    let m = decay_constant(delta);
    let max_n = GRID / 2 - 1;
    // smallest N whose tail bound 2M/N meets tol, limited by the grid
    let n_trunc = ((2.0 * m / tol).ceil() as usize).clamp(1, max_n);
    let scale = 1.0 / GRID as f64;
    let coefficients: Vec<Complex64> = (-(n_trunc as i64)..=n_trunc as i64)
        .map(|n| buf[n.rem_euclid(GRID as i64) as usize] * scale)
        .collect();
    // truncation tail plus the same amount for aliasing of the DFT
    let tail_estimate = 2.0 * (2.0 * m / n_trunc as f64);
    let l1: f64 = coefficients.iter().map(|a| a.norm()).sum();
    let mut seq = FourierSequence {
        delta,
        n_trunc,
        coefficients,
        double_l1_sum: 2.0 * (l1 + tail_estimate),
        tail_estimate,
        analytic_cap: analytic_cap(delta),
        reproduction_error: 0.0,
    };
    let thetas: Vec<f64> = (0..REPRODUCTION_SAMPLES)
        .map(|j| -delta + 2.0 * delta * (j as f64 + 0.5) / REPRODUCTION_SAMPLES as f64)
        .collect();
    seq.reproduction_error = seq.max_error(&thetas);
    Ok(seq)
}
