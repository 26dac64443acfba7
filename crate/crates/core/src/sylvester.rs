//! Dense Sylvester equations A X + X B = R.

use crate::error::{Error, Result};
use crate::matcore::quad::integrate;
use crate::matcore::{ensure_finite, ensure_same_dim, norm2, r, schur, tol, ComplexMatrix, Envelope};

#[derive(Debug, Clone)]
pub struct SylvesterProblem {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub r: ComplexMatrix,
}

impl SylvesterProblem {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, r: ComplexMatrix) -> Self {
        SylvesterProblem { a, b, r }
    }

    fn check(&self) -> Result<()> {
        ensure_same_dim(&self.a, &self.b)?;
        ensure_same_dim(&self.a, &self.r)?;
        ensure_finite(&self.a)?;
        ensure_finite(&self.b)?;
        ensure_finite(&self.r)
    }

    /// ||A X + X B - R||_F
    pub fn residual(&self, x: &ComplexMatrix) -> f64 {
        (&self.a * x + x * &self.b - &self.r).norm()
    }
}

/// Solve A X + X B = R by Bartels-Stewart on complex Schur forms.
pub fn solve(p: &SylvesterProblem) -> Result<ComplexMatrix> {
    p.check()?;
    let n = p.a.nrows();
    if n == 0 {
        return Ok(p.r.clone());
    }
    let sa = schur(&p.a)?;
    let sb = schur(&p.b)?;
    let la = sa.eigenvalues();
    let lb = sb.eigenvalues();
    let mut sep = f64::INFINITY;
    for x in &la {
        for y in &lb {
            sep = sep.min((x + y).norm());
        }
    }
    if sep <= tol::SEP * (norm2(&p.a) + norm2(&p.b)) {
        return Err(Error::SpectraOverlap { separation: sep });
    }
    let ta = &sa.t;
    let tb = &sb.t;
    let f = sa.q.adjoint() * &p.r * &sb.q;
    let mut y = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        // (Ta + tb_jj I) y_j = f_j - sum_{k<j} tb_kj y_k
        let mut rhs: Vec<_> = (0..n).map(|i| f[(i, j)]).collect();
        for k in 0..j {
            let c = tb[(k, j)];
            if c != r(0.0) {
                for (i, v) in rhs.iter_mut().enumerate() {
                    *v -= c * y[(i, k)];
                }
            }
        }
        let shift = tb[(j, j)];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for k in (i + 1)..n {
                acc -= ta[(i, k)] * y[(k, j)];
            }
            y[(i, j)] = acc / (ta[(i, i)] + shift);
        }
    }
    Ok(&sa.q * y * sb.q.adjoint())
}

/// The integral of e^{-tA} R e^{-tB} over [0, inf), evaluated by quadrature.
/// Serves as an independent oracle for `solve`.
pub fn integral_solution(p: &SylvesterProblem) -> Result<ComplexMatrix> {
    p.check()?;
    let n = p.a.nrows();
    if n == 0 {
        return Ok(p.r.clone());
    }
    let sa = schur(&p.a)?;
    let sb = schur(&p.b)?;
    let ea = Envelope::from_schur(&sa);
    let eb = Envelope::from_schur(&sb);
    let min_re = ea.lambda_hat.min(eb.lambda_hat);
    if min_re <= 0.0 {
        return Err(Error::DivergentIntegral { min_re });
    }
    let rate = ea.lambda_hat + eb.lambda_hat;
    let rnorm = p.r.norm();
    // ||X|| >= ||R|| / (||A|| + ||B||) for the exact solution.
    let scale = rnorm / (norm2(&p.a) + norm2(&p.b));
    let target = 1e-3 * tol::QUAD * scale;
    let mut horizon = 1.0 / rate;
    let mut guard = 0;
    while rnorm * ea.tail_product(&eb, horizon) > target {
        horizon *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NoConvergence);
        }
    }
    let panels = ((horizon * rate).ceil() as usize).clamp(1, 256);
    let bps: Vec<f64> = (0..=panels).map(|k| horizon * k as f64 / panels as f64).collect();
    let f = sa.q.adjoint() * &p.r * &sb.q;
    let integrand = |t: f64| -> ComplexMatrix { (&sa.t * r(-t)).exp() * &f * (&sb.t * r(-t)).exp() };
    let q = integrate(integrand, &bps, target, 1e-12, 8000);
    if !q.converged {
        return Err(Error::NoConvergence);
    }
    Ok(&sa.q * q.value * sb.q.adjoint())
}
