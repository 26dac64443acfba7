use super::{antisymmetrize, symmetrize, BipolarFactors, MostowFactors, UnitarySplit};
use crate::error::{Error, Result};
use crate::geomean::dgm;
use crate::matcore::{
    conj, dlog_normal, ensure_same_dim, herm_part, pd_power, real_part, skew_hermitian_residual, tol, Branch,
    ComplexMatrix, I,
};
use crate::sylvester::{solve, SylvesterProblem};

/// Directional derivative of the Mostow factors.
#[derive(Debug, Clone)]
pub struct MostowTangent {
    pub dw: ComplexMatrix,
    pub dp1: ComplexMatrix,
    pub dp2: ComplexMatrix,
    /// W* DW, skew-Hermitian.
    pub x: ComplexMatrix,
    /// DP1 = i P1^{1/2} Y1 P1^{1/2}, Y1 real skew.
    pub y1: ComplexMatrix,
    /// DP2, real symmetric.
    pub y2: ComplexMatrix,
}

fn sylv(a: &ComplexMatrix, b: &ComplexMatrix, rhs: ComplexMatrix) -> Result<ComplexMatrix> {
    solve(&SylvesterProblem::new(a.clone(), b.clone(), rhs))
}

/// Derivative of Z -> (W, P1, P2) at Z in direction A.
pub fn d_mostow(f: &MostowFactors, z: &ComplexMatrix, a: &ComplexMatrix) -> Result<MostowTangent> {
    ensure_same_dim(z, a)?;
    let q = herm_part(&(z.adjoint() * z));
    let dq = herm_part(&(a.adjoint() * z + z.adjoint() * a));
    let g = dgm(&q, &conj(&q), &dq, &conj(&dq))?.d;
    let y2 = symmetrize(&real_part(&sylv(&f.p2, &f.p2, g)?));

    let wa = f.w.adjoint() * a - &f.p1 * &y2;
    let ff = &wa * &f.p2_inv;
    let e = &ff * &f.p1_inv;
    let dp1 = herm_part(&sylv(&f.p1_inv, &f.p1_inv, &e + e.adjoint())?);
    let x = sylv(&f.p1, &f.p1, &ff - ff.adjoint())?;
    let x = crate::matcore::skew_part(&x);

    let p1_mh = pd_power(&f.p1, -0.5)?;
    let y1 = antisymmetrize(&real_part(&(&p1_mh * &dp1 * &p1_mh * (-I))));
    Ok(MostowTangent { dw: &f.w * &x, dp1, dp2: y2.clone(), x, y1, y2 })
}

impl MostowTangent {
    /// W X P1 P2 + W P1^{1/2}(i Y1)P1^{1/2} P2 + W P1 Y2, which should equal A.
    pub fn reassemble(&self, f: &MostowFactors) -> ComplexMatrix {
        &f.w * &self.x * &f.p1 * &f.p2 + &f.w * &self.dp1 * &f.p2 + &f.w * &f.p1 * &self.y2
    }

    /// Derivatives of K = -i log P1 and S = log P2.
    pub fn exponents(&self, f: &MostowFactors) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let dk = dlog_normal(&f.p1, &self.dp1, Branch::Principal)? * (-I);
        let ds = dlog_normal(&f.p2, &self.dp2, Branch::Principal)?;
        Ok((antisymmetrize(&real_part(&dk)), symmetrize(&real_part(&ds))))
    }
}

/// Directional derivative of the unitary split along W e^{tS}.
#[derive(Debug, Clone)]
pub struct SplitTangent {
    pub dw1: ComplexMatrix,
    pub dw2: ComplexMatrix,
    /// Real skew-symmetric.
    pub x: ComplexMatrix,
    /// i times a real symmetric matrix.
    pub y: ComplexMatrix,
    pub s_dir: ComplexMatrix,
    pub dl: ComplexMatrix,
    pub dt: ComplexMatrix,
}

/// Derivative of W -> (W1, W2) in the direction W S, S skew-Hermitian.
pub fn d_unitary_split(split: &UnitarySplit, s_dir: &ComplexMatrix) -> Result<SplitTangent> {
    ensure_same_dim(&split.w2, s_dir)?;
    let residual = skew_hermitian_residual(s_dir);
    if residual > tol::CLASS {
        return Err(Error::NotSkewHermitian { residual });
    }
    let w2 = &split.w2;
    let h = split.w2_sqrt();
    let hi = h.adjoint();
    let w2_32 = w2 * &h;
    let st = s_dir.transpose();

    let x = sylv(w2, w2, w2 * s_dir - &st * w2)?;
    let x = antisymmetrize(&real_part(&x));
    let y = sylv(w2, w2, &w2_32 * s_dir * &hi + &hi * &st * &w2_32)?;
    let y = symmetrize(&real_part(&(y * (-I)))) * I;
    let dw1 = &split.w1 * &x;
    let dw2 = &h * &y * &h;

    let dl = dlog_normal(&split.w1, &dw1, split.branches.l)?;
    let dl = if split.branches.l == Branch::Principal { antisymmetrize(&real_part(&dl)) } else { dl };
    // T = -i log_beta(W2) with the window centred on the T/2 range.
    let g = split.w2_rotation();
    let rot = num_complex::Complex64::from_polar(1.0, -g);
    let dt = dlog_normal(&(w2 * rot), &(&dw2 * rot), Branch::Principal)? * (-I);
    let dt = symmetrize(&real_part(&dt));
    Ok(SplitTangent { dw1, dw2, x, y, s_dir: s_dir.clone(), dl, dt })
}

impl SplitTangent {
    /// ||W2 S W2^{-1} - X - W2^{1/2} Y W2^{-1/2}||_F
    pub fn consistency_residual(&self, split: &UnitarySplit) -> f64 {
        let h = split.w2_sqrt();
        (&split.w2 * &self.s_dir * split.w2.adjoint() - &self.x - &h * &self.y * h.adjoint()).norm()
    }
}

/// Derivatives of all four bipolar exponents and the intermediate factors.
#[derive(Debug, Clone)]
pub struct BipolarTangent {
    pub mostow: MostowTangent,
    pub split: SplitTangent,
    pub dl: ComplexMatrix,
    pub dt: ComplexMatrix,
    pub dk: ComplexMatrix,
    pub ds: ComplexMatrix,
}

pub fn d_bipolar(f: &BipolarFactors, z: &ComplexMatrix, a: &ComplexMatrix) -> Result<BipolarTangent> {
    let mostow = d_mostow(&f.mostow, z, a)?;
    let (dk, ds) = mostow.exponents(&f.mostow)?;
    let split = d_unitary_split(&f.split, &mostow.x)?;
    Ok(BipolarTangent { dl: split.dl.clone(), dt: split.dt.clone(), dk, ds, mostow, split })
}
