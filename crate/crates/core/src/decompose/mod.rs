//! Mostow, unitary-split and bipolar factorizations and their tangent maps.

mod branch;
mod tangent;

pub use branch::{auto_branches, BranchSpec, SplitBranches};
pub use tangent::{d_bipolar, d_mostow, d_unitary_split, BipolarTangent, MostowTangent, SplitTangent};

use crate::error::{Error, Result};
use crate::matcore::{
    cond, eig_hermitian, ensure_finite, ensure_square, herm_part, mexp, mlog, r, real_part,
    tol, unitary_residual, Branch, ComplexMatrix, I,
};

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.transpose()) * r(0.5)
}

fn antisymmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m - m.transpose()) * r(0.5)
}

/// Z = W e^{iK} e^S with P1 = e^{iK}, P2 = e^S.
#[derive(Debug, Clone)]
pub struct MostowFactors {
    pub w: ComplexMatrix,
    pub k: ComplexMatrix,
    pub s: ComplexMatrix,
    pub p1: ComplexMatrix,
    pub p2: ComplexMatrix,
    pub p1_inv: ComplexMatrix,
    pub p2_inv: ComplexMatrix,
    pub branch: Branch,
}

impl MostowFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.w * &self.p1 * &self.p2
    }
}

fn check_nonsingular(z: &ComplexMatrix) -> Result<f64> {
    ensure_square(z)?;
    ensure_finite(z)?;
    let k = cond(z)?;
    if k >= tol::COND_CAP {
        return Err(Error::IllConditioned { cond: k, cap: tol::COND_CAP });
    }
    Ok(k)
}

/// Mostow factorization.
///
/// P2 is the square root of Z*Z # conj(Z*Z); W and P1 come from the polar
/// decomposition of Z P2^{-1} = W P1. The exponents K and S are then
/// projected onto their structure and polished by Newton steps.
pub fn mostow(z: &ComplexMatrix) -> Result<MostowFactors> {
    check_nonsingular(z)?;
    let n = z.nrows();
    if n == 0 {
        let e = z.clone();
        return Ok(MostowFactors {
            w: e.clone(), k: e.clone(), s: e.clone(), p1: e.clone(), p2: e.clone(),
            p1_inv: e.clone(), p2_inv: e, branch: Branch::Principal,
        });
    }
    // Z*Z # conj(Z*Z) = Z* |conj(Z) Z^{-1}| Z by congruence invariance, so
    // P2 = |B| with B = |Y|^{1/2} Z and Y = conj(Z) Z^{-1}. This never forms
    // Z*Z and keeps the error proportional to cond(Z), not cond(Z)^2.
    let yt = z
        .transpose()
        .lu()
        .solve(&z.adjoint())
        .ok_or(Error::SingularMatrix { ratio: 0.0 })?;
    let ysvd = yt.transpose().svd(false, true);
    let yv_t = ysvd.v_t.expect("v_t requested");
    let mut bmat = yv_t.clone();
    for i in 0..n {
        bmat.row_mut(i).scale_mut(ysvd.singular_values[i].sqrt());
    }
    let bmat = bmat * z;
    let bsvd = bmat.svd(false, true);
    let bv_t = bsvd.v_t.expect("v_t requested");
    let bsig: Vec<f64> = bsvd.singular_values.iter().copied().collect();
    let spectral = |f: &dyn Fn(f64) -> f64| -> ComplexMatrix {
        let mut m = bv_t.adjoint();
        for (j, &sj) in bsig.iter().enumerate() {
            m.column_mut(j).scale_mut(f(sj));
        }
        symmetrize(&real_part(&(m * &bv_t)))
    };
    let p2_inv = spectral(&|x| 1.0 / x);
    let s = spectral(&|x| x.ln());

    let y = z * &p2_inv;
    let svd = y.svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let mut logs = vt.adjoint();
    for j in 0..n {
        logs.column_mut(j).scale_mut(svd.singular_values[j].ln());
    }
    // K = -i log P1, real skew-symmetric.
    let k = antisymmetrize(&real_part(&(logs * &vt * (-I))));
    let mut f = structured(&u * &vt, k, s);

    // Newton steps on Z = W e^{iK} e^S using the exact tangent map; each
    // step keeps every factor exactly structured.
    let scale = z.norm();
    let mut residual = (z - f.reconstruct()).norm();
    for _ in 0..4 {
        if residual <= 4.0 * f64::EPSILON * scale {
            break;
        }
        let z0 = f.reconstruct();
        let t = d_mostow(&f, &z0, &(z - &z0))?;
        let (dk, ds) = t.exponents(&f)?;
        let next = structured(&f.w * mexp(&t.x), &f.k + dk, &f.s + ds);
        let r = (z - next.reconstruct()).norm();
        if r >= residual {
            break;
        }
        f = next;
        residual = r;
    }
    Ok(f)
}

fn structured(w: ComplexMatrix, k: ComplexMatrix, s: ComplexMatrix) -> MostowFactors {
    let ik = &k * I;
    MostowFactors {
        p1: herm_part(&mexp(&ik)),
        p1_inv: herm_part(&mexp(&(-&ik))),
        p2: symmetrize(&real_part(&mexp(&s))),
        p2_inv: symmetrize(&real_part(&mexp(&(-&s)))),
        w,
        k,
        s,
        branch: Branch::Principal,
    }
}

/// W = W1 W2 = e^L e^{iT}, W1 real orthogonal, W2 symmetric unitary.
#[derive(Debug, Clone)]
pub struct UnitarySplit {
    pub w1: ComplexMatrix,
    pub w2: ComplexMatrix,
    pub l: ComplexMatrix,
    pub t: ComplexMatrix,
    pub branches: SplitBranches,
}

impl UnitarySplit {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.w1 * &self.w2
    }

    /// e^{iT/2}, the square root of W2 consistent with T.
    pub fn w2_sqrt(&self) -> ComplexMatrix {
        mexp(&(&self.t * (I * 0.5)))
    }

    /// Rotation angle g such that e^{-ig} W2 has its spectrum in the open
    /// right half plane, namely T/2-window centre.
    pub fn w2_rotation(&self) -> f64 {
        match self.branches.t {
            Branch::Principal => 0.0,
            Branch::Angle(a) => 0.5 * a + std::f64::consts::FRAC_PI_2,
        }
    }

    /// Arguments of the eigenvalues of W2 (the eigenvalues of T).
    pub fn w2_arguments(&self) -> Vec<f64> {
        eig_hermitian(&self.t).values.iter().map(|z| z.re).collect()
    }
}

fn log_on(m: &ComplexMatrix, branch: Branch, which: &'static str) -> Result<ComplexMatrix> {
    mlog(m, branch).map_err(|e| match e {
        Error::BranchCut { .. } | Error::SegmentSingular { .. } => Error::EigenvalueOnCut { which },
        other => other,
    })
}

pub fn check_unitary(w: &ComplexMatrix) -> Result<()> {
    ensure_square(w)?;
    ensure_finite(w)?;
    let residual = unitary_residual(w);
    if residual > tol::CLASS {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Unitary split with the same branch for both logarithms.
pub fn unitary_split(w: &ComplexMatrix, branch: Branch) -> Result<UnitarySplit> {
    unitary_split_with(w, SplitBranches { t: branch, l: branch })
}

/// Unitary split with separate branches for T and L:
/// T = log_t(W^T W)/(2i), W2 = e^{iT}, W1 = W W2*, L = log_l(W1).
pub fn unitary_split_with(w: &ComplexMatrix, branches: SplitBranches) -> Result<UnitarySplit> {
    let (t, w2, w1) = t_part(w, branches.t)?;
    let mut l = log_on(&w1, branches.l, "W1")?;
    if branches.l == Branch::Principal {
        l = antisymmetrize(&real_part(&l));
    }
    Ok(UnitarySplit { w1, w2, l, t, branches })
}

/// (T, W2, W1) for a given T-branch; W1 does not depend on the L-branch.
pub(crate) fn t_part(w: &ComplexMatrix, branch: Branch) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    check_unitary(w)?;
    let wtw = symmetrize(&(w.transpose() * w));
    let log_wtw = log_on(&wtw, branch, "W^T W")?;
    let t = symmetrize(&real_part(&(log_wtw * (I * -0.5))));
    let w2 = symmetrize(&mexp(&(&t * I)));
    let w1 = real_part(&(w * w2.adjoint()));
    Ok((t, w2, w1))
}

/// Unitary split under a branch request (`Auto` applies the selection policy).
pub fn unitary_split_spec(w: &ComplexMatrix, spec: BranchSpec) -> Result<UnitarySplit> {
    match spec {
        BranchSpec::Principal => unitary_split(w, Branch::Principal),
        BranchSpec::Angle(a) => unitary_split(w, Branch::Angle(a)),
        BranchSpec::Auto => unitary_split_with(w, auto_branches(w)?),
    }
}

/// Z = e^L e^{iT} e^{iK} e^S.
#[derive(Debug, Clone)]
pub struct BipolarFactors {
    pub l: ComplexMatrix,
    pub t: ComplexMatrix,
    pub k: ComplexMatrix,
    pub s: ComplexMatrix,
    pub branches: SplitBranches,
    pub mostow: MostowFactors,
    pub split: UnitarySplit,
}

impl BipolarFactors {
    /// e^L e^{iT} e^{iK} e^S recomputed from the four exponents.
    pub fn reconstruct(&self) -> ComplexMatrix {
        mexp(&self.l) * mexp(&(&self.t * I)) * mexp(&(&self.k * I)) * mexp(&self.s)
    }
}

pub fn bipolar(z: &ComplexMatrix, spec: BranchSpec) -> Result<BipolarFactors> {
    let m = mostow(z)?;
    let split = unitary_split_spec(&m.w, spec)?;
    Ok(from_parts(m, split))
}

/// Bipolar factors with the branches held fixed (used along perturbation paths).
pub fn bipolar_with(z: &ComplexMatrix, branches: SplitBranches) -> Result<BipolarFactors> {
    let m = mostow(z)?;
    let split = unitary_split_with(&m.w, branches)?;
    Ok(from_parts(m, split))
}

fn from_parts(m: MostowFactors, split: UnitarySplit) -> BipolarFactors {
    BipolarFactors {
        l: split.l.clone(),
        t: split.t.clone(),
        k: m.k.clone(),
        s: m.s.clone(),
        branches: split.branches,
        mostow: m,
        split,
    }
}

/// Relative reconstruction residual ||Z - F|| / ||Z||.
pub fn relative_residual(z: &ComplexMatrix, f: &ComplexMatrix) -> f64 {
    let s = z.norm();
    if s == 0.0 {
        (z - f).norm()
    } else {
        (z - f).norm() / s
    }
}

#[cfg(test)]
mod tests;
