use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_unitary, t_part, unitary_split_with, UnitarySplit};
use crate::error::{Error, Result};
use crate::matcore::{eig, Branch, ComplexMatrix};

/// Minimum angular distance between a cut and the spectrum it must avoid.
const CLEARANCE: f64 = 1e-8;

/// Branch request as given by a caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSpec {
    Principal,
    Angle(f64),
    Auto,
}

impl std::str::FromStr for BranchSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(BranchSpec::Auto),
            "principal" => Ok(BranchSpec::Principal),
            other => {
                let a: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad branch '{other}'")))?;
                if !(-PI..0.0).contains(&a) {
                    return Err(Error::InvalidArgument(format!("branch angle {a} outside [-pi, 0)")));
                }
                Ok(BranchSpec::Angle(a))
            }
        }
    }
}

/// Branches used for T (log of W^T W) and for L (log of W1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitBranches {
    pub t: Branch,
    pub l: Branch,
}

impl SplitBranches {
    pub const PRINCIPAL: SplitBranches = SplitBranches { t: Branch::Principal, l: Branch::Principal };
}

fn arguments(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig(m)?.values.iter().map(|z| z.arg()).collect())
}

/// Angular distance from the cut of `branch` to the nearest argument.
fn clearance(args: &[f64], branch: Branch) -> f64 {
    let cut = branch.alpha().unwrap_or(PI);
    args.iter()
        .map(|&a| {
            let d = (a - cut).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Circular gaps between sorted arguments, widest first, as (start, width).
fn gaps(args: &[f64]) -> Vec<(f64, f64)> {
    let mut p: Vec<f64> = args.iter().map(|a| (a + PI).rem_euclid(2.0 * PI) - PI).collect();
    p.sort_by(f64::total_cmp);
    let m = p.len();
    let mut out: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let next = if i + 1 < m { p[i + 1] } else { p[0] + 2.0 * PI };
            (p[i], next - p[i])
        })
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    out
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// alpha in [-pi, 0) farthest from every point of `args`.
pub(crate) fn best_alpha(args: &[f64]) -> Option<f64> {
    if args.is_empty() {
        return Some(-PI / 2.0);
    }
    let mut best: Option<(f64, f64)> = None;
    for (start, width) in gaps(args) {
        let end = start + width;
        for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
            let lo = (start + shift).max(-PI);
            let hi = (end + shift).min(-1e-12);
            if lo > hi {
                continue;
            }
            let alpha = (0.5 * (start + end) + shift).clamp(lo, hi);
            let score = (alpha - start - shift).min(end + shift - alpha);
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((alpha, score));
            }
        }
    }
    best.filter(|&(_, s)| s > CLEARANCE).map(|(a, _)| a)
}

fn acceptable(split: &UnitarySplit, wtw_args: &[f64], require_real_l: bool) -> Result<bool> {
    let w1_args = arguments(&split.w1)?;
    if clearance(wtw_args, split.branches.t) <= CLEARANCE || clearance(&w1_args, split.branches.l) <= CLEARANCE {
        return Ok(false);
    }
    if require_real_l {
        return Ok(split.w1.determinant().re > 0.0);
    }
    Ok(true)
}

/// Branch selection for the unitary split.
///
/// 1. Principal logs, when both apply and det W1 = +1 (so L is real).
/// 2. Otherwise a T-branch inside the widest gap of arg(sigma(W^T W)) that
///    moves an odd number of arguments across the cut, flipping det W2 and
///    leaving W1 in SO(n); L stays principal.
/// 3. Otherwise one common alpha in [-pi, 0) as far as possible from the
///    arguments of sigma(W^T W) and sigma(W1).
pub fn auto_branches(w: &ComplexMatrix) -> Result<SplitBranches> {
    check_unitary(w)?;
    if w.nrows() == 0 {
        return Ok(SplitBranches::PRINCIPAL);
    }
    let wtw = w.transpose() * w;
    let wtw_args = arguments(&wtw)?;

    if let Ok(s) = unitary_split_with(w, SplitBranches::PRINCIPAL) {
        if acceptable(&s, &wtw_args, true)? {
            return Ok(s.branches);
        }
    }

    for (start, width) in gaps(&wtw_args) {
        if width <= 2.0 * CLEARANCE {
            break;
        }
        let alpha = wrap(start + 0.5 * width);
        let b = SplitBranches { t: Branch::Angle(alpha), l: Branch::Principal };
        if let Ok(s) = unitary_split_with(w, b) {
            if acceptable(&s, &wtw_args, true)? {
                return Ok(b);
            }
        }
    }

    let mut alpha = best_alpha(&wtw_args).ok_or(Error::BranchExhausted)?;
    for _ in 0..8 {
        let branch = Branch::Angle(alpha);
        let (_, _, w1) = match t_part(w, branch) {
            Ok(parts) => parts,
            Err(_) => break,
        };
        let w1_args = arguments(&w1)?;
        if clearance(&wtw_args, branch) > CLEARANCE && clearance(&w1_args, branch) > CLEARANCE {
            return Ok(SplitBranches { t: branch, l: branch });
        }
        let mut pts = wtw_args.clone();
        pts.extend(w1_args);
        match best_alpha(&pts) {
            Some(a) if (a - alpha).abs() > 1e-14 => alpha = a,
            _ => break,
        }
    }
    Err(Error::BranchExhausted)
}
