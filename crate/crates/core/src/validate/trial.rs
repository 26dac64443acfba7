use serde::{Deserialize, Serialize};

use super::rng::{stream, unit_direction};
use crate::bounds::{bipolar_bounds_for, BipolarBoundReport};
use crate::decompose::{bipolar, bipolar_with, BipolarFactors, BranchSpec, SplitBranches};
use crate::error::Result;
use crate::matcore::{norm, r, serde_matrix, ComplexMatrix, NormKind};

/// Step sizes used when none are given.
pub const EPSILONS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Allowed excess of drift / (bound * eps) over 1 at the smallest surviving eps.
pub const SLACK: f64 = 0.05;

pub const FACTORS: [&str; 7] = ["W", "P1", "P2", "L", "T", "K", "S"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub factor: String,
    pub drift: f64,
    /// b_F * eps * |||A|||.
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRow {
    pub epsilon: f64,
    /// Reason the perturbed decomposition failed, if it did.
    pub skipped: Option<String>,
    pub factors: Vec<FactorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTrial {
    #[serde(with = "serde_matrix")]
    pub z: ComplexMatrix,
    #[serde(with = "serde_matrix")]
    pub direction: ComplexMatrix,
    pub seed: u64,
    pub norm_kind: NormKind,
    pub branches: SplitBranches,
    pub rows: Vec<EpsilonRow>,
}

impl PerturbationTrial {
    /// Smallest eps whose perturbed decomposition succeeded.
    pub fn decisive_row(&self) -> Option<&EpsilonRow> {
        self.rows
            .iter()
            .filter(|row| row.skipped.is_none())
            .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
    }

    /// (factor, ratio) pairs above 1 + SLACK on the decisive row.
    pub fn violations(&self) -> Vec<(&str, f64, f64)> {
        self.decisive_row()
            .map(|row| {
                row.factors
                    .iter()
                    .filter(|f| f.ratio > 1.0 + SLACK)
                    .map(|f| (f.factor.as_str(), row.epsilon, f.ratio))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn passed(&self) -> bool {
        self.decisive_row().is_some() && self.violations().is_empty()
    }

    pub fn worst_ratio(&self) -> f64 {
        self.decisive_row()
            .map(|row| row.factors.iter().map(|f| f.ratio).fold(0.0, f64::max))
            .unwrap_or(f64::NAN)
    }
}

fn factor_values(f: &BipolarFactors) -> [&ComplexMatrix; 7] {
    [&f.mostow.w, &f.mostow.p1, &f.mostow.p2, &f.l, &f.t, &f.k, &f.s]
}

fn bound_values(b: &BipolarBoundReport) -> [f64; 7] {
    [b.mostow.b_w, b.mostow.b_p1, b.mostow.b_p2, b.b_l, b.b_t, b.b_k, b.b_s]
}

pub fn run_trial(z: &ComplexMatrix, seed: u64, norm_kind: NormKind) -> Result<PerturbationTrial> {
    run_trial_with(z, seed, norm_kind, &EPSILONS)
}

/// Random unit direction A (stream (seed, 0)); drifts of the seven factors
/// at Z + eps A with the branches of Z held fixed.
pub fn run_trial_with(z: &ComplexMatrix, seed: u64, norm_kind: NormKind, epsilons: &[f64]) -> Result<PerturbationTrial> {
    let f = bipolar(z, BranchSpec::Auto)?;
    let bounds = bipolar_bounds_for(z, &f, norm_kind)?;
    let a = unit_direction(&mut stream(seed, 0), z.nrows(), norm_kind);
    let a_norm = norm(&a, norm_kind);
    let base = factor_values(&f);
    let b = bound_values(&bounds);
    let rows = epsilons
        .iter()
        .map(|&eps| match bipolar_with(&(z + &a * r(eps)), f.branches) {
            Err(e) => EpsilonRow { epsilon: eps, skipped: Some(e.to_string()), factors: Vec::new() },
            Ok(g) => {
                let factors = factor_values(&g)
                    .iter()
                    .zip(base.iter())
                    .zip(b.iter().zip(FACTORS))
                    .map(|((new, old), (&bf, name))| {
                        let drift = norm(&(*new - *old), norm_kind);
                        let bound = bf * eps * a_norm;
                        FactorRecord { factor: name.to_string(), drift, bound, ratio: drift / bound }
                    })
                    .collect();
                EpsilonRow { epsilon: eps, skipped: None, factors }
            }
        })
        .collect();
    Ok(PerturbationTrial { z: z.clone(), direction: a, seed, norm_kind, branches: f.branches, rows })
}
