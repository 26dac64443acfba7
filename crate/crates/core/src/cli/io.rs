use serde::{Deserialize, Serialize};

use crate::matcore::{serde_matrix, tol, ComplexMatrix, NormKind};

/// On-disk matrix: row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixFile { rows: m.nrows(), cols: m.ncols(), data: serde_matrix::to_rows(m) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.data.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err("non-finite entry".into());
        }
        serde_matrix::from_rows(self.rows, self.cols, &self.data)
    }
}

pub fn parse_matrix_file(text: &str) -> Result<ComplexMatrix, String> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_matrix()
}

pub fn render_matrix_file(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("matrix serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Decomposition,
    Bounds,
    Trial,
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eig: f64,
    pub fun: f64,
    pub class: f64,
    pub sing: f64,
    pub quad: f64,
    pub sep: f64,
    pub syl: f64,
    pub dec: f64,
    pub cond_cap: f64,
    pub fourier: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig: tol::EIG,
            fun: tol::FUN,
            class: tol::CLASS,
            sing: tol::SING,
            quad: tol::QUAD,
            sep: tol::SEP,
            syl: tol::SYL,
            dec: tol::DEC,
            cond_cap: tol::COND_CAP,
            fourier: tol::FOURIER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool_version: String,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub norm_kind: Option<NormKind>,
    /// Branch request or the branches actually used.
    pub branch: Option<serde_json::Value>,
}

impl Meta {
    pub fn new() -> Self {
        Meta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: Tolerances::default(),
            seed: None,
            norm_kind: None,
            branch: None,
        }
    }
}

impl Default for Meta {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: ReportKind,
    pub meta: Meta,
    pub payload: serde_json::Value,
    pub error: Option<ErrorInfo>,
}

pub fn parse_report(text: &str) -> Result<Report, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn render_report(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}
