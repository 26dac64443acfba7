use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is numerically singular (sigma_min/sigma_max = {ratio:e})")]
    SingularMatrix { ratio: f64 },
    #[error("matrix is too ill-conditioned (cond = {cond:e}, cap = {cap:e})")]
    IllConditioned { cond: f64, cap: f64 },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive definite (lambda_min = {lambda_min:e})")]
    NotPositiveDefinite { lambda_min: f64 },
    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("direction is not skew-Hermitian (residual {residual:e})")]
    NotSkewHermitian { residual: f64 },
    #[error("eigenvalue {re:e}{im:+e}i lies on the logarithm branch cut")]
    BranchCut { re: f64, im: f64 },
    #[error("spectrum is not real positive (eigenvalue {re:e}{im:+e}i)")]
    SpectrumNotPositive { re: f64, im: f64 },
    #[error("integral diverges: spectral abscissa {min_re:e} is not positive")]
    DivergentIntegral { min_re: f64 },
    #[error("decay-integral mode not applicable: {0}")]
    ModeInapplicable(&'static str),
    #[error("resolvent t(A-I)+I is singular on [0,1] (eigenvalue {re:e}{im:+e}i)")]
    SegmentSingular { re: f64, im: f64 },
    #[error("Sylvester spectra overlap (min |lambda_i + mu_j| = {separation:e})")]
    SpectraOverlap { separation: f64 },
    #[error("matrices do not commute (residual {residual:e})")]
    NotCommuting { residual: f64 },
    #[error("-1 is (numerically) an eigenvalue of {which}")]
    EigenvalueOnCut { which: &'static str },
    #[error("no admissible branch angle found")]
    BranchExhausted,
    #[error("delta = {0} outside the admissible range")]
    DeltaOutOfRange(f64),
    #[error("eigenvalue-argument spread too wide (delta = {0} >= pi)")]
    SpreadTooWide(f64),
    #[error("bipolar hypothesis violated: -1 within {distance:e} of the spectrum")]
    HypothesisViolated { distance: f64 },
    #[error("map is not linear (relative defect {defect:e})")]
    NotLinear { defect: f64 },
    #[error("map undefined at a finite-difference node: {0}")]
    MapUndefined(Box<Error>),
    #[error("eigendecomposition did not converge")]
    NoConvergence,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code written into CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NOT_SQUARE",
            Error::DimensionMismatch { .. } => "DIMENSION",
            Error::NonFinite => "NON_FINITE",
            Error::SingularMatrix { .. } => "SINGULAR",
            Error::IllConditioned { .. } => "ILL_CONDITIONED",
            Error::NotHermitian { .. } => "NOT_HERMITIAN",
            Error::NotPositiveDefinite { .. } => "NOT_PD",
            Error::NotUnitary { .. } => "NOT_UNITARY",
            Error::NotSkewHermitian { .. } => "NOT_SKEW_HERMITIAN",
            Error::BranchCut { .. } => "BRANCH_CUT",
            Error::SpectrumNotPositive { .. } => "SPECTRUM_NOT_POSITIVE",
            Error::DivergentIntegral { .. } => "DIVERGENT",
            Error::ModeInapplicable(_) => "MODE_INAPPLICABLE",
            Error::SegmentSingular { .. } => "SEGMENT_SINGULAR",
            Error::SpectraOverlap { .. } => "SPECTRA_OVERLAP",
            Error::NotCommuting { .. } => "NOT_COMMUTING",
            Error::EigenvalueOnCut { .. } => "EIGENVALUE_ON_CUT",
            Error::BranchExhausted => "BRANCH_EXHAUSTED",
            Error::DeltaOutOfRange(_) => "DELTA_RANGE",
            Error::SpreadTooWide(_) => "SPREAD_TOO_WIDE",
            Error::HypothesisViolated { .. } => "HYPOTHESIS",
            Error::NotLinear { .. } => "NOT_LINEAR",
            Error::MapUndefined(_) => "MAP_UNDEFINED",
            Error::NoConvergence => "NO_CONVERGENCE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}
