//! Error type shared by every layer.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} basis columns for a Lagrangian plane, got {got}")]
    NotHalfDimensional { expected: usize, got: usize },
    #[error("basis is not isotropic: max |omega(b_i, b_j)| = {residual:e}")]
    NotIsotropic { residual: f64 },
    #[error("basis columns are rank deficient (rank {rank} of {cols})")]
    RankDeficient { rank: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("eigenphase {distance:e} lies in the ambiguity band [{tol:e}, 2*{tol:e}]")]
    ToleranceAmbiguous { distance: f64, tol: f64 },
    #[error("plane is not transversal to J applied to the reference plane")]
    NotTransversal,
    #[error("could not certify a partition near s = {at} after {depth} refinements")]
    PartitionFailure { at: f64, depth: usize },
    #[error("index changed under refinement of the partition ({coarse} vs {refined})")]
    PartitionDependent { coarse: i64, refined: i64 },
    #[error("path jumps by gap {gap:e} near s = {at}")]
    DiscontinuousPath { at: f64, gap: f64 },
    #[error("no intersection with the reference plane at s = {at}")]
    NoCrossing { at: f64 },
    #[error("path is not a graph over its own plane near s = {at} (step {step:e})")]
    NotGraphRepresentable { at: f64, step: f64 },
    #[error("crossing form at s = {at} has a near-zero eigenvalue")]
    DegenerateCrossing { at: f64 },
    #[error("crossing at s = {at} is not regular")]
    IrregularCrossing { at: f64 },
    #[error("eigenvalue track {track} touches the threshold near t = {t}")]
    AmbiguousCrossing { track: usize, t: f64 },
    #[error("trace basis is not Lagrangian: residual {residual:e}")]
    NotLagrangian { residual: f64 },
    #[error("matrix is not Hermitian: residual {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),
    #[error("eigenvalue {eigenvalue:e} is within its error band {band:e} of zero")]
    MorseAmbiguous { eigenvalue: f64, band: f64 },
    #[error("Morse index at t = {t} changed from {coarse} to {fine} when the cutoff doubled")]
    TruncationNotConverged { t: f64, coarse: usize, fine: usize },
    #[error("Morse index did not stabilize before tau reached {tau_min}")]
    TauNotSmallEnough { tau_min: f64 },
    #[error("homotopy square sides do not sum to zero (total {total})")]
    SquareInconsistent { total: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::NotHalfDimensional { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidInput(_)
                | Error::NotHermitian { .. }
        )
    }

    /// Stable name of the variant for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHalfDimensional { .. } => "not_half_dimensional",
            Error::NotIsotropic { .. } => "not_isotropic",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Singular(_) => "singular",
            Error::ToleranceAmbiguous { .. } => "tolerance_ambiguous",
            Error::NotTransversal => "not_transversal",
            Error::PartitionFailure { .. } => "partition_failure",
            Error::PartitionDependent { .. } => "partition_dependent",
            Error::DiscontinuousPath { .. } => "discontinuous_path",
            Error::NoCrossing { .. } => "no_crossing",
            Error::NotGraphRepresentable { .. } => "not_graph_representable",
            Error::DegenerateCrossing { .. } => "degenerate_crossing",
            Error::IrregularCrossing { .. } => "irregular_crossing",
            Error::AmbiguousCrossing { .. } => "ambiguous_crossing",
            Error::NotLagrangian { .. } => "not_lagrangian",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::EigensolverFailure(_) => "eigensolver_failure",
            Error::MorseAmbiguous { .. } => "morse_ambiguous",
            Error::TruncationNotConverged { .. } => "truncation_not_converged",
            Error::TauNotSmallEnough { .. } => "tau_not_small_enough",
            Error::SquareInconsistent { .. } => "square_inconsistent",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
