use serde::Serialize;
use thiserror::Error;

use crate::core::Face;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed face {0}: repeated vertex")]
    MalformedFace(String),
    #[error("invalid vertex label {0:?}")]
    InvalidLabel(String),
    #[error("face {0} is not in the complex")]
    FaceNotInComplex(Face),
    #[error("vertex {0} is not in the complex")]
    VertexNotInComplex(String),
    #[error("vertex label {0} is already in use")]
    LabelCollision(String),
    #[error("vertex sets overlap: {0}")]
    OverlappingLabels(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex {0} has no color")]
    Uncolored(String),
    #[error("improper coloring: edge {0} is monochromatic")]
    ImproperColoring(Face),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("subdividing a vertex is a no-op: {0}")]
    NoOpSubdivision(Face),
    #[error("{0} is not a subdivision vertex")]
    NotSubdivisionVertex(String),
    #[error("ambiguous weld at {0}: {1} candidate faces")]
    AmbiguousWeld(String, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("not an elementary shelling step: {0}")]
    NotElementaryShelling(String),
    #[error("flip ({a}, {b}) is not applicable: {reason}")]
    InapplicableFlip { a: Face, b: Face, reason: String },
    #[error("cross-flip is not applicable: {0}")]
    InapplicableCrossFlip(String),
    #[error("invalid simplicial poset: {0}")]
    InvalidPoset(String),
    #[error("invalid pseudo-cobordism: {0}")]
    InvalidCobordism(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("PL type mismatch: {0}")]
    PlTypeMismatch(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

/// Machine-readable form of an error, as printed by the command-line tool.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub message: String,
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedFace(_) => "malformed_face",
            Error::InvalidLabel(_) => "invalid_label",
            Error::FaceNotInComplex(_) => "face_not_in_complex",
            Error::VertexNotInComplex(_) => "vertex_not_in_complex",
            Error::LabelCollision(_) => "label_collision",
            Error::OverlappingLabels(_) => "overlapping_labels",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Uncolored(_) => "uncolored_vertex",
            Error::ImproperColoring(_) => "improper_coloring",
            Error::NotSubcomplex(_) => "not_subcomplex",
            Error::NoOpSubdivision(_) => "noop_subdivision",
            Error::NotSubdivisionVertex(_) => "not_subdivision_vertex",
            Error::AmbiguousWeld(..) => "ambiguous_weld",
            Error::Precondition(_) => "precondition",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::NotElementaryShelling(_) => "not_elementary_shelling",
            Error::InapplicableFlip { .. } => "inapplicable_flip",
            Error::InapplicableCrossFlip(_) => "inapplicable_cross_flip",
            Error::InvalidPoset(_) => "invalid_poset",
            Error::InvalidCobordism(_) => "invalid_cobordism",
            Error::Internal(_) => "internal",
            Error::PlTypeMismatch(_) => "pl_type_mismatch",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord { kind: self.kind(), message: self.to_string() }
    }
}
