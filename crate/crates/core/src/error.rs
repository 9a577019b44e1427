use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("degenerate quadratic form: {0}")]
    Degenerate(String),
    #[error("signature mismatch: expected ({expected_pos},{expected_neg}), got ({got_pos},{got_neg})")]
    Signature {
        expected_pos: usize,
        expected_neg: usize,
        got_pos: usize,
        got_neg: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("generation failed after {attempts} rejections: {reason}")]
    Generation { attempts: usize, reason: String },
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("path leaves the negative cone: {0}")]
    PathEscapes(String),
    #[error("vector is not regular: {0}")]
    NotRegular(String),
    #[error("optimizer failed: {0}")]
    Optimizer(String),
    #[error("degenerate plane: {0}")]
    DegeneratePlane(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("parse error: {0}")]
    Parse(String),
}
