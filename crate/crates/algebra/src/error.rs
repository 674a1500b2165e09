use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("shape mismatch at degree {degree}: {detail}")]
    Shape { degree: i32, detail: String },
    #[error("not a chain map: residual {residual} at degree {degree}")]
    NotChainMap { degree: i32, residual: f64 },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
