use thiserror::Error;

/// Domain errors raised by classification, invariants and map handling.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has degree {}, expected 3", .0.map_or("-inf".to_string(), |d| d.to_string()))]
    NotCubic(Option<u32>),
    #[error("homogeneous cubic part is zero")]
    ZeroCubicPart,
    #[error("affine map is singular (det = {0:e})")]
    SingularMap(f64),
    #[error("residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },
    #[error("no table row matched: {0}")]
    InternalDispatch(String),
    #[error("partial derivatives share a nonconstant factor")]
    NonIsolatedLocus,
    #[error("degenerate singular point: {0}")]
    Degenerate(String),
    #[error("infinitely many reducible levels")]
    ContinuumOfLevels,
    #[error("invalid sampling range {0}")]
    InvalidRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
