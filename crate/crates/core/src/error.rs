use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric space: {0}")]
    InvalidSpace(String),

    #[error("index {index} out of range for a space with {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown point label `{0}`")]
    UnknownLabel(String),

    #[error("operands live over different metric spaces")]
    SpaceMismatch,

    #[error("empty set where a nonempty one is required: {0}")]
    EmptySet(&'static str),

    #[error("base point must belong to the subset")]
    BaseNotInSubset,

    #[error("function does not vanish at the base point")]
    NonzeroAtBase,

    #[error("no separating function: point {0} lies in the set or is the base point")]
    NotSeparable(usize),

    #[error("molecule needs two distinct points, got {0} twice")]
    DegenerateMolecule(usize),

    #[error("coefficient {0} is not an integer")]
    NonInteger(String),

    #[error("map is not a retraction: image of {point} is not fixed")]
    NotRetraction { point: usize },

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("basis is not a basis of the free space: {0}")]
    InvalidBasis(String),

    #[error("linear map is not invertible")]
    Singular,

    #[error("scale must be positive and radii ordered (R >= r > 0)")]
    InvalidScale,

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
