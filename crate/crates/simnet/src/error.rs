use thiserror::Error;
use tpir_core::wire::ParseError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] tpir_core::Error),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{dropped} silent databases but at most M - N = {allowed} may fail")]
    TooManyDropped { dropped: usize, allowed: usize },

    #[error("database {0} does not exist")]
    UnknownNode(usize),

    #[error("database {0} listed twice")]
    DuplicateNode(usize),

    #[error("only {got} databases answered, need {needed}")]
    NotEnoughResponders { needed: usize, got: usize },

    #[error("message stream has {actual} bytes, expected {expected}")]
    WrongLength { expected: usize, actual: usize },

    #[error("symbol {index} = {value} is not below q = {modulus}")]
    OutOfRange { index: usize, value: u64, modulus: u64 },

    #[error("bad ingest directive {0:?}")]
    BadDirective(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type SimResult<T> = Result<T, SimError>;
