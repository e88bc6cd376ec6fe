use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),

    #[error("singular forcing at node {coords:?}")]
    SingularForcing { coords: Vec<f64> },

    #[error("non-finite value in order {order} at step {step}")]
    NonFinite { order: usize, step: usize },

    #[error("unstable run: max |u| = {max_abs:e} at step {step}")]
    Unstable { step: usize, max_abs: f64 },

    #[error("order {order}: {source}")]
    AtOrder {
        order: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn at_order(self, order: usize) -> Self {
        match self {
            e @ Error::AtOrder { .. } => e,
            e => Error::AtOrder {
                order,
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
