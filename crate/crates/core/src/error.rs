use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

/// Pairwise sup distances between map tables that did not settle.
#[derive(Debug, Clone, PartialEq)]
pub struct NonConvergence {
    pub epsilon: f64,
    pub sup_distances: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point outside the domain of the map")]
    Domain,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("separation violated: {0}")]
    Separation(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("point is not on the attractor")]
    NotOnAttractor,
    #[error("address too short for the requested bound")]
    InsufficientDepth,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("transducer: {0}")]
    Transducer(String),
    #[error("attractor dimensions differ: {src} vs {dst}")]
    DimensionMismatch { src: f64, dst: f64 },
    #[error("map is not bilipschitz: {0}")]
    NotBilipschitz(String),
    #[error("fewer than two distinct points")]
    Degenerate,
    #[error("construction failed at {stage}: {detail}")]
    Construction { stage: &'static str, detail: String },
    #[error("no epsilon-Cauchy subsequence at epsilon = {}", .0.epsilon)]
    NonConvergence(Box<NonConvergence>),
}

impl Error {
    pub(crate) fn construction(stage: &'static str, detail: impl Into<String>) -> Self {
        Error::Construction { stage, detail: detail.into() }
    }
}
