use thiserror::Error;

use crate::cartan::CartanError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("element cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("exchange matrix is not of affine type")]
    NotAffine,
    #[error("exchange matrix is not acyclic")]
    NotAcyclic,
    #[error("height {0} is insufficient to certify the rank-two subsystem")]
    HeightInsufficient(i64),
    #[error("no join-irreducible found up to length {0}")]
    NotFoundWithinL(usize),
    #[error("compatibility degree unresolved after {0} steps")]
    ResolutionCapExceeded(usize),
    #[error("series with different normals")]
    MixedNormals,
    #[error("transverse plane of a face is degenerate")]
    DegenerateFace,
    #[error("rendering unsupported in rank {0}")]
    UnsupportedRank(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Element cap for enumerations, from `AFFSCAT_CAP` or one million.
pub fn element_cap() -> usize {
    std::env::var("AFFSCAT_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(1_000_000)
}
