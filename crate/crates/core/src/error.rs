use thiserror::Error;

use crate::gauge::ExpElement;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different generator contexts")]
    ContextMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("context has no field/antifield pairing: {0}")]
    MissingPairing(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),
    #[error("wrong antifield degree: {0}")]
    AntifieldDegree(String),
    #[error("invalid gauge fermion: {0}")]
    InvalidGaugeFermion(String),
    #[error("unsupported integrand: {0}")]
    Integrand(String),
    #[error("damping is not the normalized -1/2*sum(x^2): found {0}")]
    NonNormalizedDamping(String),
    #[error("integrand is not Delta-closed")]
    NotDeltaClosed(Box<ExpElement>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
