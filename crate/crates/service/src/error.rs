use hybridauth_core::biometric::{TemplateError, TraceError};
use hybridauth_core::ParamsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid registration: {0}")]
    Registration(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    /// Same message for unknown users, locked accounts and throttling, so
    /// the reply does not reveal which applies.
    #[error("authentication unavailable")]
    Unavailable,
    #[error("unknown session")]
    UnknownSession,
    #[error("session has no pending challenge")]
    NoPendingChallenge,
    #[error("store: {0}")]
    Store(String),
}
