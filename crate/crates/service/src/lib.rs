//! Authentication service: published setup, registration of a secret plus
//! handwriting templates, and sessions of `γ` challenge rounds whose verdict
//! is revealed only after the last round.
//!
//! [`AuthService`] is the in-process state machine; [`http::router`] exposes
//! it as a JSON API. Every state change is appended to a [`Store`], and
//! [`replay`] recomputes verdicts from that log.

pub mod client;
mod config;
mod error;
pub mod http;
mod service;
mod store;

pub use config::{setup, LockoutPolicy, PublishedConfig, ServiceConfig};
pub use error::ServiceError;
pub use service::{
    replay, AuthService, BiometricVerdict, EnrollmentSummary, RoundOutcome, RoundReply, SessionStart,
    Verdict,
};
pub use store::{Record, Store};
