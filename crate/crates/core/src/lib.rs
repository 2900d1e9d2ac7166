//! Hybrid cognitive + behavioural-biometric authentication.
//!
//! The crate is split into four areas:
//!
//! * [`cognitive`] holds the challenge-response scheme itself (secrets,
//!   challenges, the weighted-sum response function) and every closed-form
//!   security quantity used to size its parameters.
//! * [`attack`] runs the known attacks against observed transcripts: brute
//!   force, meet-in-the-middle, linearization by elimination over `Z_d`,
//!   frequency analysis, plus the statistics they rely on.
//! * [`biometric`] turns raw touch traces into normalized feature series and
//!   classifies renderings against per-user DTW templates.
//! * [`synth`] generates synthetic handwriting so the biometric side can be
//!   exercised without human subjects.

pub mod attack;
pub mod biometric;
pub mod cognitive;
pub mod combin;
pub mod synth;

pub use cognitive::{
    Challenge, ParamsError, Response, SchemeParams, Secret, Transcript, TranscriptRound,
    VerifyOutcome,
};
