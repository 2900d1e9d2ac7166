//! The cognitive challenge-response scheme.
//!
//! A secret is a `k`-subset of a pool of `n` objects. A challenge shows `l`
//! distinct objects, each with a weight in `Z_d`; the response is the sum of the
//! weights of the pass-objects shown, mod `d`, or a uniformly random element
//! of `Z_d` when no pass-object is shown (the *empty case*).

mod analysis;
mod params;
mod scheme;
mod transcript;

pub use analysis::{
    ch_attack_estimate, ch_point, complexity_bits, expected_survivors_planted,
    expected_surviving_candidates, hypergeom_pmf, info_theoretic_bound,
    info_theoretic_bound_real, p_empty, p_random_guess, security_table, AnalysisRow, ChEstimate,
    ChPoint, Complexity, TableRow,
};
pub use params::{ParamsError, SchemeParams};
pub use scheme::{
    cognitive_sum, compute_response, sample_challenge, sample_secret, verify_response,
    Challenge, EmptyCasePolicy, Response, Secret, VerifyOutcome,
};
pub use transcript::{simulate_transcript, SimulatedTranscript, Transcript, TranscriptRound};
