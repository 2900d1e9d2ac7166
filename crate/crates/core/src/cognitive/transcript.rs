use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::{ParamsError, SchemeParams};
use super::scheme::{
    cognitive_sum, respond_with_policy, sample_challenge, Challenge, EmptyCasePolicy, Response,
    Secret,
};

/// One observed challenge-response pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRound {
    #[serde(flatten)]
    pub challenge: Challenge,
    #[serde(rename = "r")]
    pub response: Response,
}

/// What a passive observer collects: the public parameters and every
/// challenge-response pair seen so far.
///
/// On the wire this is `{"params":{"d","k","l","n"},"rounds":[{"a","w","r"}]}`
/// with 0-based object ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WireTranscript", into = "WireTranscript")]
pub struct Transcript {
    params: SchemeParams,
    rounds: Vec<TranscriptRound>,
}

#[derive(Serialize, Deserialize)]
struct WireParams {
    d: u32,
    k: usize,
    l: usize,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct WireTranscript {
    params: WireParams,
    rounds: Vec<TranscriptRound>,
}

impl TryFrom<WireTranscript> for Transcript {
    type Error = ParamsError;

    fn try_from(w: WireTranscript) -> Result<Self, Self::Error> {
        let params = SchemeParams::cognitive(w.params.d, w.params.k, w.params.l, w.params.n)?;
        let mut t = Transcript::new(params);
        for round in w.rounds {
            t.push(round.challenge, round.response)?;
        }
        Ok(t)
    }
}

impl From<Transcript> for WireTranscript {
    fn from(t: Transcript) -> Self {
        let p = t.params;
        WireTranscript {
            params: WireParams { d: p.d(), k: p.k(), l: p.l(), n: p.n() },
            rounds: t.rounds,
        }
    }
}

impl Transcript {
    pub fn new(params: SchemeParams) -> Self {
        Self { params, rounds: Vec::new() }
    }

    pub fn push(&mut self, challenge: Challenge, response: Response) -> Result<(), ParamsError> {
        challenge.validate(&self.params)?;
        let response = Response::new(&self.params, response.value())?;
        self.rounds.push(TranscriptRound { challenge, response });
        Ok(())
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn rounds(&self) -> &[TranscriptRound] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// The first `m` rounds.
    pub fn prefix(&self, m: usize) -> Transcript {
        Transcript { params: self.params, rounds: self.rounds[..m.min(self.rounds.len())].to_vec() }
    }

    /// Is `candidate` consistent with every round? Rounds where the candidate
    /// shows no object are trivially consistent.
    pub fn is_consistent(&self, candidate: &Secret) -> bool {
        self.rounds.iter().all(|round| {
            cognitive_sum(&self.params, candidate, &round.challenge)
                .is_none_or(|r| r == round.response.value())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcript serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A generated transcript together with ground truth the observer never sees.
#[derive(Debug, Clone)]
pub struct SimulatedTranscript {
    pub transcript: Transcript,
    /// `true` for rounds whose challenge contained no pass-object.
    pub empty_case: Vec<bool>,
}

/// `m` rounds of an honest (or, with [`EmptyCasePolicy::Fixed`], flawed)
/// responder holding `secret`.
pub fn simulate_transcript<R: Rng + ?Sized>(
    params: &SchemeParams,
    secret: &Secret,
    m: usize,
    policy: EmptyCasePolicy,
    rng: &mut R,
) -> SimulatedTranscript {
    let mut transcript = Transcript::new(*params);
    let mut empty_case = Vec::with_capacity(m);
    for _ in 0..m {
        let challenge = sample_challenge(params, rng);
        empty_case.push(cognitive_sum(params, secret, &challenge).is_none());
        let response = respond_with_policy(params, secret, &challenge, policy, rng);
        transcript.rounds.push(TranscriptRound { challenge, response });
    }
    SimulatedTranscript { transcript, empty_case }
}
