//! Simulated clients built on the synthetic handwriting generator, for
//! demos, load tests and end-to-end checks.

use hybridauth_core::biometric::{Trace, TraceHeader};
use hybridauth_core::cognitive::{compute_response, sample_secret};
use hybridauth_core::synth::{render, Alphabet, HandStyle, SynthConfig};
use hybridauth_core::{Challenge, SchemeParams, Secret};
use rand::Rng;

use crate::PublishedConfig;

/// A user who knows a secret and writes with one hand style.
#[derive(Debug, Clone)]
pub struct SimulatedUser {
    pub name: String,
    pub secret: Secret,
    pub style: HandStyle,
}

impl SimulatedUser {
    pub fn generate<R: Rng + ?Sized>(
        name: impl Into<String>,
        params: &SchemeParams,
        alphabet: &Alphabet,
        spread: f64,
        rng: &mut R,
    ) -> Self {
        Self { name: name.into(), secret: sample_secret(params, rng), style: HandStyle::generate(alphabet, spread, rng) }
    }

    /// `t` labeled renderings of every symbol.
    pub fn registration<R: Rng + ?Sized>(
        &self,
        config: &PublishedConfig,
        alphabet: &Alphabet,
        synth: &SynthConfig,
        rng: &mut R,
    ) -> Vec<Trace> {
        let mut out = Vec::new();
        for r in 0..config.params.d() {
            for i in 0..config.params.t() {
                let trace = self.write(config, alphabet, r, synth, rng);
                out.push(label(trace, &self.name, config, r, &format!("reg-{i:02}")));
            }
        }
        out
    }

    /// Renders `symbol` in this user's hand.
    pub fn write<R: Rng + ?Sized>(
        &self,
        config: &PublishedConfig,
        alphabet: &Alphabet,
        symbol: u32,
        synth: &SynthConfig,
        rng: &mut R,
    ) -> Trace {
        let trace = render(alphabet, &self.style, symbol as usize, synth, rng);
        label(trace, &self.name, config, symbol, "auth")
    }

    /// The honest answer to `challenge`, written out.
    pub fn answer<R: Rng + ?Sized>(
        &self,
        config: &PublishedConfig,
        alphabet: &Alphabet,
        challenge: &Challenge,
        synth: &SynthConfig,
        rng: &mut R,
    ) -> Trace {
        let r = compute_response(&config.params, &self.secret, challenge, rng);
        self.write(config, alphabet, r.0, synth, rng)
    }
}

fn label(trace: Trace, user: &str, config: &PublishedConfig, symbol: u32, session: &str) -> Trace {
    let symbol = config.symbols.symbol(symbol).unwrap_or_default().to_owned();
    trace.with_header(TraceHeader { user: user.to_owned(), symbol, session: session.to_owned() })
}
