//! Synthetic users and imposters run against an in-process server.
//!
//! Each user gets a planted secret and a hand style; registration and every
//! session go through [`AuthService`] exactly as a remote client would. The
//! imposter for a user writes in their own style and answers each challenge
//! with a uniform guess. Their per-symbol false-positive rate is estimated
//! separately, so the observed success rate can be set against
//! `(p_RG · FPR)^γ`.

use std::fmt::Write;
use std::path::Path;

use hybridauth_core::biometric::{classify, extract_features, Decision, SymbolSet, Trace};
use hybridauth_core::cognitive::p_random_guess;
use hybridauth_core::synth::{Alphabet, SynthConfig};
use hybridauth_core::{SchemeParams, Transcript};
use hybridauth_service::client::SimulatedUser;
use hybridauth_service::{setup, AuthService, ServiceConfig, Store, Verdict};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{SimulateArgs, SymbolChoice};
use crate::io::{write, write_json};
use crate::params::scheme_params;
use crate::{CliError, Report};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub params: SchemeParams,
    pub symbols: SymbolSet,
    pub users: usize,
    pub sessions: usize,
    pub noise: f64,
    pub spread: f64,
    pub imposter_sessions: usize,
    pub fpr_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserResult {
    pub user: String,
    pub secret: Vec<usize>,
    pub sessions: usize,
    pub accepted: usize,
    pub transcript_rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImposterResult {
    pub sessions: usize,
    pub successes: usize,
    pub rate: f64,
    /// `fpr[u][s]`: share of the imposter's renderings of `s` that the
    /// server accepted as `s` from user `u`.
    pub fpr: Vec<Vec<f64>>,
    pub mean_fpr: f64,
    pub p_rg: f64,
    /// Session-weighted mean of `(p_RG · FPR_u)^γ`.
    pub expected: f64,
    /// Binomial spread of the rate plus the uncertainty of the FPR estimates.
    pub sigma: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub spec: SimulationSpec,
    pub users: Vec<UserResult>,
    pub legit_sessions: usize,
    pub legit_accept_rate: f64,
    pub imposter: Option<ImposterResult>,
}

#[derive(Debug)]
pub struct SimulationOutput {
    pub report: SimulationReport,
    pub transcripts: Vec<(String, Transcript)>,
    pub registrations: Vec<(String, Vec<Trace>)>,
    pub config: ServiceConfig,
}

pub fn symbol_set(choice: SymbolChoice, d: u32) -> SymbolSet {
    match choice {
        SymbolChoice::EasyWords if d == 5 => SymbolSet::easy_words(),
        SymbolChoice::ComplexWords if d == 5 => SymbolSet::complex_words(),
        _ => SymbolSet::numbered(d),
    }
}

pub fn spec_from_args(args: &SimulateArgs, seed: u64) -> Result<SimulationSpec, CliError> {
    let params = scheme_params(args.params)?
        .with_gamma(args.gamma)
        .and_then(|p| p.with_t(args.t))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if !(args.noise >= 0.0 && args.spread >= 0.0) {
        return Err(CliError::Usage("noise and spread must be non-negative".into()));
    }
    if args.users == 0 {
        return Err(CliError::Usage("at least one user is needed".into()));
    }
    if args.imposter_sessions > 0 && args.fpr_samples == 0 {
        return Err(CliError::Usage("imposter sessions need --fpr-samples > 0".into()));
    }
    Ok(SimulationSpec {
        params,
        symbols: symbol_set(args.symbols, args.params.d),
        users: args.users,
        sessions: args.sessions,
        noise: args.noise,
        spread: args.spread,
        imposter_sessions: args.imposter_sessions,
        fpr_samples: args.fpr_samples,
        seed,
    })
}

fn run_session<R: Rng>(
    service: &AuthService,
    user: &str,
    mut answer: impl FnMut(&hybridauth_core::Challenge, &mut R) -> Trace,
    rng: &mut R,
) -> Result<Verdict, CliError> {
    let start = service.start_session(user).map_err(CliError::data)?;
    let mut challenge = start.challenge;
    loop {
        let trace = answer(&challenge, rng);
        let reply = service.submit_response(&start.session, Some(trace)).map_err(CliError::data)?;
        if let Some(v) = reply.verdict {
            return Ok(v);
        }
        challenge = reply.challenge.expect("unfinished sessions carry the next challenge");
    }
}

struct ImposterTally {
    sessions: usize,
    successes: usize,
    fpr: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
fn imposter_run(
    service: &AuthService,
    published: &hybridauth_service::PublishedConfig,
    alphabet: &Alphabet,
    victim: &str,
    imposter: &SimulatedUser,
    synth: &SynthConfig,
    fpr_samples: usize,
    sessions: usize,
    seed: u64,
) -> Result<ImposterTally, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let profile = &service.enrollment(victim).expect("victim is enrolled").profile;
    let d = published.params.d();
    let mut fpr = Vec::with_capacity(d as usize);
    for s in 0..d {
        let mut accepted = 0;
        for _ in 0..fpr_samples {
            let trace = imposter.write(published, alphabet, s, synth, &mut rng);
            let features = extract_features(&trace).map_err(CliError::data)?;
            if classify(&features, profile, None).map_err(CliError::data)? == (Decision::Accept { symbol: s as usize }) {
                accepted += 1;
            }
        }
        fpr.push(accepted as f64 / fpr_samples as f64);
    }
    let mut successes = 0;
    for _ in 0..sessions {
        let guess = |_: &hybridauth_core::Challenge, rng: &mut ChaCha20Rng| {
            let r = rng.random_range(0..d);
            imposter.write(published, alphabet, r, synth, rng)
        };
        if run_session(service, victim, guess, &mut rng)? == Verdict::Accept {
            successes += 1;
        }
    }
    Ok(ImposterTally { sessions, successes, fpr })
}

pub fn run_simulation(spec: &SimulationSpec, out: Option<&Path>) -> Result<SimulationOutput, CliError> {
    let params = spec.params;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let alphabet = Alphabet::generate(params.d() as usize, &mut rng);
    let pool = (0..params.n()).map(|i| format!("emoji/{i}.png")).collect();
    let published = setup(params, spec.symbols.clone(), pool).map_err(|e| CliError::Usage(e.to_string()))?;
    let config = ServiceConfig::new(published.clone());
    let store = match out {
        Some(dir) => {
            let path = dir.join("audit.jsonl");
            write(&path, "")?;
            Store::open(&path).map_err(CliError::data)?
        }
        None => Store::memory(),
    };
    let service = AuthService::new(config.clone(), store, Some(rng.next_u64())).map_err(CliError::data)?;
    let synth = SynthConfig::with_noise(spec.noise);

    let mut users = Vec::new();
    let mut registrations = Vec::new();
    for i in 0..spec.users {
        let user = SimulatedUser::generate(format!("user{i:03}"), &params, &alphabet, spec.spread, &mut rng);
        let traces = user.registration(&published, &alphabet, &synth, &mut rng);
        service.register(&user.name, user.secret.objects(), traces.clone()).map_err(CliError::data)?;
        registrations.push((user.name.clone(), traces));
        users.push(user);
    }

    let mut results = Vec::new();
    let mut transcripts = Vec::new();
    let mut accepted_total = 0;
    for user in &users {
        let mut accepted = 0;
        for _ in 0..spec.sessions {
            let answer = |c: &hybridauth_core::Challenge, rng: &mut ChaCha20Rng| user.answer(&published, &alphabet, c, &synth, rng);
            if run_session(&service, &user.name, answer, &mut rng)? == Verdict::Accept {
                accepted += 1;
            }
        }
        accepted_total += accepted;
        let transcript = service.export_transcript(&user.name, false);
        results.push(UserResult {
            user: user.name.clone(),
            secret: user.secret.objects().to_vec(),
            sessions: spec.sessions,
            accepted,
            transcript_rounds: transcript.len(),
        });
        transcripts.push((user.name.clone(), transcript));
    }
    let legit_sessions = spec.users * spec.sessions;

    let imposter = if spec.imposter_sessions > 0 {
        Some(imposters(spec, &config, &published, &alphabet, &users, &registrations, &synth, &mut rng)?)
    } else {
        None
    };

    let report = SimulationReport {
        spec: spec.clone(),
        users: results,
        legit_sessions,
        legit_accept_rate: if legit_sessions == 0 { 0.0 } else { accepted_total as f64 / legit_sessions as f64 },
        imposter,
    };
    if let Some(dir) = out {
        write_json(&dir.join("config.json"), &published)?;
        write_json(&dir.join("summary.json"), &report)?;
        for (name, t) in &transcripts {
            write(&dir.join("transcripts").join(format!("{name}.json")), &(t.to_json() + "\n"))?;
        }
        for (name, traces) in &registrations {
            for trace in traces {
                let h = trace.header.as_ref().expect("registration renderings are labeled");
                write(&dir.join("traces").join(name).join(format!("{}-{}.jsonl", h.symbol, h.session)), &trace.to_jsonl())?;
            }
        }
    }
    Ok(SimulationOutput { report, transcripts, registrations, config })
}

#[allow(clippy::too_many_arguments)]
fn imposters(
    spec: &SimulationSpec,
    config: &ServiceConfig,
    published: &hybridauth_service::PublishedConfig,
    alphabet: &Alphabet,
    users: &[SimulatedUser],
    registrations: &[(String, Vec<Trace>)],
    synth: &SynthConfig,
    rng: &mut ChaCha20Rng,
) -> Result<ImposterResult, CliError> {
    let params = spec.params;
    let service = AuthService::new(config.clone(), Store::null(), Some(rng.next_u64())).map_err(CliError::data)?;
    for (user, (name, traces)) in users.iter().zip(registrations) {
        service.register(name, user.secret.objects(), traces.clone()).map_err(CliError::data)?;
    }
    let mut jobs = Vec::new();
    for (i, user) in users.iter().enumerate() {
        let imposter = SimulatedUser::generate(format!("imposter{i:03}"), &params, alphabet, spec.spread, rng);
        let sessions = spec.imposter_sessions / users.len() + usize::from(i < spec.imposter_sessions % users.len());
        jobs.push((user.name.clone(), imposter, sessions, rng.next_u64()));
    }
    // Each job owns its seed, so threading does not affect the numbers.
    let tallies = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(victim, imposter, sessions, seed)| {
                let service = &service;
                scope.spawn(move || {
                    imposter_run(service, published, alphabet, victim, imposter, synth, spec.fpr_samples, *sessions, *seed)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("imposter worker")).collect::<Result<Vec<_>, _>>()
    })?;

    let gamma = params.gamma() as i32;
    let p_rg = p_random_guess(&params);
    let total: usize = tallies.iter().map(|t| t.sessions).sum();
    let successes: usize = tallies.iter().map(|t| t.successes).sum();
    let d = params.d() as f64;
    let m = spec.fpr_samples as f64;
    let (mut expected, mut var_rate, mut var_fpr) = (0.0, 0.0, 0.0);
    for t in &tallies {
        let w = t.sessions as f64 / total as f64;
        let f = t.fpr.iter().sum::<f64>() / d;
        let q = (p_rg * f).powi(gamma);
        expected += w * q;
        var_rate += t.sessions as f64 * q * (1.0 - q);
        let dq = gamma as f64 * p_rg.powi(gamma) * f.powi(gamma - 1);
        let var_f = t.fpr.iter().map(|x| x * (1.0 - x) / m).sum::<f64>() / (d * d);
        var_fpr += (w * dq).powi(2) * var_f;
    }
    let rate = successes as f64 / total as f64;
    let sigma = (var_rate / (total as f64).powi(2) + var_fpr).sqrt();
    let mean_fpr = tallies.iter().flat_map(|t| &t.fpr).sum::<f64>() / (tallies.len() as f64 * d);
    Ok(ImposterResult {
        sessions: total,
        successes,
        rate,
        fpr: tallies.into_iter().map(|t| t.fpr).collect(),
        mean_fpr,
        p_rg,
        expected,
        sigma,
        z_score: if sigma > 0.0 { (rate - expected) / sigma } else { 0.0 },
    })
}

pub fn cmd_simulate(args: &SimulateArgs, seed: u64, out: Option<&Path>) -> Result<Report, CliError> {
    let spec = spec_from_args(args, seed)?;
    let output = run_simulation(&spec, out)?;
    let r = &output.report;
    let mut text = String::new();
    writeln!(
        text,
        "{} users x {} sessions (gamma = {}): legitimate accept rate {:.4}",
        spec.users,
        spec.sessions,
        spec.params.gamma(),
        r.legit_accept_rate
    )
    .unwrap();
    for u in &r.users {
        writeln!(text, "  {}: {}/{} accepted, {} transcript rounds", u.user, u.accepted, u.sessions, u.transcript_rounds).unwrap();
    }
    if let Some(i) = &r.imposter {
        writeln!(
            text,
            "imposters: {}/{} sessions passed (rate {:.5}); expected {:.5} +- {:.5} from p_RG = {:.4}, mean FPR = {:.4} (z = {:.2})",
            i.successes, i.sessions, i.rate, i.expected, i.sigma, i.p_rg, i.mean_fpr, i.z_score
        )
        .unwrap();
    }
    if let Some(dir) = out {
        writeln!(text, "artifacts written to {}", dir.display()).unwrap();
    }
    Ok(Report { json: json!(r), text })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> SimulationSpec {
        SimulationSpec {
            params: SchemeParams::new(5, 4, 8, 20, 2, 3).unwrap(),
            symbols: SymbolSet::easy_words(),
            users: 2,
            sessions: 5,
            noise: 0.0,
            spread: 0.3,
            imposter_sessions: 0,
            fpr_samples: 0,
            seed,
        }
    }

    #[test]
    fn counts_and_noiseless_acceptance() {
        let out = run_simulation(&spec(1), None).unwrap();
        assert_eq!(out.report.legit_accept_rate, 1.0);
        for (u, (_, t)) in out.report.users.iter().zip(&out.transcripts) {
            assert_eq!(u.transcript_rounds, 10);
            assert!(t.is_consistent(&hybridauth_core::Secret::new(&spec(1).params, u.secret.clone()).unwrap()));
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run_simulation(&spec(7), Some(a.path())).unwrap();
        run_simulation(&spec(7), Some(b.path())).unwrap();
        for f in ["summary.json", "audit.jsonl", "transcripts/user000.json", "traces/user001/four-reg-02.jsonl"] {
            let x = std::fs::read(a.path().join(f)).unwrap();
            assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f}");
        }
    }

    #[test]
    fn imposter_summary_is_coherent() {
        let mut s = spec(3);
        s.noise = 1.0;
        s.imposter_sessions = 50;
        s.fpr_samples = 10;
        let i = run_simulation(&s, None).unwrap().report.imposter.unwrap();
        assert_eq!(i.sessions, 50);
        assert_eq!(i.fpr.len(), 2);
        assert!(i.fpr.iter().flatten().all(|f| (0.0..=1.0).contains(f)));
        assert!(i.expected <= i.p_rg.powi(2) + 1e-12);
    }
}
