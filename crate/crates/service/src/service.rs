use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use hybridauth_core::biometric::{classify, extract_features, BiometricProfile, Decision, Stage, Trace};
use hybridauth_core::cognitive::{sample_challenge, verify_response};
use hybridauth_core::{Challenge, Response, SchemeParams, Secret, Transcript, VerifyOutcome};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::config::ServiceConfig;
use crate::store::{Record, Store};
use crate::ServiceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiometricVerdict {
    Pass,
    FailSym,
    FailUser,
}

/// Per-round result kept in the audit log. Never sent to the client.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    /// Symbol whose template the rendering matched.
    pub matched: Option<u32>,
    /// `None` when no symbol matched.
    pub cognitive: Option<VerifyOutcome>,
    pub biometric: BiometricVerdict,
    /// The trace did not parse or had too few samples.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub malformed: bool,
}

impl RoundOutcome {
    fn malformed() -> Self {
        Self { matched: None, cognitive: None, biometric: BiometricVerdict::FailSym, malformed: true }
    }

    pub fn passed(&self) -> bool {
        self.biometric == BiometricVerdict::Pass
            && matches!(self.cognitive, Some(VerifyOutcome::Correct | VerifyOutcome::EmptyCaseAny))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionStart {
    pub session: String,
    pub challenge: Challenge,
}

/// What `submit_response` returns in process. The HTTP layer forwards only
/// `round`, `done`, `verdict` and `challenge`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundReply {
    /// Number of rounds answered so far.
    pub round: u32,
    pub done: bool,
    pub verdict: Option<Verdict>,
    pub challenge: Option<Challenge>,
    pub outcome: RoundOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrollmentSummary {
    pub user: String,
    pub sym_templates: usize,
    pub user_templates: usize,
}

#[derive(Debug)]
pub struct Enrollment {
    pub user: String,
    pub secret: Secret,
    pub profile: BiometricProfile,
    pub params: SchemeParams,
}

#[derive(Debug)]
struct Session {
    user: String,
    rng: ChaCha20Rng,
    round: u32,
    err: bool,
    pending: Option<Challenge>,
}

#[derive(Debug, Default)]
struct UserCounters {
    consecutive_rejects: u32,
    open_sessions: usize,
}

/// The authentication server. Cheap to share behind an `Arc`.
#[derive(Debug)]
pub struct AuthService {
    config: ServiceConfig,
    store: Store,
    master: Mutex<ChaCha20Rng>,
    enrollments: RwLock<HashMap<String, Arc<Enrollment>>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    counters: Mutex<HashMap<String, UserCounters>>,
}

/// Challenge stream of a session. Replay depends on this staying fixed.
fn session_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn build_enrollment(
    config: &ServiceConfig,
    user: &str,
    secret: &[usize],
    renderings: &[Trace],
) -> Result<Enrollment, ServiceError> {
    let published = &config.published;
    let params = published.params;
    let secret = Secret::new(&params, secret.iter().copied())?;
    let mut per_symbol = vec![Vec::new(); params.d() as usize];
    for (i, trace) in renderings.iter().enumerate() {
        trace.validate()?;
        let label = trace
            .header
            .as_ref()
            .map(|h| h.symbol.as_str())
            .ok_or_else(|| ServiceError::Registration(format!("rendering {i} has no header")))?;
        let r = published
            .symbols
            .response(label)
            .ok_or_else(|| ServiceError::Registration(format!("rendering {i}: unknown symbol {label:?}")))?;
        let features = extract_features(trace)
            .map_err(|e| ServiceError::Registration(format!("rendering {i}: {e}")))?;
        per_symbol[r as usize].push(features);
    }
    for (r, samples) in per_symbol.iter().enumerate() {
        if samples.len() != params.t() {
            return Err(ServiceError::Registration(format!(
                "symbol {:?} has {} renderings, expected t = {}",
                published.symbols.symbol(r as u32).unwrap_or_default(),
                samples.len(),
                params.t()
            )));
        }
    }
    let profile = BiometricProfile::build(&per_symbol, &config.biometric)?;
    Ok(Enrollment { user: user.to_owned(), secret, profile, params })
}

/// Runs the two-step classifier, then checks the decoded symbol as the
/// cognitive response. Returns the outcome and the symbol an observer would
/// read from the rendering.
fn evaluate_round(enrollment: &Enrollment, challenge: &Challenge, trace: Option<&Trace>) -> (RoundOutcome, Option<u32>) {
    let Some(features) = trace.and_then(|t| extract_features(t).ok()) else {
        return (RoundOutcome::malformed(), None);
    };
    let decision = match classify(&features, &enrollment.profile, None) {
        Ok(d) => d,
        Err(_) => return (RoundOutcome::malformed(), None),
    };
    let observed = decision.symbol() as u32;
    let (matched, biometric) = match decision {
        Decision::Accept { symbol } => (Some(symbol as u32), BiometricVerdict::Pass),
        Decision::Reject { stage: Stage::User, symbol } => (Some(symbol as u32), BiometricVerdict::FailUser),
        Decision::Reject { stage: Stage::Symbol, .. } => (None, BiometricVerdict::FailSym),
    };
    let cognitive = matched.map(|r| {
        verify_response(&enrollment.params, &enrollment.secret, challenge, Response(r))
            .expect("decoded symbol is below d")
    });
    (RoundOutcome { matched, cognitive, biometric, malformed: false }, Some(observed))
}

impl AuthService {
    /// Opens a service over `store`. A store that already holds a setup must
    /// hold the same configuration; its enrollments are reloaded. Open
    /// sessions do not survive a restart.
    pub fn new(config: ServiceConfig, store: Store, seed: Option<u64>) -> Result<Self, ServiceError> {
        let master = match seed {
            Some(s) => ChaCha20Rng::seed_from_u64(s),
            None => ChaCha20Rng::from_rng(&mut rand::rng()),
        };
        let mut enrollments = HashMap::new();
        let mut counters: HashMap<String, UserCounters> = HashMap::new();
        let mut session_users = HashMap::new();
        let mut configured = false;
        store.with_records(|records| -> Result<(), ServiceError> {
            for record in records {
                match record {
                    Record::Setup { config: stored } => {
                        if *stored != config {
                            return Err(ServiceError::Config("store was set up with a different configuration".into()));
                        }
                        configured = true;
                    }
                    Record::Enroll { user, secret, renderings } => {
                        let e = build_enrollment(&config, user, secret, renderings)?;
                        enrollments.insert(user.clone(), Arc::new(e));
                    }
                    Record::Session { session, user, .. } => {
                        session_users.insert(session.clone(), user.clone());
                    }
                    Record::Verdict { session, verdict } => {
                        if let Some(user) = session_users.get(session) {
                            let c = counters.entry(user.clone()).or_default();
                            match verdict {
                                Verdict::Accept => c.consecutive_rejects = 0,
                                Verdict::Reject => c.consecutive_rejects += 1,
                            }
                        }
                    }
                    Record::Round { .. } => {}
                }
            }
            Ok(())
        })?;
        if !configured {
            store.append(Record::Setup { config: config.clone() })?;
        }
        Ok(Self {
            config,
            store,
            master: Mutex::new(master),
            enrollments: RwLock::new(enrollments),
            sessions: RwLock::new(HashMap::new()),
            counters: Mutex::new(counters),
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn enrollment(&self, user: &str) -> Option<Arc<Enrollment>> {
        self.enrollments.read().expect("enrollments lock").get(user).cloned()
    }

    /// Registers a secret and `t` labeled renderings of each symbol. The
    /// symbol of a rendering is taken from its header.
    pub fn register(&self, user: &str, secret: &[usize], renderings: Vec<Trace>) -> Result<EnrollmentSummary, ServiceError> {
        if user.is_empty() {
            return Err(ServiceError::Registration("empty user id".into()));
        }
        let enrollment = build_enrollment(&self.config, user, secret, &renderings)?;
        let mut enrollments = self.enrollments.write().expect("enrollments lock");
        if enrollments.contains_key(user) {
            return Err(ServiceError::Registration(format!("user {user:?} is already enrolled")));
        }
        self.store.append(Record::Enroll {
            user: user.to_owned(),
            secret: enrollment.secret.objects().to_vec(),
            renderings,
        })?;
        let n = enrollment.profile.len();
        enrollments.insert(user.to_owned(), Arc::new(enrollment));
        Ok(EnrollmentSummary { user: user.to_owned(), sym_templates: n, user_templates: n })
    }

    pub fn start_session(&self, user: &str) -> Result<SessionStart, ServiceError> {
        let (id, seed) = {
            let mut master = self.master.lock().expect("master rng lock");
            (format!("{:016x}", master.next_u64()), master.next_u64())
        };
        let mut rng = session_rng(seed);
        // Unknown users get the same work as known ones before the refusal.
        let challenge = sample_challenge(self.config.params(), &mut rng);
        if self.enrollment(user).is_none() {
            return Err(ServiceError::Unavailable);
        }
        {
            let mut counters = self.counters.lock().expect("counters lock");
            let c = counters.entry(user.to_owned()).or_default();
            let policy = self.config.lockout;
            if policy.max_consecutive_rejects.is_some_and(|m| c.consecutive_rejects >= m)
                || policy.max_open_sessions.is_some_and(|m| c.open_sessions >= m)
            {
                return Err(ServiceError::Unavailable);
            }
            c.open_sessions += 1;
        }
        self.store.append(Record::Session { session: id.clone(), user: user.to_owned(), seed })?;
        let session = Session { user: user.to_owned(), rng, round: 0, err: false, pending: Some(challenge.clone()) };
        self.sessions.write().expect("sessions lock").insert(id.clone(), Arc::new(Mutex::new(session)));
        Ok(SessionStart { session: id, challenge })
    }

    /// Scores one rendering. `trace` is `None` when the client's payload did
    /// not parse; that round fails but the session continues.
    pub fn submit_response(&self, session_id: &str, trace: Option<Trace>) -> Result<RoundReply, ServiceError> {
        let handle = self
            .sessions
            .read()
            .expect("sessions lock")
            .get(session_id)
            .cloned()
            .ok_or(ServiceError::UnknownSession)?;
        let mut session = handle.lock().expect("session lock");
        let challenge = session.pending.take().ok_or(ServiceError::NoPendingChallenge)?;
        let enrollment = self.enrollment(&session.user).ok_or(ServiceError::UnknownSession)?;
        let trace = trace.filter(|t| t.validate().is_ok());
        let (outcome, observed) = evaluate_round(&enrollment, &challenge, trace.as_ref());
        session.err |= !outcome.passed();
        session.round += 1;
        let round = session.round;
        self.store.append(Record::Round {
            session: session_id.to_owned(),
            round,
            challenge,
            trace,
            observed,
            outcome,
        })?;

        if round < self.config.params().gamma() {
            let next = sample_challenge(self.config.params(), &mut session.rng);
            session.pending = Some(next.clone());
            return Ok(RoundReply { round, done: false, verdict: None, challenge: Some(next), outcome });
        }
        let verdict = if session.err { Verdict::Reject } else { Verdict::Accept };
        self.store.append(Record::Verdict { session: session_id.to_owned(), verdict })?;
        {
            let mut counters = self.counters.lock().expect("counters lock");
            let c = counters.entry(session.user.clone()).or_default();
            c.open_sessions = c.open_sessions.saturating_sub(1);
            match verdict {
                Verdict::Accept => c.consecutive_rejects = 0,
                Verdict::Reject => c.consecutive_rejects += 1,
            }
        }
        Ok(RoundReply { round, done: true, verdict: Some(verdict), challenge: None, outcome })
    }

    /// Observed (challenge, decoded symbol) pairs of the user's sessions.
    /// With `accepted_only`, rounds of rejected or unfinished sessions are
    /// left out.
    pub fn export_transcript(&self, user: &str, accepted_only: bool) -> Transcript {
        export_transcript(&self.store.records(), *self.config.params(), user, accepted_only)
    }
}

fn export_transcript(records: &[Record], params: SchemeParams, user: &str, accepted_only: bool) -> Transcript {
    let mut owner = HashMap::new();
    let mut accepted = std::collections::HashSet::new();
    for record in records {
        match record {
            Record::Session { session, user: u, .. } => {
                owner.insert(session.as_str(), u.as_str());
            }
            Record::Verdict { session, verdict: Verdict::Accept } => {
                accepted.insert(session.as_str());
            }
            _ => {}
        }
    }
    let mut transcript = Transcript::new(params);
    for record in records {
        if let Record::Round { session, challenge, observed: Some(r), .. } = record {
            if owner.get(session.as_str()) != Some(&user) || (accepted_only && !accepted.contains(session.as_str())) {
                continue;
            }
            transcript.push(challenge.clone(), Response(*r)).expect("stored rounds are valid");
        }
    }
    transcript
}

/// Recomputes every completed session's verdict from the log alone:
/// templates are rebuilt from the stored renderings, challenges regenerated
/// from the stored seeds and each stored trace scored again.
pub fn replay(records: &[Record]) -> Result<Vec<(String, Verdict)>, ServiceError> {
    let mismatch = |msg: String| ServiceError::Store(format!("replay: {msg}"));
    let mut config = None;
    let mut enrollments: HashMap<&str, Enrollment> = HashMap::new();
    let mut sessions: HashMap<&str, (&str, ChaCha20Rng, bool)> = HashMap::new();
    let mut verdicts = Vec::new();
    for record in records {
        match record {
            Record::Setup { config: c } => config = Some(c),
            Record::Enroll { user, secret, renderings } => {
                let c = config.ok_or_else(|| mismatch("enrollment before setup".into()))?;
                enrollments.insert(user, build_enrollment(c, user, secret, renderings)?);
            }
            Record::Session { session, user, seed } => {
                sessions.insert(session, (user, session_rng(*seed), false));
            }
            Record::Round { session, round, challenge, trace, .. } => {
                let c = config.ok_or_else(|| mismatch("round before setup".into()))?;
                let (user, rng, err) =
                    sessions.get_mut(session.as_str()).ok_or_else(|| mismatch(format!("unknown session {session}")))?;
                let regenerated = sample_challenge(c.params(), rng);
                if regenerated != *challenge {
                    return Err(mismatch(format!("session {session} round {round}: challenge differs")));
                }
                let enrollment = enrollments.get(user).ok_or_else(|| mismatch(format!("user {user} not enrolled")))?;
                let (outcome, _) = evaluate_round(enrollment, challenge, trace.as_ref());
                *err |= !outcome.passed();
            }
            Record::Verdict { session, .. } => {
                let (_, _, err) = sessions.get(session.as_str()).ok_or_else(|| mismatch(format!("unknown session {session}")))?;
                verdicts.push((session.clone(), if *err { Verdict::Reject } else { Verdict::Accept }));
            }
        }
    }
    Ok(verdicts)
}

#[cfg(test)]
mod tests {
    use hybridauth_core::biometric::SymbolSet;
    use hybridauth_core::cognitive::cognitive_sum;
    use hybridauth_core::synth::{Alphabet, SynthConfig};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::client::SimulatedUser;
    use crate::config::{setup, LockoutPolicy};

    struct Fixture {
        service: AuthService,
        alphabet: Alphabet,
        alice: SimulatedUser,
        rng: ChaCha8Rng,
    }

    fn fixture(params: SchemeParams, lockout: LockoutPolicy) -> Fixture {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pool = (0..params.n()).map(|i| format!("{i}.png")).collect();
        let published = setup(params, SymbolSet::numbered(params.d()), pool).unwrap();
        let mut config = ServiceConfig::new(published);
        config.lockout = lockout;
        let alphabet = Alphabet::generate(params.d() as usize, &mut rng);
        let alice = SimulatedUser::generate("alice", &params, &alphabet, 0.3, &mut rng);
        let service = AuthService::new(config, Store::memory(), Some(5)).unwrap();
        // Noiseless renderings give exact self-matches, so verdicts depend
        // only on the protocol logic.
        let regs = alice.registration(&service.config().published, &alphabet, &SynthConfig::with_noise(0.0), &mut rng);
        service.register("alice", alice.secret.objects(), regs).unwrap();
        Fixture { service, alphabet, alice, rng }
    }

    fn small() -> SchemeParams {
        SchemeParams::new(5, 2, 3, 20, 2, 3).unwrap()
    }

    impl Fixture {
        fn answer(&mut self, challenge: &Challenge) -> Trace {
            let published = &self.service.config().published;
            self.alice.answer(published, &self.alphabet, challenge, &SynthConfig::with_noise(0.0), &mut self.rng)
        }

        fn run_session(&mut self) -> (String, Verdict) {
            let start = self.service.start_session("alice").unwrap();
            let mut challenge = start.challenge;
            loop {
                let trace = self.answer(&challenge);
                let reply = self.service.submit_response(&start.session, Some(trace)).unwrap();
                if reply.done {
                    return (start.session, reply.verdict.unwrap());
                }
                challenge = reply.challenge.unwrap();
            }
        }
    }

    #[test]
    fn registration_counts() {
        let mut f = fixture(small(), LockoutPolicy::default());
        let published = f.service.config().published.clone();
        let bob = SimulatedUser::generate("bob", &published.params, &f.alphabet, 0.3, &mut f.rng);
        let mut regs = bob.registration(&published, &f.alphabet, &SynthConfig::default(), &mut f.rng);
        regs.remove(0);
        let err = f.service.register("bob", bob.secret.objects(), regs.clone()).unwrap_err();
        assert!(err.to_string().contains("expected t = 3"), "{err}");
        assert!(f.service.register("bob", &[0, 0], regs).is_err());
        let regs = bob.registration(&published, &f.alphabet, &SynthConfig::default(), &mut f.rng);
        let summary = f.service.register("bob", bob.secret.objects(), regs.clone()).unwrap();
        assert_eq!((summary.sym_templates, summary.user_templates), (5, 5));
        assert!(f.service.register("bob", bob.secret.objects(), regs).is_err());
    }

    #[test]
    fn sessions_are_independent() {
        let f = fixture(SchemeParams::new(5, 4, 8, 20, 2, 3).unwrap(), LockoutPolicy::default());
        let a = f.service.start_session("alice").unwrap();
        let b = f.service.start_session("alice").unwrap();
        assert_ne!(a.session, b.session);
        assert_ne!(a.challenge, b.challenge);
        assert_eq!(a.challenge.objects().len(), 8);
        assert!(matches!(f.service.start_session("mallory"), Err(ServiceError::Unavailable)));
    }

    #[test]
    fn honest_sessions_accept() {
        let mut f = fixture(small(), LockoutPolicy::default());
        for _ in 0..5 {
            assert_eq!(f.run_session().1, Verdict::Accept);
        }
    }

    #[test]
    fn early_failure_is_deferred() {
        let mut f = fixture(small(), LockoutPolicy::default());
        let start = f.service.start_session("alice").unwrap();
        let first = f.service.submit_response(&start.session, None).unwrap();
        assert!(!first.done && first.verdict.is_none());
        assert!(first.outcome.malformed && !first.outcome.passed());
        let trace = f.answer(first.challenge.as_ref().unwrap());
        let last = f.service.submit_response(&start.session, Some(trace)).unwrap();
        assert!(last.outcome.passed());
        assert_eq!(last.verdict, Some(Verdict::Reject));
        assert!(matches!(
            f.service.submit_response(&start.session, None),
            Err(ServiceError::NoPendingChallenge)
        ));
        assert!(matches!(f.service.submit_response("nope", None), Err(ServiceError::UnknownSession)));
    }

    #[test]
    fn empty_case_accepts_any_symbol_but_keeps_biometrics() {
        let mut f = fixture(small(), LockoutPolicy::default());
        let params = *f.service.config().params();
        let bob = SimulatedUser::generate("bob", &params, &f.alphabet, 1.0, &mut f.rng);
        let mut checked = 0;
        for _ in 0..40 {
            let start = f.service.start_session("alice").unwrap();
            if cognitive_sum(&params, &f.alice.secret, &start.challenge).is_some() {
                continue;
            }
            let published = f.service.config().published.clone();
            let writer = if checked % 2 == 0 { &f.alice } else { &bob };
            let trace = writer.write(&published, &f.alphabet, 3, &SynthConfig::with_noise(0.0), &mut f.rng);
            let reply = f.service.submit_response(&start.session, Some(trace)).unwrap();
            if checked % 2 == 0 {
                assert_eq!(reply.outcome.cognitive, Some(VerifyOutcome::EmptyCaseAny));
                assert_eq!(reply.outcome.biometric, BiometricVerdict::Pass);
                assert_eq!(reply.outcome.matched, Some(3));
            } else {
                assert_ne!(reply.outcome.biometric, BiometricVerdict::Pass);
                assert!(!reply.outcome.passed());
            }
            checked += 1;
        }
        assert!(checked >= 4, "{checked}");
    }

    #[test]
    fn replay_matches_live_verdicts() {
        let mut f = fixture(small(), LockoutPolicy::default());
        let mut live = Vec::new();
        for i in 0..6 {
            if i % 3 == 0 {
                let start = f.service.start_session("alice").unwrap();
                f.service.submit_response(&start.session, None).unwrap();
                let r = f.service.submit_response(&start.session, None).unwrap();
                live.push((start.session, r.verdict.unwrap()));
            } else {
                live.push(f.run_session());
            }
        }
        assert_eq!(replay(&f.service.store().records()).unwrap(), live);
    }

    #[test]
    fn transcript_is_sound_for_accepted_sessions() {
        let mut f = fixture(small(), LockoutPolicy::default());
        for _ in 0..10 {
            f.run_session();
        }
        let t = f.service.export_transcript("alice", true);
        assert_eq!(t.len(), 20);
        assert!(t.is_consistent(&f.alice.secret));
        assert!(f.service.export_transcript("bob", false).is_empty());
    }

    #[test]
    fn lockout_after_rejects() {
        let lockout = LockoutPolicy { max_consecutive_rejects: Some(1), max_open_sessions: Some(2) };
        let f = fixture(small(), lockout);
        let a = f.service.start_session("alice").unwrap();
        let _b = f.service.start_session("alice").unwrap();
        assert!(matches!(f.service.start_session("alice"), Err(ServiceError::Unavailable)));
        f.service.submit_response(&a.session, None).unwrap();
        f.service.submit_response(&a.session, None).unwrap();
        assert!(matches!(f.service.start_session("alice"), Err(ServiceError::Unavailable)));
    }

    #[test]
    fn restart_reloads_enrollments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("audit.jsonl");
        let mut f = fixture(small(), LockoutPolicy::default());
        let config = f.service.config().clone();
        let service = AuthService::new(config.clone(), Store::open(&path).unwrap(), Some(1)).unwrap();
        let regs = f.alice.registration(&config.published, &f.alphabet, &SynthConfig::with_noise(0.0), &mut f.rng);
        service.register("alice", f.alice.secret.objects(), regs).unwrap();
        f.service = service;
        let (_, v) = f.run_session();
        drop(f.service);

        let reopened = AuthService::new(config.clone(), Store::open(&path).unwrap(), None).unwrap();
        assert!(reopened.enrollment("alice").is_some());
        let records = reopened.store().records();
        assert_eq!(records.iter().filter(|r| matches!(r, Record::Setup { .. })).count(), 1);
        assert_eq!(replay(&records).unwrap()[0].1, v);

        let mut other = config;
        other.biometric.z_user = 9.0;
        assert!(AuthService::new(other, Store::open(&path).unwrap(), None).is_err());
    }
}
