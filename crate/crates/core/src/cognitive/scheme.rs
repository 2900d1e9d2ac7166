use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::{ParamsError, SchemeParams};

/// A `k`-subset of the object pool, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Secret {
    objects: Vec<usize>,
}

impl Secret {
    /// Validates the objects against `params` (exactly `k` distinct ids below `n`).
    pub fn new(params: &SchemeParams, objects: impl IntoIterator<Item = usize>) -> Result<Self, ParamsError> {
        let mut objects: Vec<usize> = objects.into_iter().collect();
        objects.sort_unstable();
        if let Some(w) = objects.windows(2).find(|w| w[0] == w[1]) {
            return Err(ParamsError::DuplicateObject(w[0]));
        }
        if let Some(&o) = objects.iter().find(|&&o| o >= params.n()) {
            return Err(ParamsError::ObjectOutOfRange { object: o, n: params.n() });
        }
        if objects.len() != params.k() {
            return Err(ParamsError::ObjectCount { expected: params.k(), got: objects.len() });
        }
        Ok(Self { objects })
    }

    /// Builds a secret from already sorted, distinct ids without re-validating.
    pub(crate) fn from_sorted(objects: Vec<usize>) -> Self {
        debug_assert!(objects.windows(2).all(|w| w[0] < w[1]));
        Self { objects }
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn contains(&self, object: usize) -> bool {
        self.objects.binary_search(&object).is_ok()
    }

    /// The secret as a binary indicator vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &o in &self.objects {
            v[o] = 1;
        }
        v
    }
}

/// `l` distinct objects paired with weights in `Z_d`.
///
/// Object order only matters for display: the response is order-invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Challenge {
    #[serde(rename = "a")]
    objects: Vec<usize>,
    #[serde(rename = "w")]
    weights: Vec<u32>,
}

impl Challenge {
    pub fn new(params: &SchemeParams, objects: Vec<usize>, weights: Vec<u32>) -> Result<Self, ParamsError> {
        let c = Self { objects, weights };
        c.validate(params)?;
        Ok(c)
    }

    pub fn validate(&self, params: &SchemeParams) -> Result<(), ParamsError> {
        if self.objects.len() != params.l() {
            return Err(ParamsError::ObjectCount { expected: params.l(), got: self.objects.len() });
        }
        if self.weights.len() != params.l() {
            return Err(ParamsError::ObjectCount { expected: params.l(), got: self.weights.len() });
        }
        let mut seen = vec![false; params.n()];
        for &o in &self.objects {
            if o >= params.n() {
                return Err(ParamsError::ObjectOutOfRange { object: o, n: params.n() });
            }
            if std::mem::replace(&mut seen[o], true) {
                return Err(ParamsError::DuplicateObject(o));
            }
        }
        if let Some(&w) = self.weights.iter().find(|&&w| w >= params.d()) {
            return Err(ParamsError::Weight { weight: w, d: params.d() });
        }
        Ok(())
    }

    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.objects.iter().copied().zip(self.weights.iter().copied())
    }

    /// The dense weight vector over the whole pool (zero off the window).
    pub fn weight_vector(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for (o, w) in self.pairs() {
            v[o] = w;
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Response(pub u32);

impl Response {
    pub fn new(params: &SchemeParams, r: u32) -> Result<Self, ParamsError> {
        if r >= params.d() {
            return Err(ParamsError::ResponseOutOfRange { response: r, d: params.d() });
        }
        Ok(Self(r))
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyOutcome {
    Correct,
    Wrong,
    /// No pass-object in the challenge; every response is accepted.
    EmptyCaseAny,
}

/// How a responder answers when no pass-object is shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmptyCasePolicy {
    /// Uniform over `Z_d`, as the scheme prescribes.
    #[default]
    Random,
    /// Always the same value. Used to simulate the flawed variant that
    /// frequency analysis breaks.
    Fixed(u32),
}

pub fn sample_secret<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Secret {
    let mut objects = index::sample(rng, params.n(), params.k()).into_vec();
    objects.sort_unstable();
    Secret::from_sorted(objects)
}

pub fn sample_challenge<R: Rng + ?Sized>(params: &SchemeParams, rng: &mut R) -> Challenge {
    let mut objects = index::sample(rng, params.n(), params.l()).into_vec();
    objects.shuffle(rng);
    let weights = (0..params.l()).map(|_| rng.random_range(0..params.d())).collect();
    Challenge { objects, weights }
}

/// Sum of pass-object weights mod `d`, or `None` in the empty case.
pub fn cognitive_sum(params: &SchemeParams, secret: &Secret, challenge: &Challenge) -> Option<u32> {
    let mut hit = false;
    let mut sum: u64 = 0;
    for (o, w) in challenge.pairs() {
        if secret.contains(o) {
            hit = true;
            sum += w as u64;
        }
    }
    hit.then(|| (sum % params.d() as u64) as u32)
}

/// The honest responder. Consumes randomness only in the empty case.
pub fn compute_response<R: Rng + ?Sized>(
    params: &SchemeParams,
    secret: &Secret,
    challenge: &Challenge,
    rng: &mut R,
) -> Response {
    respond_with_policy(params, secret, challenge, EmptyCasePolicy::Random, rng)
}

pub(crate) fn respond_with_policy<R: Rng + ?Sized>(
    params: &SchemeParams,
    secret: &Secret,
    challenge: &Challenge,
    policy: EmptyCasePolicy,
    rng: &mut R,
) -> Response {
    match cognitive_sum(params, secret, challenge) {
        Some(r) => Response(r),
        None => match policy {
            EmptyCasePolicy::Random => Response(rng.random_range(0..params.d())),
            EmptyCasePolicy::Fixed(r) => Response(r % params.d()),
        },
    }
}

pub fn verify_response(
    params: &SchemeParams,
    secret: &Secret,
    challenge: &Challenge,
    response: Response,
) -> Result<VerifyOutcome, ParamsError> {
    if response.0 >= params.d() {
        return Err(ParamsError::ResponseOutOfRange { response: response.0, d: params.d() });
    }
    Ok(match cognitive_sum(params, secret, challenge) {
        None => VerifyOutcome::EmptyCaseAny,
        Some(r) if r == response.0 => VerifyOutcome::Correct,
        Some(_) => VerifyOutcome::Wrong,
    })
}
