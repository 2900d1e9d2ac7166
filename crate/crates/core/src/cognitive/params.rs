use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("modulus d must be at least 2, got {0}")]
    Modulus(u32),
    #[error("secret size k must satisfy 1 <= k < n (k = {k}, n = {n})")]
    SecretSize { k: usize, n: usize },
    #[error("window size l must satisfy 1 <= l <= n (l = {l}, n = {n})")]
    Window { l: usize, n: usize },
    #[error("rounds per session must be at least 1")]
    Rounds,
    #[error("renderings per symbol must be at least 1")]
    Renderings,
    #[error("object {object} is outside the pool of {n}")]
    ObjectOutOfRange { object: usize, n: usize },
    #[error("expected {expected} distinct objects, got {got}")]
    ObjectCount { expected: usize, got: usize },
    #[error("duplicate object {0}")]
    DuplicateObject(usize),
    #[error("weight {weight} is not in Z_{d}")]
    Weight { weight: u32, d: u32 },
    #[error("response {response} is not in Z_{d}")]
    ResponseOutOfRange { response: u32, d: u32 },
    #[error("intersection size {i} exceeds min(k, l) = {max}")]
    IntersectionSize { i: usize, max: usize },
    #[error("probability {0} is outside (0, 1]")]
    Probability(f64),
}

/// Public parameters shared by the cognitive and biometric halves.
///
/// `d` is the modulus (and number of symbols), `k` the secret size, `l` the
/// challenge window, `n` the object pool size, `gamma` the rounds per session
/// and `t` the renderings collected per symbol at registration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct SchemeParams {
    d: u32,
    k: usize,
    l: usize,
    n: usize,
    gamma: u32,
    t: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    d: u32,
    k: usize,
    l: usize,
    n: usize,
    #[serde(default = "one_u32")]
    gamma: u32,
    #[serde(default = "one_usize")]
    t: usize,
}

fn one_u32() -> u32 {
    1
}

fn one_usize() -> usize {
    1
}

impl TryFrom<RawParams> for SchemeParams {
    type Error = ParamsError;

    fn try_from(raw: RawParams) -> Result<Self, Self::Error> {
        SchemeParams::new(raw.d, raw.k, raw.l, raw.n, raw.gamma, raw.t)
    }
}

impl From<SchemeParams> for RawParams {
    fn from(p: SchemeParams) -> Self {
        RawParams { d: p.d, k: p.k, l: p.l, n: p.n, gamma: p.gamma, t: p.t }
    }
}

impl SchemeParams {
    pub fn new(d: u32, k: usize, l: usize, n: usize, gamma: u32, t: usize) -> Result<Self, ParamsError> {
        if d < 2 {
            return Err(ParamsError::Modulus(d));
        }
        if k == 0 || k >= n {
            return Err(ParamsError::SecretSize { k, n });
        }
        if l == 0 || l > n {
            return Err(ParamsError::Window { l, n });
        }
        if gamma == 0 {
            return Err(ParamsError::Rounds);
        }
        if t == 0 {
            return Err(ParamsError::Renderings);
        }
        Ok(Self { d, k, l, n, gamma, t })
    }

    /// Parameters with `gamma = 1` and `t = 1`, for purely cognitive analysis.
    pub fn cognitive(d: u32, k: usize, l: usize, n: usize) -> Result<Self, ParamsError> {
        Self::new(d, k, l, n, 1, 1)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn with_gamma(self, gamma: u32) -> Result<Self, ParamsError> {
        Self::new(self.d, self.k, self.l, self.n, gamma, self.t)
    }

    pub fn with_t(self, t: usize) -> Result<Self, ParamsError> {
        Self::new(self.d, self.k, self.l, self.n, self.gamma, t)
    }
}

impl std::fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {}, {})", self.d, self.k, self.l, self.n)
    }
}
