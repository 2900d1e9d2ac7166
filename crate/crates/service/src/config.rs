use hybridauth_core::biometric::{BiometricConfig, SymbolSet};
use hybridauth_core::SchemeParams;
use serde::{Deserialize, Serialize};

use crate::ServiceError;

/// What clients see: scheme parameters, the public response-to-symbol map
/// and the object pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedConfig {
    pub params: SchemeParams,
    pub symbols: SymbolSet,
    /// Display name or asset path of each object, indexed by object id.
    pub pool: Vec<String>,
}

/// Optional throttling; everything is off by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LockoutPolicy {
    /// Refuse new sessions after this many consecutive rejected sessions.
    pub max_consecutive_rejects: Option<u32>,
    /// Refuse new sessions while this many are open for the user.
    pub max_open_sessions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    pub published: PublishedConfig,
    pub biometric: BiometricConfig,
    pub lockout: LockoutPolicy,
}

impl ServiceConfig {
    pub fn new(published: PublishedConfig) -> Self {
        Self { published, biometric: BiometricConfig::default(), lockout: LockoutPolicy::default() }
    }

    pub fn params(&self) -> &SchemeParams {
        &self.published.params
    }
}

/// Validates and publishes a setup.
pub fn setup(params: SchemeParams, symbols: SymbolSet, pool: Vec<String>) -> Result<PublishedConfig, ServiceError> {
    if symbols.len() != params.d() as usize {
        return Err(ServiceError::Config(format!("{} symbols for d = {}", symbols.len(), params.d())));
    }
    if pool.len() != params.n() {
        return Err(ServiceError::Config(format!("pool has {} objects, n = {}", pool.len(), params.n())));
    }
    Ok(PublishedConfig { params, symbols, pool })
}
