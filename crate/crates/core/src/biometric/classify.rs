use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dtw::DEFAULT_RADIUS;
use super::features::{FeatureError, FeatureId, FeatureSet};
use super::template::{build_template, Purpose, Template, TemplateError};

/// How templates are built and thresholded at registration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiometricConfig {
    pub radius: f64,
    pub z_sym: f64,
    pub z_user: f64,
    /// Raise each template's `z` to its fitted value when that is larger, so
    /// every registration sample is accepted.
    pub fit_z: bool,
    /// Features for user templates; `None` uses every feature present in all
    /// registration samples of the symbol.
    pub user_features: Option<Vec<FeatureId>>,
}

impl Default for BiometricConfig {
    fn default() -> Self {
        Self { radius: DEFAULT_RADIUS, z_sym: 3.0, z_user: 3.0, fit_z: false, user_features: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTemplates {
    pub sym: Template,
    pub user: Template,
}

/// Templates for every symbol, indexed by response value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiometricProfile {
    pub symbols: Vec<SymbolTemplates>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// The rendering did not match the symbol template.
    Symbol,
    /// The symbol matched but the dynamics do not match the user.
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "lowercase")]
pub enum Decision {
    Accept { symbol: usize },
    Reject { stage: Stage, symbol: usize },
}

impl Decision {
    pub fn is_accept(&self) -> bool {
        matches!(self, Decision::Accept { .. })
    }

    pub fn symbol(&self) -> usize {
        match *self {
            Decision::Accept { symbol } | Decision::Reject { symbol, .. } => symbol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("symbol {symbol} is outside the {count} enrolled symbols")]
    UnknownSymbol { symbol: usize, count: usize },
    #[error("profile has no symbols")]
    EmptyProfile,
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

fn common_features(samples: &[FeatureSet]) -> Vec<FeatureId> {
    let mut common: BTreeSet<FeatureId> = samples[0].available().collect();
    for s in &samples[1..] {
        common.retain(|f| s.has(*f));
    }
    common.into_iter().collect()
}

impl BiometricProfile {
    /// `per_symbol[r]` holds the registration renderings of symbol `r`.
    pub fn build(per_symbol: &[Vec<FeatureSet>], config: &BiometricConfig) -> Result<Self, TemplateError> {
        let symbols = per_symbol
            .iter()
            .map(|samples| {
                if samples.len() < 2 {
                    return Err(TemplateError::TooFewSamples(samples.len()));
                }
                let features = config.user_features.clone().unwrap_or_else(|| common_features(samples));
                let mut sym = build_template(samples, &[], Purpose::Sym, config.radius)?.with_z(config.z_sym);
                let mut user = build_template(samples, &features, Purpose::User, config.radius)?.with_z(config.z_user);
                if config.fit_z {
                    sym.z = sym.z.max(sym.fitted_z(samples)?);
                    user.z = user.z.max(user.fitted_z(samples)?);
                }
                Ok(SymbolTemplates { sym, user })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Two-step decision. With `expected` (a challenge that shows a pass-object)
/// the rendering must match that symbol's template; without it the nearest
/// symbol template is taken as the intended symbol. Either way the symbol
/// threshold is checked first, then the user template of that symbol.
pub fn classify(
    rendering: &FeatureSet,
    profile: &BiometricProfile,
    expected: Option<usize>,
) -> Result<Decision, ClassifyError> {
    if profile.is_empty() {
        return Err(ClassifyError::EmptyProfile);
    }
    let (symbol, sym_distance) = match expected {
        Some(symbol) => {
            let t = profile
                .symbols
                .get(symbol)
                .ok_or(ClassifyError::UnknownSymbol { symbol, count: profile.len() })?;
            (symbol, t.sym.distance(rendering)?)
        }
        None => {
            let mut best = (0, f64::INFINITY);
            for (i, t) in profile.symbols.iter().enumerate() {
                let d = t.sym.distance(rendering)?;
                if d < best.1 {
                    best = (i, d);
                }
            }
            best
        }
    };
    let templates = &profile.symbols[symbol];
    if sym_distance > templates.sym.threshold() {
        return Ok(Decision::Reject { stage: Stage::Symbol, symbol });
    }
    if !templates.user.accepts(rendering)? {
        return Ok(Decision::Reject { stage: Stage::User, symbol });
    }
    Ok(Decision::Accept { symbol })
}
