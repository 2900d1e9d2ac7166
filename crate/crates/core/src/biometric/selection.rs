//! Threshold sweeps and greedy forward feature selection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dtw::dtw;
use super::features::{FeatureError, FeatureId, FeatureSet};
use super::template::{mean_sd, medoid_index};
use super::{Z_MAX, Z_STEP};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZListEntry {
    pub z: f64,
    pub tpr: f64,
    pub fpr: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectionError {
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("registration needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Registration and test renderings of one symbol for a user, plus an
/// attacker's renderings of the same symbol.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct UserAttackerPair {
    pub registration: Vec<FeatureSet>,
    pub user_tests: Vec<FeatureSet>,
    pub attacker_tests: Vec<FeatureSet>,
}

/// The `z` grid `0, 0.125, ..., 10`.
pub fn z_grid() -> impl Iterator<Item = f64> {
    (0..=(Z_MAX / Z_STEP) as u32).map(|k| k as f64 * Z_STEP)
}

/// Per-feature DTW distances from the feature's medoid template to every
/// registration and test sample. Multi-feature distances are sums of these,
/// so any subset's z-list follows without recomputing DTW.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PairDistances {
    pub registration: BTreeMap<FeatureId, Vec<f64>>,
    pub user: BTreeMap<FeatureId, Vec<f64>>,
    pub attacker: BTreeMap<FeatureId, Vec<f64>>,
}

type FeatureDistances = (FeatureId, Vec<f64>, Vec<f64>, Vec<f64>);

impl PairDistances {
    pub fn compute(pair: &UserAttackerPair, features: &[FeatureId], radius: f64) -> Result<Self, SelectionError> {
        if pair.registration.len() < 2 {
            return Err(SelectionError::TooFewSamples(pair.registration.len()));
        }
        if pair.user_tests.is_empty() {
            return Err(SelectionError::Empty("user test set"));
        }
        if pair.attacker_tests.is_empty() {
            return Err(SelectionError::Empty("attacker test set"));
        }
        let per_feature: Vec<FeatureDistances> = features
            .par_iter()
            .map(|&f| {
                let reg = pair.registration.iter().map(|s| s.get(f)).collect::<Result<Vec<_>, _>>()?;
                let template = reg[medoid_index(&reg, radius)];
                let against = |set: &[FeatureSet]| -> Result<Vec<f64>, FeatureError> {
                    set.iter().map(|s| Ok(dtw(template, s.get(f)?, radius))).collect()
                };
                Ok((
                    f,
                    reg.iter().map(|s| dtw(template, s, radius)).collect(),
                    against(&pair.user_tests)?,
                    against(&pair.attacker_tests)?,
                ))
            })
            .collect::<Result<_, FeatureError>>()?;
        let mut out = Self::default();
        for (f, reg, user, attacker) in per_feature {
            out.registration.insert(f, reg);
            out.user.insert(f, user);
            out.attacker.insert(f, attacker);
        }
        Ok(out)
    }

    fn summed(map: &BTreeMap<FeatureId, Vec<f64>>, subset: &[FeatureId]) -> Vec<f64> {
        let len = map.values().next().map_or(0, Vec::len);
        let mut total = vec![0.0; len];
        for f in subset {
            for (t, d) in total.iter_mut().zip(&map[f]) {
                *t += d;
            }
        }
        total
    }

    /// TPR and FPR at every grid `z` for the template built on `subset`.
    pub fn z_list(&self, subset: &[FeatureId]) -> Vec<ZListEntry> {
        let (mu, sigma) = mean_sd(&Self::summed(&self.registration, subset));
        let user = Self::summed(&self.user, subset);
        let attacker = Self::summed(&self.attacker, subset);
        let rate = |ds: &[f64], h: f64| ds.iter().filter(|&&d| d <= h).count() as f64 / ds.len() as f64;
        z_grid()
            .map(|z| {
                let h = mu + z * sigma;
                ZListEntry { z, tpr: rate(&user, h), fpr: rate(&attacker, h) }
            })
            .collect()
    }
}

/// z-list for one user-attacker pair.
pub fn get_z_list(
    subset: &[FeatureId],
    registration: &[FeatureSet],
    user_tests: &[FeatureSet],
    attacker_tests: &[FeatureSet],
    radius: f64,
) -> Result<Vec<ZListEntry>, SelectionError> {
    if subset.is_empty() {
        return Err(SelectionError::Empty("feature subset"));
    }
    let pair = UserAttackerPair {
        registration: registration.to_vec(),
        user_tests: user_tests.to_vec(),
        attacker_tests: attacker_tests.to_vec(),
    };
    Ok(PairDistances::compute(&pair, subset, radius)?.z_list(subset))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    pub features: Vec<FeatureId>,
    pub z: f64,
    pub tpr_sum: f64,
    pub fpr_sum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub features: Vec<FeatureId>,
    pub z: f64,
    pub tpr_sum: f64,
    pub fpr_sum: f64,
    /// Best subset after each greedy addition.
    pub steps: Vec<SelectionStep>,
}

/// Higher TPR sum first, then lower FPR sum, then smaller `z`.
fn better(a: &SelectionStep, b: &SelectionStep) -> bool {
    if (a.tpr_sum - b.tpr_sum).abs() > TOL {
        return a.tpr_sum > b.tpr_sum;
    }
    if (a.fpr_sum - b.fpr_sum).abs() > TOL {
        return a.fpr_sum < b.fpr_sum;
    }
    a.z < b.z - TOL
}

fn best_point(caches: &[PairDistances], subset: &[FeatureId]) -> SelectionStep {
    let lists: Vec<Vec<ZListEntry>> = caches.iter().map(|c| c.z_list(subset)).collect();
    let mut best: Option<SelectionStep> = None;
    for (k, z) in z_grid().enumerate() {
        let step = SelectionStep {
            features: subset.to_vec(),
            z,
            tpr_sum: lists.iter().map(|l| l[k].tpr).sum(),
            fpr_sum: lists.iter().map(|l| l[k].fpr).sum(),
        };
        if best.as_ref().is_none_or(|b| better(&step, b)) {
            best = Some(step);
        }
    }
    best.expect("grid is non-empty")
}

/// Greedy forward selection: repeatedly add the feature whose subset reaches
/// the highest summed TPR with the lowest summed FPR, until every feature is
/// used; then return the best of the nested subsets (smaller `z`, then fewer
/// features, break ties).
pub fn select_features(
    all_features: &[FeatureId],
    pairs: &[UserAttackerPair],
    radius: f64,
) -> Result<Selection, SelectionError> {
    if all_features.is_empty() {
        return Err(SelectionError::Empty("feature list"));
    }
    if pairs.is_empty() {
        return Err(SelectionError::Empty("pair list"));
    }
    let caches = pairs
        .iter()
        .map(|p| PairDistances::compute(p, all_features, radius))
        .collect::<Result<Vec<_>, _>>()?;

    let mut selected: Vec<FeatureId> = Vec::new();
    let mut remaining: Vec<FeatureId> = all_features.to_vec();
    let mut steps: Vec<SelectionStep> = Vec::new();
    while !remaining.is_empty() {
        let candidates: Vec<SelectionStep> = remaining
            .par_iter()
            .map(|&f| {
                let mut subset = selected.clone();
                subset.push(f);
                best_point(&caches, &subset)
            })
            .collect();
        let mut pick = 0;
        for (i, c) in candidates.iter().enumerate().skip(1) {
            if better(c, &candidates[pick]) {
                pick = i;
            }
        }
        selected.push(remaining.remove(pick));
        steps.push(candidates[pick].clone());
    }
    let mut best = &steps[0];
    for s in &steps[1..] {
        if better(s, best) {
            best = s;
        }
    }
    Ok(Selection {
        features: best.features.clone(),
        z: best.z,
        tpr_sum: best.tpr_sum,
        fpr_sum: best.fpr_sum,
        steps,
    })
}
