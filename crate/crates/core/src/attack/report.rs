use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CandidateSet;
use crate::cognitive::Secret;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Work {
    pub rows: u64,
    pub candidates: u64,
}

/// Uniform JSON summary of one attack run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: String,
    pub recovered: bool,
    pub secret: Option<Vec<usize>>,
    pub work: Work,
    pub stats: Value,
}

impl AttackReport {
    pub fn new(attack: &str, secret: Option<&Secret>, work: Work, stats: Value) -> Self {
        Self {
            attack: attack.to_owned(),
            recovered: secret.is_some(),
            secret: secret.map(|s| s.objects().to_vec()),
            work,
            stats,
        }
    }

    /// Recovered only when a single candidate remains; the full list goes in
    /// `stats.candidates`.
    pub fn from_candidates(attack: &str, set: &CandidateSet, rows: u64) -> Self {
        let list: Vec<&[usize]> = set.candidates.iter().map(|s| s.objects()).collect();
        Self::new(
            attack,
            set.unique(),
            Work { rows, candidates: set.examined },
            serde_json::json!({ "remaining": set.len(), "candidates": list }),
        )
    }
}
