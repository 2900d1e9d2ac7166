use serde::{Deserialize, Serialize};

use super::AttackError;
use crate::cognitive::{Secret, Transcript};
use crate::combin::log2_choose;

/// Secrets consistent with a transcript, in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub candidates: Vec<Secret>,
    /// Subsets (or half-subset probes, for MitM) examined.
    pub examined: u64,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn contains(&self, secret: &Secret) -> bool {
        self.candidates.binary_search(secret).is_ok()
    }

    /// The unique candidate, if exactly one survived.
    pub fn unique(&self) -> Option<&Secret> {
        match self.candidates.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }
}

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct KSubsets {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, current: (0..k).collect(), done: k > n }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        match (0..k).rev().find(|&i| self.current[i] < self.n - k + i) {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

pub(crate) const ABSENT: u32 = u32::MAX;

/// Rounds laid out as dense `m × n` weight rows (`ABSENT` where the object is
/// not shown) for fast repeated consistency checks.
pub(crate) struct DenseRounds {
    pub d: u32,
    pub n: usize,
    pub weights: Vec<u32>,
    pub responses: Vec<u32>,
}

impl DenseRounds {
    pub fn new(transcript: &Transcript) -> Self {
        let n = transcript.params().n();
        let mut weights = vec![ABSENT; transcript.len() * n];
        for (j, round) in transcript.rounds().iter().enumerate() {
            for (o, w) in round.challenge.pairs() {
                weights[j * n + o] = w;
            }
        }
        Self {
            d: transcript.params().d(),
            n,
            weights,
            responses: transcript.rounds().iter().map(|r| r.response.value()).collect(),
        }
    }

    pub fn rounds(&self) -> usize {
        self.responses.len()
    }

    /// Sum mod `d` of the subset's weights in round `j`, or `None` if no
    /// member is shown.
    #[inline]
    pub fn partial(&self, j: usize, subset: &[usize]) -> Option<u32> {
        let row = &self.weights[j * self.n..(j + 1) * self.n];
        let mut hit = false;
        let mut sum = 0u32;
        for &o in subset {
            let w = row[o];
            if w != ABSENT {
                hit = true;
                sum += w;
            }
        }
        hit.then_some(sum % self.d)
    }

    pub fn consistent(&self, subset: &[usize]) -> bool {
        (0..self.rounds()).all(|j| self.partial(j, subset).is_none_or(|s| s == self.responses[j]))
    }
}

/// Every `k`-subset consistent with the transcript. Refuses when `C(n, k)`
/// exceeds `budget`.
pub fn brute_force_recover(transcript: &Transcript, budget: u64) -> Result<CandidateSet, AttackError> {
    let p = transcript.params();
    let bits = log2_choose(p.n() as u64, p.k() as u64);
    if bits > (budget as f64).log2() {
        return Err(AttackError::BudgetExceeded { required_bits: bits, budget });
    }
    let dense = DenseRounds::new(transcript);
    let mut examined = 0;
    let candidates = KSubsets::new(p.n(), p.k())
        .inspect(|_| examined += 1)
        .filter(|y| dense.consistent(y))
        .map(Secret::from_sorted)
        .collect();
    Ok(CandidateSet { candidates, examined })
}
