use std::collections::HashMap;

use super::candidates::{CandidateSet, DenseRounds, KSubsets};
use super::AttackError;
use crate::cognitive::{Secret, Transcript};
use crate::combin::{choose_ratio, log2_choose};

/// Meet-in-the-middle candidate recovery.
///
/// A secret is split into its `⌈k/2⌉` smallest objects (the left half) and
/// the rest. Right halves are stored in a hash table keyed by their per-round
/// partial response (0 where the half shows no object). Each left half then
/// probes the keys the right half would need to complete the observed
/// responses; where the left half is absent either the observed response or 0
/// is admissible, so those rounds branch. Collisions are re-checked against
/// the full transcript, which makes the output identical to brute force.
///
/// `budget` caps table size plus probes.
pub fn mitm_recover(transcript: &Transcript, budget: u64) -> Result<CandidateSet, AttackError> {
    let p = transcript.params();
    let (n, k, d) = (p.n(), p.k(), p.d());
    let (ka, kb) = (k.div_ceil(2), k / 2);
    let table_bits = (choose_ratio(n as u64, ka as u64, 1, 0) + choose_ratio(n as u64, kb as u64, 1, 0)).log2();
    if table_bits > (budget as f64).log2() {
        return Err(AttackError::BudgetExceeded { required_bits: table_bits, budget });
    }
    let dense = DenseRounds::new(transcript);
    let m = dense.rounds();

    let key_of = |subset: &[usize]| -> Vec<u8> {
        (0..m).map(|j| dense.partial(j, subset).unwrap_or(0) as u8).collect()
    };
    let mut table: HashMap<Vec<u8>, Vec<Vec<usize>>> = HashMap::new();
    let mut examined = 0u64;
    for b in KSubsets::new(n, kb) {
        examined += 1;
        table.entry(key_of(&b)).or_default().push(b);
    }

    let mut out = Vec::new();
    let mut key = vec![0u8; m];
    let mut branch_rounds = Vec::new();
    for a in KSubsets::new(n, ka) {
        let a_max = a.last().copied();
        branch_rounds.clear();
        for (j, kj) in key.iter_mut().enumerate() {
            let r = dense.responses[j];
            match dense.partial(j, &a) {
                Some(s) => *kj = ((r + d - s) % d) as u8,
                None => {
                    *kj = r as u8;
                    if r != 0 {
                        branch_rounds.push(j);
                    }
                }
            }
        }
        if branch_rounds.len() >= 63 {
            return Err(AttackError::BudgetExceeded { required_bits: branch_rounds.len() as f64, budget });
        }
        for mask in 0u64..1 << branch_rounds.len() {
            examined += 1;
            if examined > budget {
                let bits = log2_choose(n as u64, ka as u64) + branch_rounds.len() as f64;
                return Err(AttackError::BudgetExceeded { required_bits: bits, budget });
            }
            for (bit, &j) in branch_rounds.iter().enumerate() {
                key[j] = if mask >> bit & 1 == 1 { 0 } else { dense.responses[j] as u8 };
            }
            let Some(bs) = table.get(&key) else { continue };
            for b in bs {
                if a_max.zip(b.first()).is_some_and(|(hi, &lo)| hi >= lo) {
                    continue;
                }
                let y: Vec<usize> = a.iter().chain(b).copied().collect();
                if dense.consistent(&y) {
                    out.push(y);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(CandidateSet { candidates: out.into_iter().map(Secret::from_sorted).collect(), examined })
}
