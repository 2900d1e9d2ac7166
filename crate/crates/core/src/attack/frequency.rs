use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::candidates::KSubsets;
use super::stats::{chi_square_critical, chi_square_statistic};
use crate::cognitive::Transcript;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyMode {
    /// Count appearances of each tuple, ignoring responses.
    Rifa,
    /// Count appearances of each tuple per response value.
    Rdfa,
}

/// Distribution the per-tuple response counts are tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// The transcript's overall response distribution. A tuple is flagged
    /// when its presence shifts the responses away from the rest.
    #[default]
    Marginal,
    /// Uniform over `Z_d`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyOptions {
    pub alpha: f64,
    pub reference: Reference,
}

impl Default for FrequencyOptions {
    fn default() -> Self {
        Self { alpha: 0.01, reference: Reference::Marginal }
    }
}

/// Tuple counts in ascending tuple order. RIFA rows hold one count, RDFA rows
/// hold `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub delta: usize,
    pub mode: FrequencyMode,
    pub counts: Vec<(Vec<usize>, Vec<u64>)>,
}

impl FrequencyTable {
    pub fn get(&self, tuple: &[usize]) -> Option<&[u64]> {
        self.counts.binary_search_by(|(t, _)| t.as_slice().cmp(tuple)).ok().map(|i| self.counts[i].1.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleStat {
    pub tuple: Vec<usize>,
    pub appearances: u64,
    pub chi_square: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub table: FrequencyTable,
    /// RDFA only; same order as the table.
    pub stats: Vec<TupleStat>,
    pub critical_value: f64,
    pub alpha: f64,
    pub reference: Reference,
}

impl FrequencyReport {
    pub fn flagged(&self) -> impl Iterator<Item = &TupleStat> {
        self.stats.iter().filter(|s| s.flagged)
    }
}

/// Builds the δ-tuple frequency table and, for RDFA, a chi-square test with
/// `d - 1` degrees of freedom per tuple.
pub fn frequency_analysis(
    transcript: &Transcript,
    delta: usize,
    mode: FrequencyMode,
    options: &FrequencyOptions,
) -> FrequencyReport {
    let d = transcript.params().d() as usize;
    let width = match mode {
        FrequencyMode::Rifa => 1,
        FrequencyMode::Rdfa => d,
    };
    let mut counts: HashMap<Vec<usize>, Vec<u64>> = HashMap::new();
    let mut marginal = vec![0u64; d];
    for round in transcript.rounds() {
        let r = round.response.value() as usize;
        marginal[r] += 1;
        let mut objects = round.challenge.objects().to_vec();
        objects.sort_unstable();
        for pick in KSubsets::new(objects.len(), delta) {
            let tuple: Vec<usize> = pick.iter().map(|&i| objects[i]).collect();
            let cell = counts.entry(tuple).or_insert_with(|| vec![0; width]);
            cell[if width == 1 { 0 } else { r }] += 1;
        }
    }
    let mut counts: Vec<_> = counts.into_iter().collect();
    counts.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let critical_value = chi_square_critical(d as u32 - 1, options.alpha);
    let total: u64 = marginal.iter().sum();
    let shares: Vec<f64> = match options.reference {
        Reference::Uniform => vec![1.0 / d as f64; d],
        Reference::Marginal => marginal.iter().map(|&c| c as f64 / total.max(1) as f64).collect(),
    };
    let stats = match mode {
        FrequencyMode::Rifa => Vec::new(),
        FrequencyMode::Rdfa => counts
            .iter()
            .map(|(tuple, cells)| {
                let appearances: u64 = cells.iter().sum();
                let expected: Vec<f64> = shares.iter().map(|s| s * appearances as f64).collect();
                let chi_square = chi_square_statistic(cells, &expected);
                TupleStat { tuple: tuple.clone(), appearances, chi_square, flagged: chi_square > critical_value }
            })
            .collect(),
    };
    FrequencyReport {
        table: FrequencyTable { delta, mode, counts },
        stats,
        critical_value,
        alpha: options.alpha,
        reference: options.reference,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cognitive::{sample_secret, simulate_transcript, EmptyCasePolicy, SchemeParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_transcript_gives_empty_table() {
        let p = SchemeParams::cognitive(5, 3, 4, 10).unwrap();
        let rep = frequency_analysis(&Transcript::new(p), 1, FrequencyMode::Rdfa, &FrequencyOptions::default());
        assert!(rep.table.counts.is_empty());
        assert!(rep.stats.is_empty());
    }

    #[test]
    fn counts_add_up() {
        let p = SchemeParams::cognitive(3, 2, 4, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = sample_secret(&p, &mut rng);
        let t = simulate_transcript(&p, &x, 50, EmptyCasePolicy::Random, &mut rng).transcript;
        for delta in 1..=3 {
            let rifa = frequency_analysis(&t, delta, FrequencyMode::Rifa, &FrequencyOptions::default());
            let rdfa = frequency_analysis(&t, delta, FrequencyMode::Rdfa, &FrequencyOptions::default());
            let per_round = crate::combin::choose_exact(4, delta as u64).unwrap() as u64;
            let sum: u64 = rifa.table.counts.iter().map(|(_, c)| c[0]).sum();
            assert_eq!(sum, 50 * per_round);
            for (tuple, cells) in &rdfa.table.counts {
                assert_eq!(cells.iter().sum::<u64>(), rifa.table.get(tuple).unwrap()[0]);
                let shown = t.rounds().iter().filter(|r| tuple.iter().all(|o| r.challenge.objects().contains(o))).count();
                assert_eq!(shown as u64, cells.iter().sum::<u64>());
            }
        }
    }

    #[test]
    fn flawed_empty_case_exposes_pass_objects() {
        let p = SchemeParams::cognitive(5, 4, 8, 40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = sample_secret(&p, &mut rng);
        let t = simulate_transcript(&p, &x, 20_000, EmptyCasePolicy::Fixed(0), &mut rng).transcript;
        let rep = frequency_analysis(&t, 1, FrequencyMode::Rdfa, &FrequencyOptions::default());
        let (mut pass, mut decoy): (Vec<f64>, Vec<f64>) = (vec![], vec![]);
        for s in &rep.stats {
            if x.contains(s.tuple[0]) { pass.push(s.chi_square) } else { decoy.push(s.chi_square) }
        }
        let decoy_max = decoy.iter().cloned().fold(0.0, f64::max);
        assert!(pass.iter().all(|&s| s > decoy_max), "{pass:?} vs {decoy_max}");
    }
}
