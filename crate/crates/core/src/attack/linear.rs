use serde::{Deserialize, Serialize};

use super::candidates::DenseRounds;
use super::zmod::{Field, Matrix};
use super::AttackError;
use crate::cognitive::{Secret, Transcript};

/// Linear congruences `rows · v ≡ rhs (mod d)` assembled from a transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSystem {
    pub d: u32,
    pub cols: usize,
    pub rows: Vec<Vec<u32>>,
    pub rhs: Vec<u32>,
    /// Transcript round each row came from.
    pub source: Vec<usize>,
}

impl CongruenceSystem {
    fn to_augmented(&self) -> Matrix {
        let p = self.d;
        let with_rhs: Vec<Vec<u32>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| row.iter().copied().chain([b]).collect())
            .collect();
        Matrix::from_rows(self.cols + 1, &with_rhs, p)
    }
}

/// One row `w` per zero-response round. Every such row annihilates the
/// secret's indicator vector, including rows from empty-case rounds (where
/// all pass-object weights are absent).
pub fn zero_response_system(transcript: &Transcript) -> CongruenceSystem {
    let n = transcript.params().n();
    let mut sys = CongruenceSystem { d: transcript.params().d(), cols: n, rows: vec![], rhs: vec![], source: vec![] };
    for (j, round) in transcript.rounds().iter().enumerate() {
        if round.response.value() == 0 {
            sys.rows.push(round.challenge.weight_vector(n));
            sys.rhs.push(0);
            sys.source.push(j);
        }
    }
    sys
}

/// For `d = 2`: zero-response rows as above plus one row per one-response
/// round, each with its own binary slack column, `w·x + s_j ≡ 1`. The slack
/// is 1 exactly when the round was an empty case answered with 1.
pub fn slack_system(transcript: &Transcript) -> Result<CongruenceSystem, AttackError> {
    let p = transcript.params();
    if p.d() != 2 {
        return Err(AttackError::Input(format!("slack variables need d = 2, got d = {}", p.d())));
    }
    let n = p.n();
    let ones: Vec<usize> =
        transcript.rounds().iter().enumerate().filter(|(_, r)| r.response.value() == 1).map(|(j, _)| j).collect();
    let cols = n + ones.len();
    let mut sys = CongruenceSystem { d: 2, cols, rows: vec![], rhs: vec![], source: vec![] };
    let mut slack = 0;
    for (j, round) in transcript.rounds().iter().enumerate() {
        let mut row = round.challenge.weight_vector(n);
        row.resize(cols, 0);
        if round.response.value() == 1 {
            row[n + slack] = 1;
            slack += 1;
        }
        sys.rows.push(row);
        sys.rhs.push(round.response.value());
        sys.source.push(j);
    }
    Ok(sys)
}

struct BinarySolutions {
    rank: usize,
    free: usize,
    checked: u64,
    accepted: Vec<Vec<u8>>,
}

/// Pivot column, right-hand side and nonzero coefficients on free columns.
type ReducedRow = (usize, u8, Vec<(usize, u8)>);

/// Enumerates the solutions of `sys` whose every coordinate is 0 or 1 and
/// keeps those `accept` approves. The free variables of the reduced system
/// range over `{0, 1}`; pivot variables follow and must land in `{0, 1}`.
fn binary_solutions(
    sys: &CongruenceSystem,
    budget: u64,
    mut accept: impl FnMut(&[u8]) -> bool,
) -> Result<BinarySolutions, AttackError> {
    let field = Field::new(sys.d)?;
    let mut m = sys.to_augmented();
    let pivots = m.rref(&field, sys.cols);
    let rank = pivots.len();
    if (rank..m.rows).any(|i| m.get(i, sys.cols) != 0) {
        return Err(AttackError::Inconsistent);
    }
    let mut is_pivot = vec![false; sys.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free_cols: Vec<usize> = (0..sys.cols).filter(|&c| !is_pivot[c]).collect();
    let free = free_cols.len();
    if free >= 63 || 1u64 << free > budget {
        return Err(AttackError::Underdetermined { free, solutions: 0 });
    }
    // per pivot row: rhs and the nonzero coefficients on free columns
    let reduced: Vec<ReducedRow> = pivots
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let terms = free_cols
                .iter()
                .enumerate()
                .filter(|&(_, &f)| m.get(i, f) != 0)
                .map(|(bit, &f)| (bit, m.get(i, f)))
                .collect();
            (c, m.get(i, sys.cols), terms)
        })
        .collect();

    let p = sys.d;
    let mut v = vec![0u8; sys.cols];
    let mut accepted = Vec::new();
    let mut checked = 0;
    'masks: for mask in 0u64..1 << free {
        checked += 1;
        for (bit, &f) in free_cols.iter().enumerate() {
            v[f] = (mask >> bit & 1) as u8;
        }
        for (c, b, terms) in &reduced {
            let mut val = *b as u32;
            for &(bit, coef) in terms {
                if mask >> bit & 1 == 1 {
                    val += p - coef as u32;
                }
            }
            let val = val % p;
            if val > 1 {
                continue 'masks;
            }
            v[*c] = val as u8;
        }
        if accept(&v) {
            accepted.push(v.clone());
        }
    }
    Ok(BinarySolutions { rank, free, checked, accepted })
}

fn support(v: &[u8]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeOutcome {
    pub secret: Secret,
    pub rows: usize,
    pub rank: usize,
    /// Dimension of the solution space of the reduced system.
    pub free: usize,
    pub solutions_checked: u64,
}

/// Linearization attack: eliminate the zero-response congruences over `Z_d`
/// and search the solution space for the single binary weight-`k` vector
/// that is consistent with the whole transcript.
///
/// Succeeds only when exactly one such vector exists. `budget` bounds the
/// `2^free` binary assignments tried.
pub fn ge_recover(transcript: &Transcript, budget: u64) -> Result<GeOutcome, AttackError> {
    let p = transcript.params();
    let sys = zero_response_system(transcript);
    let dense = DenseRounds::new(transcript);
    let sols = binary_solutions(&sys, budget, |v| {
        v.iter().filter(|&&b| b == 1).count() == p.k() && dense.consistent(&support(v))
    })?;
    match sols.accepted.as_slice() {
        [] => Err(AttackError::Inconsistent),
        [v] => Ok(GeOutcome {
            secret: Secret::from_sorted(support(v)),
            rows: sys.rows.len(),
            rank: sols.rank,
            free: sols.free,
            solutions_checked: sols.checked,
        }),
        many => Err(AttackError::Underdetermined { free: sols.free, solutions: many.len() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackOutcome {
    pub secret: Secret,
    /// `(round, s_j)` for every one-response round.
    pub slack: Vec<(usize, u32)>,
    pub rows: usize,
    pub rank: usize,
    pub free: usize,
    pub solutions_checked: u64,
}

/// Linearization over `Z_2` using every round, with one slack variable per
/// one-response round.
pub fn ge_slack_recover(transcript: &Transcript, budget: u64) -> Result<SlackOutcome, AttackError> {
    let p = transcript.params();
    let n = p.n();
    let sys = slack_system(transcript)?;
    let dense = DenseRounds::new(transcript);
    let sols = binary_solutions(&sys, budget, |v| {
        v[..n].iter().filter(|&&b| b == 1).count() == p.k() && dense.consistent(&support(&v[..n]))
    })?;
    match sols.accepted.as_slice() {
        [] => Err(AttackError::Inconsistent),
        [v] => {
            let ones = sys.source.iter().zip(&sys.rows).filter(|(_, row)| row[n..].contains(&1));
            let slack = ones
                .map(|(&j, row)| {
                    let col = n + row[n..].iter().position(|&b| b == 1).expect("slack row");
                    (j, v[col] as u32)
                })
                .collect();
            Ok(SlackOutcome {
                secret: Secret::from_sorted(support(&v[..n])),
                slack,
                rows: sys.rows.len(),
                rank: sols.rank,
                free: sols.free,
                solutions_checked: sols.checked,
            })
        }
        many => Err(AttackError::Underdetermined { free: sols.free, solutions: many.len() }),
    }
}
