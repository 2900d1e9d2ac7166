//! Closed-form security quantities for a parameter set: random-guess
//! probability, the information-theoretic bound on observed rounds, and the
//! cost of brute force, meet-in-the-middle and Coskun-Herley style attacks.

use serde::{Deserialize, Serialize};

use super::params::{ParamsError, SchemeParams};
use crate::combin::{choose_ratio, log2_choose, log2_choose_real};

/// `P[|a ∩ x| = i]`, hypergeometric in `(n, k, l)`.
pub fn hypergeom_pmf(params: &SchemeParams, i: usize) -> Result<f64, ParamsError> {
    let (n, k, l) = (params.n() as u64, params.k() as u64, params.l() as u64);
    let max = k.min(l);
    if i as u64 > max {
        return Err(ParamsError::IntersectionSize { i, max: max as usize });
    }
    let i = i as u64;
    if l - i > n - k {
        return Ok(0.0);
    }
    // C(k,i) C(n-k,l-i) / C(n,l) = C(l,i) C(n-l,k-i) / C(n,k); the second form
    // keeps the denominator small when k << l
    Ok(choose_ratio(k, i, 1, 0) * choose_ratio(n - k, l - i, n, l))
}

/// Probability that a challenge shows none of the pass-objects.
pub fn p_empty(params: &SchemeParams) -> f64 {
    hypergeom_pmf(params, 0).expect("i = 0 is always in range")
}

/// Success probability of guessing one response without the secret.
pub fn p_random_guess(params: &SchemeParams) -> f64 {
    let p0 = p_empty(params);
    p0 + (1.0 - p0) / params.d() as f64
}

/// Real-valued number of observed rounds after which one candidate is
/// expected to remain.
pub fn info_theoretic_bound_real(params: &SchemeParams) -> f64 {
    -log2_choose(params.n() as u64, params.k() as u64) / p_random_guess(params).log2()
}

/// [`info_theoretic_bound_real`] rounded to the nearest integer.
pub fn info_theoretic_bound(params: &SchemeParams) -> u64 {
    info_theoretic_bound_real(params).round() as u64
}

/// `p_RG^m · C(n, k)`: expected number of secrets consistent with `m`
/// observed rounds, treating each candidate's survival per round as
/// independent with probability `p_RG`.
pub fn expected_surviving_candidates(params: &SchemeParams, m: u64) -> f64 {
    let log2 = m as f64 * p_random_guess(params).log2() + log2_choose(params.n() as u64, params.k() as u64);
    log2.exp2()
}

/// Exact expected number of consistent candidates when the rounds come from
/// an honest responder holding a planted secret.
///
/// Unlike [`expected_surviving_candidates`] this accounts for candidates that
/// overlap the planted secret: a candidate `y` always agrees with `x` on a
/// challenge that hides their symmetric difference.
pub fn expected_survivors_planted(params: &SchemeParams, m: u64) -> f64 {
    let (n, k, l) = (params.n() as u64, params.k() as u64, params.l() as u64);
    let d = params.d() as f64;
    let avoid = |s: u64| if s > n { 0.0 } else { choose_ratio(n - s, l, n, l) };
    let p0 = avoid(k);
    (0..=k.min(n - k))
        .map(|j| {
            let count = choose_ratio(k, j, 1, 0) * choose_ratio(n - k, j, 1, 0);
            if j == 0 {
                return count;
            }
            let trivially = p0 + avoid(2 * j) - avoid(k + j);
            let per_round = trivially + (1.0 - trivially) / d;
            count * per_round.powf(m as f64)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complexity {
    /// `log2 C(n, k)`.
    pub bf_bits: f64,
    /// `log2 C(n, k/2)`, real-valued for odd `k`.
    pub mitm_bits: f64,
}

pub fn complexity_bits(params: &SchemeParams) -> Complexity {
    let n = params.n() as u64;
    let k = params.k() as u64;
    Complexity {
        bf_bits: log2_choose(n, k),
        mitm_bits: log2_choose_real(n as f64, k as f64 / 2.0),
    }
}

/// One point `ξ` of the Coskun-Herley trade-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChPoint {
    pub xi: u32,
    /// `log2(|X| / C(log2|X|, ξ))`.
    pub time_bits: f64,
    /// Gap in agreement probability between distance `ξ-1` and `ξ+1`
    /// candidates.
    pub epsilon: f64,
    /// `ceil(1/ε²)`; `None` when `ε = 0`.
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChEstimate {
    pub budget_bits: f64,
    /// `log2 |X|`.
    pub space_bits: f64,
    /// Average number of secret bits used per challenge, `(l/n)·log2|X|`.
    pub upsilon: f64,
    pub point: ChPoint,
    /// Samples reported for the attack: `max(ceil(1/ε²), m_it)`.
    pub required_samples: Option<u64>,
    /// `false` when even the cheapest `ξ` exceeds the budget; `point` is then
    /// that cheapest point.
    pub feasible: bool,
}

pub fn ch_point(params: &SchemeParams, xi: u32) -> ChPoint {
    let space = log2_choose(params.n() as u64, params.k() as u64);
    let upsilon = params.l() as f64 / params.n() as f64 * space;
    let x = xi as f64;
    let time_bits = space - log2_choose_real(space, x);
    let base = log2_choose_real(space, upsilon);
    let ratio = |a: f64| (log2_choose_real(a, upsilon) - base).exp2();
    let epsilon = (ratio(space - x + 1.0) - ratio(space - x - 1.0)) * (1.0 - 1.0 / params.d() as f64);
    let samples = (epsilon > 0.0).then(|| (1.0 / (epsilon * epsilon)).ceil() as u64);
    ChPoint { xi, time_bits, epsilon, samples }
}

/// Picks the `ξ` whose running time lands closest to `budget_bits` (on the
/// decreasing branch `ξ <= log2|X| / 2`) and reports the samples it needs.
pub fn ch_attack_estimate(params: &SchemeParams, budget_bits: f64) -> ChEstimate {
    let space = log2_choose(params.n() as u64, params.k() as u64);
    let upsilon = params.l() as f64 / params.n() as f64 * space;
    let last = ((space / 2.0).floor() as u32).max(1);
    let points: Vec<ChPoint> = (1..=last).map(|xi| ch_point(params, xi)).filter(|p| p.samples.is_some()).collect();
    let cheapest = points
        .iter()
        .min_by(|a, b| a.time_bits.total_cmp(&b.time_bits))
        .copied()
        .unwrap_or_else(|| ch_point(params, 1));
    let feasible = cheapest.time_bits <= budget_bits;
    let point = if feasible {
        points
            .iter()
            .min_by(|a, b| (a.time_bits - budget_bits).abs().total_cmp(&(b.time_bits - budget_bits).abs()))
            .copied()
            .unwrap_or(cheapest)
    } else {
        cheapest
    };
    let m_it = info_theoretic_bound(params);
    ChEstimate {
        budget_bits,
        space_bits: space,
        upsilon,
        point,
        required_samples: point.samples.map(|s| s.max(m_it)),
        feasible,
    }
}

/// A parameter set plus the adversary time budget used for the CH column.
/// Without an explicit budget the MitM cost is used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub params: SchemeParams,
    pub ch_budget_bits: Option<f64>,
}

impl From<SchemeParams> for TableRow {
    fn from(params: SchemeParams) -> Self {
        Self { params, ch_budget_bits: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub params: SchemeParams,
    pub p_rg: f64,
    pub m_it: u64,
    pub bf_bits: f64,
    pub mitm_bits: f64,
    pub ch: ChEstimate,
    /// Rounds to observe before elimination has `n` zero-response rows: `d·n`.
    pub ge_samples: u64,
    /// `(γ, (p_RG · fpr_bar)^γ)` for each requested `γ`.
    pub combined: Vec<(u32, f64)>,
}

pub fn security_table(rows: &[TableRow], fpr_bar: f64, gammas: &[u32]) -> Result<Vec<AnalysisRow>, ParamsError> {
    if !(fpr_bar > 0.0 && fpr_bar <= 1.0) {
        return Err(ParamsError::Probability(fpr_bar));
    }
    Ok(rows
        .iter()
        .map(|row| {
            let p = &row.params;
            let p_rg = p_random_guess(p);
            let cx = complexity_bits(p);
            let budget = row.ch_budget_bits.unwrap_or(cx.mitm_bits);
            AnalysisRow {
                params: *p,
                p_rg,
                m_it: info_theoretic_bound(p),
                bf_bits: cx.bf_bits,
                mitm_bits: cx.mitm_bits,
                ch: ch_attack_estimate(p, budget),
                ge_samples: p.d() as u64 * p.n() as u64,
                combined: gammas.iter().map(|&g| (g, (p_rg * fpr_bar).powi(g as i32))).collect(),
            }
        })
        .collect())
}
