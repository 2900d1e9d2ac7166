use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::zmod::{Field, Matrix};
use super::AttackError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullRankEstimate {
    pub reps: u64,
    pub full_rank: u64,
    pub fraction: f64,
}

/// Fraction of random `n × n` challenge-weight matrices over `Z_d` that have
/// full rank. Each row puts uniform weights from `Z_d` on `l` random
/// positions and zeros elsewhere, independent of any secret.
///
/// Each repetition draws its own seed from `rng` up front, so the result is
/// the same regardless of how rayon schedules the work.
pub fn monte_carlo_full_rank<R: Rng + ?Sized>(
    d: u32,
    l: usize,
    n: usize,
    reps: u64,
    rng: &mut R,
) -> Result<FullRankEstimate, AttackError> {
    if reps == 0 || n == 0 || l == 0 || l > n {
        return Err(AttackError::Input(format!("need reps >= 1 and 1 <= l <= n, got reps={reps}, l={l}, n={n}")));
    }
    let field = Field::new(d)?;
    let seeds: Vec<u64> = (0..reps).map(|_| rng.random()).collect();
    let full_rank = seeds
        .par_iter()
        .filter(|&&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = Matrix::zeros(n, n);
            for i in 0..n {
                for c in index::sample(&mut rng, n, l) {
                    m.data[i * n + c] = rng.random_range(0..d) as u8;
                }
            }
            m.is_full_rank(&field)
        })
        .count() as u64;
    Ok(FullRankEstimate { reps, full_rank, fraction: full_rank as f64 / reps as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let a = monte_carlo_full_rank(5, 4, 12, 300, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = monte_carlo_full_rank(5, 4, 12, 300, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_entry_matrix() {
        for d in [2u32, 3, 5, 7] {
            let est = monte_carlo_full_rank(d, 1, 1, 40_000, &mut ChaCha8Rng::seed_from_u64(d as u64)).unwrap();
            let p = (d - 1) as f64 / d as f64;
            let sd = (p * (1.0 - p) / 40_000.0).sqrt();
            assert!((est.fraction - p).abs() < 4.0 * sd, "d={d}: {}", est.fraction);
        }
    }

    #[test]
    fn dense_matrices_follow_the_random_matrix_limit() {
        for (d, n) in [(2u32, 20usize), (5, 20), (3, 12)] {
            let reps = 20_000;
            let est = monte_carlo_full_rank(d, n, n, reps, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
            let limit: f64 = (1..=n).map(|i| 1.0 - (d as f64).powi(-(i as i32))).product();
            let sd = (limit * (1.0 - limit) / reps as f64).sqrt();
            assert!((est.fraction - limit).abs() < 4.0 * sd, "d={d}: {} vs {limit}", est.fraction);
        }
    }

    #[test]
    fn composite_modulus_is_rejected() {
        let r = monte_carlo_full_rank(6, 3, 5, 10, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(r, Err(AttackError::UnsupportedModulus(6)));
    }
}
