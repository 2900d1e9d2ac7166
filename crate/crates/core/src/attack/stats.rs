//! Goodness-of-fit and binomial tail helpers.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::combin::{ln_add_exp, ln_choose};

/// Pearson's statistic `Σ (o - e)² / e`; cells with `e = 0` are skipped.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}

/// Upper-tail critical value: `P[χ²_df > c] = alpha`.
pub fn chi_square_critical(df: u32, alpha: f64) -> f64 {
    ChiSquared::new(df as f64).expect("df >= 1").inverse_cdf(1.0 - alpha)
}

/// `P[χ²_df >= stat]`.
pub fn chi_square_p_value(stat: f64, df: u32) -> f64 {
    ChiSquared::new(df as f64).expect("df >= 1").sf(stat)
}

/// Statistic of `counts` against the uniform distribution over its cells.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let e = total as f64 / counts.len() as f64;
    chi_square_statistic(counts, &vec![e; counts.len()])
}

fn ln_binomial_pmf(v: u64, i: u64, p: f64) -> f64 {
    ln_choose(v, i) + i as f64 * p.ln() + (v - i) as f64 * (1.0 - p).ln()
}

/// `P[X = i]` for `X ~ Binomial(v, p)`.
pub fn binomial_pmf(v: u64, i: u64, p: f64) -> f64 {
    if i > v {
        return 0.0;
    }
    ln_binomial_pmf(v, i, p).exp()
}

/// `P[X >= i]` for `X ~ Binomial(v, p)`, summed in log space.
pub fn binomial_significance(v: u64, i: u64, p: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    if i > v {
        return 0.0;
    }
    (i..=v).map(|j| ln_binomial_pmf(v, j, p)).fold(f64::NEG_INFINITY, ln_add_exp).exp().min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values() {
        assert!((chi_square_critical(4, 0.01) - 13.2767).abs() < 1e-3);
        assert!((chi_square_critical(1, 0.05) - 3.8415).abs() < 1e-3);
        assert!((chi_square_p_value(13.2767, 4) - 0.01).abs() < 1e-5);
    }

    #[test]
    fn binomial_tail() {
        assert_eq!(binomial_significance(10, 0, 0.3), 1.0);
        assert_eq!(binomial_significance(10, 11, 0.3), 0.0);
        assert!((binomial_significance(10, 10, 0.5) - 0.5f64.powi(10)).abs() < 1e-15);
        // hand-summed: P[X >= 2], X ~ Bin(4, 0.5) = 11/16
        assert!((binomial_significance(4, 2, 0.5) - 11.0 / 16.0).abs() < 1e-12);
        assert!(binomial_significance(90, 4, 0.013) < 0.05);
        let total: f64 = (0..=60).map(|i| binomial_pmf(60, i, 0.25)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_agrees_with_pmf_sum() {
        for i in 0..=30 {
            let direct: f64 = (i..=30).map(|j| binomial_pmf(30, j, 0.2)).sum();
            assert!((binomial_significance(30, i, 0.2) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_statistic() {
        assert_eq!(chi_square_uniform(&[5, 5, 5]), 0.0);
        assert!((chi_square_uniform(&[10, 0]) - 10.0).abs() < 1e-12);
    }
}
