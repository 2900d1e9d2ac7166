//! Binomial coefficients in the three flavours the analysis needs: exact
//! integers for small pools, log-space for large ones, and a real-valued
//! extension through the log-gamma function.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::LN_2;

/// Pools up to this size use exact integer binomials.
pub const EXACT_LIMIT: u64 = 64;

/// Exact `C(n, k)`. Returns `None` on overflow.
pub fn choose_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Natural log of `C(n, k)` for integers; `-inf` when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_LIMIT {
        if let Some(c) = choose_exact(n, k) {
            return (c as f64).ln();
        }
    }
    let k = k.min(n - k);
    // summing logs of the ratio terms is more accurate than three ln_gamma calls
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

pub fn log2_choose(n: u64, k: u64) -> f64 {
    ln_choose(n, k) / LN_2
}

/// Real-valued `C(a, b) = Γ(a+1) / (Γ(b+1) Γ(a-b+1))` in log space.
///
/// Defined as zero (`-inf`) whenever `b < 0` or `a < b`.
pub fn ln_choose_real(a: f64, b: f64) -> f64 {
    if b < 0.0 || a < b {
        return f64::NEG_INFINITY;
    }
    ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0)
}

pub fn log2_choose_real(a: f64, b: f64) -> f64 {
    ln_choose_real(a, b) / LN_2
}

/// `C(num_n, num_k) / C(den_n, den_k)` evaluated exactly when both fit, in log
/// space otherwise.
pub fn choose_ratio(num_n: u64, num_k: u64, den_n: u64, den_k: u64) -> f64 {
    if num_k > num_n {
        return 0.0;
    }
    if num_n.max(den_n) <= EXACT_LIMIT {
        if let (Some(a), Some(b)) = (choose_exact(num_n, num_k), choose_exact(den_n, den_k)) {
            return a as f64 / b as f64;
        }
    }
    (ln_choose(num_n, num_k) - ln_choose(den_n, den_k)).exp()
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
