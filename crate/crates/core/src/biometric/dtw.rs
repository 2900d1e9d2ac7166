//! Exact banded dynamic time warping with squared pointwise cost.

use serde::{Deserialize, Serialize};

/// Band half-width used unless configured otherwise.
pub const DEFAULT_RADIUS: f64 = 20.0;

/// Radius increment when a band is too narrow to connect the corners.
const WIDEN_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtwResult {
    pub distance: f64,
    /// Radius actually used, at least the requested one.
    pub radius: f64,
}

/// Per-row column range of the band, indexing the shorter series by row. The
/// band follows the straight line between the two corners.
fn band(rows: usize, cols: usize, radius: f64) -> Vec<(usize, usize)> {
    let slope = if rows > 1 { (cols - 1) as f64 / (rows - 1) as f64 } else { 0.0 };
    (0..rows)
        .map(|i| {
            let center = i as f64 * slope;
            let lo = (center - radius).ceil().max(0.0) as usize;
            let hi = ((center + radius).floor() as usize).min(cols - 1);
            (lo, hi)
        })
        .collect()
}

fn connected(b: &[(usize, usize)], cols: usize) -> bool {
    b.iter().all(|&(lo, hi)| lo <= hi)
        && b[0].0 == 0
        && b[b.len() - 1].1 == cols - 1
        && b.windows(2).all(|w| w[1].0 <= w[0].1 + 1)
}

/// DTW distance between two non-empty series with steps `(1,0)`, `(0,1)`,
/// `(1,1)`, cost `(a_i - b_j)²` and a band of half-width `radius` around the
/// corner-to-corner diagonal. The band widens in half steps until a path
/// exists.
pub fn dtw_distance(a: &[f64], b: &[f64], radius: f64) -> DtwResult {
    assert!(!a.is_empty() && !b.is_empty(), "DTW needs non-empty series");
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (rows, cols) = (short.len(), long.len());
    let mut radius = radius.max(0.0);
    let mut rb = band(rows, cols, radius);
    while !connected(&rb, cols) {
        radius += WIDEN_STEP;
        rb = band(rows, cols, radius);
    }

    let mut prev = vec![f64::INFINITY; cols];
    let mut cur = vec![f64::INFINITY; cols];
    for (i, &(lo, hi)) in rb.iter().enumerate() {
        let s = short[i];
        for j in lo..=hi {
            let cost = (s - long[j]).powi(2);
            let best = if i == 0 && j == 0 {
                0.0
            } else {
                let up = prev[j];
                let diag = if j > 0 { prev[j - 1] } else { f64::INFINITY };
                let left = if j > lo { cur[j - 1] } else { f64::INFINITY };
                up.min(diag).min(left)
            };
            cur[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut cur);
        if i > 0 {
            let (plo, phi) = rb[i - 1];
            cur[plo..=phi].fill(f64::INFINITY);
        }
    }
    DtwResult { distance: prev[cols - 1], radius }
}

/// Distance only.
pub fn dtw(a: &[f64], b: &[f64], radius: f64) -> f64 {
    dtw_distance(a, b, radius).distance
}
