//! The 40 per-rendering feature series.
//!
//! Touch features come straight from the event stream. Stylometric features
//! that are scalars over a whole rendering (extreme points, width, height,
//! area, aspect ratio) are computed as running prefix values so every feature
//! is a time series. Angles use these definitions:
//!
//! * `slope(i) = atan2(Δy_i, Δx_i)` for the segment ending at sample `i`;
//! * `path(i)` is the signed turn between the segments meeting at `i`;
//! * `curve(i) = path(i) / |segment ending at i|`.
//!
//! Velocity and acceleration use the derivatives of the quadratic through
//! three neighbouring samples, so uneven sampling intervals are handled
//! exactly for quadratic motion.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::trace::{TouchAction, Trace};

macro_rules! features {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum FeatureId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl FeatureId {
            pub const ALL: [FeatureId; 40] = [$(FeatureId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(FeatureId::$variant => $name,)*
                }
            }
        }

        impl FromStr for FeatureId {
            type Err = FeatureError;

            fn from_str(s: &str) -> Result<Self, FeatureError> {
                match s {
                    $($name => Ok(FeatureId::$variant),)*
                    _ => Err(FeatureError::UnknownFeature(s.to_owned())),
                }
            }
        }
    };
}

features! {
    X => "x",
    Y => "y",
    DeltaX => "dx",
    DeltaY => "dy",
    VelX => "vx",
    VelY => "vy",
    AccX => "ax",
    AccY => "ay",
    Pressure => "p",
    DeltaPressure => "dp",
    Size => "s",
    DeltaSize => "ds",
    Force => "F",
    Action => "AT",
    TopMost => "TMP",
    BottomMost => "BMP",
    LeftMost => "LMP",
    RightMost => "RMP",
    Width => "width",
    Height => "height",
    Area => "area",
    Whr => "WHR",
    Slope => "slope",
    PathAngle => "path",
    Curvature => "curve",
    RotX => "R_x",
    RotY => "R_y",
    RotZ => "R_z",
    GyroX => "G_x",
    GyroY => "G_y",
    GyroZ => "G_z",
    AccelX => "A_x",
    AccelY => "A_y",
    AccelZ => "A_z",
    GravX => "g_x",
    GravY => "g_y",
    GravZ => "g_z",
    LinX => "a_x",
    LinY => "a_y",
    LinZ => "a_z",
}

impl FeatureId {
    /// Features the symbol templates use.
    pub const COORDINATES: [FeatureId; 2] = [FeatureId::X, FeatureId::Y];

    fn motion_index(self) -> Option<usize> {
        (self as usize).checked_sub(FeatureId::RotX as usize)
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("trace has {0} movement samples; at least 2 are required")]
    TooFewMoves(usize),
    #[error("feature {0} is not available in this rendering")]
    Missing(FeatureId),
    #[error("unknown feature name {0:?}")]
    UnknownFeature(String),
}

/// Feature series of one rendering. Series whose source channel is missing
/// (pressure, size, motion) are absent.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureSet {
    pub series: BTreeMap<FeatureId, Vec<f64>>,
}

impl FeatureSet {
    pub fn get(&self, id: FeatureId) -> Result<&[f64], FeatureError> {
        self.series.get(&id).map(Vec::as_slice).ok_or(FeatureError::Missing(id))
    }

    pub fn available(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.series.keys().copied()
    }

    pub fn has(&self, id: FeatureId) -> bool {
        self.series.contains_key(&id)
    }

    /// z-score every series; constant series become zeros.
    pub fn normalized(mut self) -> Self {
        for s in self.series.values_mut() {
            zscore(s);
        }
        self
    }
}

pub fn zscore(s: &mut [f64]) {
    if s.is_empty() {
        return;
    }
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let sd = (s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if sd <= 1e-12 * (1.0 + mean.abs()) {
        s.fill(0.0);
    } else {
        for v in s.iter_mut() {
            *v = (*v - mean) / sd;
        }
    }
}

/// Smallest gap between timestamps, in ms; repeated timestamps are pushed
/// apart by this much so derivatives stay finite.
pub const MIN_DT: f64 = 1e-3;

/// First and second derivative of `v` against `t` at every sample.
pub fn derivatives(t: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = v.len();
    if n < 3 {
        let slope = if n == 2 { (v[1] - v[0]) / (t[1] - t[0]) } else { 0.0 };
        return (vec![slope; n], vec![0.0; n]);
    }
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for i in 0..n {
        let c = i.clamp(1, n - 2);
        let (t0, t1, t2) = (t[c - 1], t[c], t[c + 1]);
        let f01 = (v[c] - v[c - 1]) / (t1 - t0);
        let f12 = (v[c + 1] - v[c]) / (t2 - t1);
        let f012 = (f12 - f01) / (t2 - t0);
        d1.push(f01 + f012 * ((t[i] - t0) + (t[i] - t1)));
        d2.push(2.0 * f012);
    }
    (d1, d2)
}

fn deltas(v: &[f64]) -> Vec<f64> {
    std::iter::once(0.0).chain(v.windows(2).map(|w| w[1] - w[0])).collect()
}

fn prefix(v: &[f64], pick: fn(f64, f64) -> f64) -> Vec<f64> {
    v.iter()
        .scan(None, |acc: &mut Option<f64>, &x| {
            let next = acc.map_or(x, |a| pick(a, x));
            *acc = Some(next);
            Some(next)
        })
        .collect()
}

/// Raw (unnormalized) feature series.
pub fn extract_raw_features(trace: &Trace) -> Result<FeatureSet, FeatureError> {
    let ev = &trace.events;
    let moves = ev.iter().filter(|e| e.action == TouchAction::Move).count();
    if moves < 2 {
        return Err(FeatureError::TooFewMoves(moves));
    }
    let mut t = Vec::with_capacity(ev.len());
    for e in ev {
        let next = t.last().map_or(e.t, |&prev: &f64| e.t.max(prev + MIN_DT));
        t.push(next);
    }
    let x: Vec<f64> = ev.iter().map(|e| e.x).collect();
    let y: Vec<f64> = ev.iter().map(|e| e.y).collect();
    let (vx, ax) = derivatives(&t, &x);
    let (vy, ay) = derivatives(&t, &y);
    let dx = deltas(&x);
    let dy = deltas(&y);

    use FeatureId::*;
    let mut series = BTreeMap::new();
    series.insert(DeltaX, dx.clone());
    series.insert(DeltaY, dy.clone());
    series.insert(VelX, vx);
    series.insert(VelY, vy);
    series.insert(AccX, ax);
    series.insert(AccY, ay);
    series.insert(Action, ev.iter().map(|e| e.action.code()).collect());

    let pressure: Option<Vec<f64>> = ev.iter().map(|e| e.p).collect();
    let size: Option<Vec<f64>> = ev.iter().map(|e| e.s).collect();
    if let (Some(p), Some(s)) = (&pressure, &size) {
        series.insert(Force, p.iter().zip(s).map(|(p, s)| p * s).collect());
    }
    if let Some(p) = pressure {
        series.insert(DeltaPressure, deltas(&p));
        series.insert(Pressure, p);
    }
    if let Some(s) = size {
        series.insert(DeltaSize, deltas(&s));
        series.insert(Size, s);
    }

    let top = prefix(&y, f64::min);
    let bottom = prefix(&y, f64::max);
    let left = prefix(&x, f64::min);
    let right = prefix(&x, f64::max);
    let width: Vec<f64> = right.iter().zip(&left).map(|(r, l)| r - l).collect();
    let height: Vec<f64> = bottom.iter().zip(&top).map(|(b, t)| b - t).collect();
    series.insert(Area, width.iter().zip(&height).map(|(w, h)| w * h).collect());
    series.insert(Whr, width.iter().zip(&height).map(|(w, h)| if *h > 0.0 { w / h } else { 0.0 }).collect());
    series.insert(TopMost, top);
    series.insert(BottomMost, bottom);
    series.insert(LeftMost, left);
    series.insert(RightMost, right);
    series.insert(Width, width);
    series.insert(Height, height);

    let n = ev.len();
    let mut slope: Vec<f64> = (0..n).map(|i| dy[i].atan2(dx[i])).collect();
    slope[0] = slope[1];
    let mut path = vec![0.0; n];
    let mut curve = vec![0.0; n];
    for i in 1..n - 1 {
        let (ux, uy, wx, wy) = (dx[i], dy[i], dx[i + 1], dy[i + 1]);
        let turn = (ux * wy - uy * wx).atan2(ux * wx + uy * wy);
        path[i] = turn;
        let len = ux.hypot(uy);
        curve[i] = if len > 0.0 { turn / len } else { 0.0 };
    }
    series.insert(Slope, slope);
    series.insert(PathAngle, path);
    series.insert(Curvature, curve);

    if let Some(motion) = ev.iter().map(|e| e.motion).collect::<Option<Vec<_>>>() {
        for id in FeatureId::ALL {
            if let Some(k) = id.motion_index() {
                series.insert(id, motion.iter().map(|m| m[k]).collect());
            }
        }
    }
    series.insert(X, x);
    series.insert(Y, y);
    Ok(FeatureSet { series })
}

/// Feature series, each z-score normalized within this rendering.
pub fn extract_features(trace: &Trace) -> Result<FeatureSet, FeatureError> {
    Ok(extract_raw_features(trace)?.normalized())
}
