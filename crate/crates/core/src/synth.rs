//! Synthetic handwriting.
//!
//! An [`Alphabet`] holds one random glyph per symbol: one or two strokes of
//! control points with sharp turns. A [`HandStyle`] is one writer's
//! systematic deviation from the alphabet: per-control-point offsets, scale,
//! slant, tempo, pressure and contact-size profiles and device tilt.
//! [`render`] draws a glyph in a style through a Catmull-Rom spline and adds
//! per-rendering noise. With zero noise a writer reproduces the same trace
//! every time.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::biometric::{TouchAction, TouchEvent, Trace};

type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Glyph {
    pub strokes: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alphabet {
    pub glyphs: Vec<Glyph>,
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

impl Alphabet {
    /// `d` glyphs inside a 100 × 100 box.
    pub fn generate<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let glyphs = (0..d)
            .map(|_| {
                let strokes = rng.random_range(1..=2);
                Glyph {
                    strokes: (0..strokes)
                        .map(|_| {
                            let points = rng.random_range(6..=9);
                            (0..points).map(|_| [rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)]).collect()
                        })
                        .collect(),
                }
            })
            .collect();
        Self { glyphs }
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }
}

/// One writer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandStyle {
    /// Per glyph, stroke and control point.
    pub offsets: Vec<Vec<Vec<Point>>>,
    pub scale: Point,
    pub slant: f64,
    pub origin: Point,
    /// Mean sampling interval, ms.
    pub base_dt: f64,
    pub tempo_amp: f64,
    pub tempo_freq: f64,
    pub tempo_phase: f64,
    pub pressure_base: f64,
    pub pressure_amp: f64,
    pub size_base: f64,
    pub size_amp: f64,
    /// Device orientation (rad) around x, y, z.
    pub tilt: [f64; 3],
}

impl HandStyle {
    /// A writer whose deviations from the alphabet scale with `spread`
    /// (0 = everyone writes identically, 1 = clearly personal).
    pub fn generate<R: Rng + ?Sized>(alphabet: &Alphabet, spread: f64, rng: &mut R) -> Self {
        let offsets = alphabet
            .glyphs
            .iter()
            .map(|g| {
                g.strokes
                    .iter()
                    .map(|s| s.iter().map(|_| [8.0 * spread * gauss(rng), 8.0 * spread * gauss(rng)]).collect())
                    .collect()
            })
            .collect();
        let mut j = |base: f64, rel: f64| base * (1.0 + spread * rel * gauss(rng));
        let scale = [j(3.0, 0.1), j(3.0, 0.1)];
        let origin = [j(200.0, 0.1), j(300.0, 0.1)];
        let base_dt = j(12.0, 0.3).max(2.0);
        let tempo_amp = j(0.3, 0.5).clamp(0.0, 0.8);
        let tempo_freq = j(2.0, 0.3);
        let pressure_base = j(0.5, 0.2).clamp(0.05, 0.9);
        let pressure_amp = j(0.15, 0.4).abs();
        let size_base = j(0.3, 0.2).clamp(0.05, 0.9);
        let size_amp = j(0.05, 0.4).abs();
        let slant = spread * 0.15 * gauss(rng);
        let tempo_phase = spread * std::f64::consts::PI * gauss(rng);
        let tilt = [spread * 0.3 * gauss(rng), spread * 0.3 * gauss(rng), spread * 0.3 * gauss(rng)];
        Self {
            offsets,
            scale,
            slant,
            origin,
            base_dt,
            tempo_amp,
            tempo_freq,
            tempo_phase,
            pressure_base,
            pressure_amp,
            size_base,
            size_amp,
            tilt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub samples_per_stroke: usize,
    /// Per-rendering jitter of control points, px.
    pub control_noise: f64,
    /// Jitter of sampled points, px.
    pub sample_noise: f64,
    /// Relative jitter of sampling intervals.
    pub timing_noise: f64,
    pub pressure: bool,
    pub size: bool,
    pub motion: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self::with_noise(1.0)
    }
}

impl SynthConfig {
    /// All noise sources scaled by one level; 0 gives exact repeats.
    pub fn with_noise(level: f64) -> Self {
        Self {
            samples_per_stroke: 60,
            control_noise: 2.0 * level,
            sample_noise: 0.5 * level,
            timing_noise: 0.05 * level,
            pressure: true,
            size: true,
            motion: false,
        }
    }
}

/// Uniform Catmull-Rom through `pts` with duplicated end points, sampled at
/// `count` evenly spaced parameters.
fn catmull_rom(pts: &[Point], count: usize) -> Vec<Point> {
    let n = pts.len();
    let at = |i: isize| pts[i.clamp(0, n as isize - 1) as usize];
    (0..count)
        .map(|k| {
            let u = if count > 1 { k as f64 / (count - 1) as f64 } else { 0.0 };
            let pos = u * (n - 1) as f64;
            let seg = (pos.floor() as isize).min(n as isize - 2);
            let s = pos - seg as f64;
            let (p0, p1, p2, p3) = (at(seg - 1), at(seg), at(seg + 1), at(seg + 2));
            let (s2, s3) = (s * s, s * s * s);
            let mut out = [0.0; 2];
            for c in 0..2 {
                out[c] = 0.5
                    * (2.0 * p1[c]
                        + (-p0[c] + p2[c]) * s
                        + (2.0 * p0[c] - 5.0 * p1[c] + 4.0 * p2[c] - p3[c]) * s2
                        + (-p0[c] + 3.0 * p1[c] - 3.0 * p2[c] + p3[c]) * s3);
            }
            out
        })
        .collect()
}

/// Gap between strokes, ms.
const PEN_UP_GAP: f64 = 80.0;

/// One rendering of `symbol` by `style`.
pub fn render<R: Rng + ?Sized>(
    alphabet: &Alphabet,
    style: &HandStyle,
    symbol: usize,
    config: &SynthConfig,
    rng: &mut R,
) -> Trace {
    let glyph = &alphabet.glyphs[symbol];
    let mut events = Vec::new();
    let mut t = 0.0;
    for (si, stroke) in glyph.strokes.iter().enumerate() {
        if si > 0 {
            t += PEN_UP_GAP;
        }
        let controls: Vec<Point> = stroke
            .iter()
            .zip(&style.offsets[symbol][si])
            .map(|(p, o)| {
                let x = p[0] + o[0] + config.control_noise * gauss(rng);
                let y = p[1] + o[1] + config.control_noise * gauss(rng);
                [style.origin[0] + style.scale[0] * (x + style.slant * y), style.origin[1] + style.scale[1] * y]
            })
            .collect();
        let path = catmull_rom(&controls, config.samples_per_stroke.max(4));
        let last = path.len() - 1;
        for (k, p) in path.iter().enumerate() {
            let u = k as f64 / last as f64;
            if k > 0 {
                let tempo = 1.0 + style.tempo_amp * (std::f64::consts::TAU * style.tempo_freq * u + style.tempo_phase).sin();
                t += (style.base_dt * tempo * (1.0 + config.timing_noise * gauss(rng))).max(0.5);
            }
            let action = match k {
                0 => TouchAction::Down,
                k if k == last => TouchAction::Up,
                _ => TouchAction::Move,
            };
            let mut e = TouchEvent::new(
                t,
                p[0] + config.sample_noise * gauss(rng),
                p[1] + config.sample_noise * gauss(rng),
                action,
            );
            let bump = (std::f64::consts::PI * u).sin();
            if config.pressure {
                e.p = Some((style.pressure_base + style.pressure_amp * bump + 0.01 * config.sample_noise * gauss(rng)).clamp(0.0, 1.0));
            }
            if config.size {
                e.s = Some((style.size_base + style.size_amp * bump + 0.01 * config.sample_noise * gauss(rng)).clamp(0.0, 1.0));
            }
            if config.motion {
                e.motion = Some(motion_block(style, u, config.sample_noise, rng));
            }
            events.push(e);
        }
    }
    Trace { header: None, events }
}

/// Rotation, gyroscope, accelerometer, gravity and linear acceleration for a
/// device held at the style's tilt with a slight sway while writing.
fn motion_block<R: Rng + ?Sized>(style: &HandStyle, u: f64, noise: f64, rng: &mut R) -> [f64; 15] {
    let sway = 0.02 * (std::f64::consts::TAU * 1.5 * u).sin();
    let rot = [style.tilt[0] + sway, style.tilt[1] - sway, style.tilt[2]];
    let gyro = [0.02 * (std::f64::consts::TAU * 1.5 * u).cos(), -0.02 * (std::f64::consts::TAU * 1.5 * u).cos(), 0.0];
    let g = 9.81;
    let grav = [g * rot[1].sin(), -g * rot[0].sin(), g * rot[0].cos() * rot[1].cos()];
    let lin = [0.05 * sway, 0.05 * sway, 0.0];
    let mut m = [0.0; 15];
    for c in 0..3 {
        m[c] = rot[c];
        m[3 + c] = gyro[c];
        m[6 + c] = grav[c] + lin[c];
        m[9 + c] = grav[c];
        m[12 + c] = lin[c];
    }
    for v in &mut m {
        *v += 0.001 * noise * gauss(rng);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biometric::extract_features;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_noise_repeats_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let alphabet = Alphabet::generate(5, &mut rng);
        let style = HandStyle::generate(&alphabet, 1.0, &mut rng);
        let cfg = SynthConfig { motion: true, ..SynthConfig::with_noise(0.0) };
        let a = render(&alphabet, &style, 2, &cfg, &mut rng);
        let b = render(&alphabet, &style, 2, &cfg, &mut rng);
        assert_eq!(a, b);
        a.validate().unwrap();
        assert_eq!(extract_features(&a).unwrap().series.len(), 40);
    }

    #[test]
    fn spline_passes_through_controls() {
        let pts = [[0.0, 0.0], [10.0, 5.0], [20.0, -5.0], [30.0, 0.0]];
        let path = catmull_rom(&pts, 4);
        for (p, q) in path.iter().zip(&pts) {
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn renderings_are_valid_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alphabet = Alphabet::generate(5, &mut rng);
        for _ in 0..5 {
            let style = HandStyle::generate(&alphabet, 1.0, &mut rng);
            for s in 0..5 {
                let t = render(&alphabet, &style, s, &SynthConfig::default(), &mut rng);
                t.validate().unwrap();
                assert!(extract_features(&t).is_ok());
            }
        }
    }
}
