//! Numerical inverse Laplace transform.
//!
//! The default method integrates along a left-opening hyperbola (Weideman and
//! Trefethen parameters) whose axis can be raised to `center` so that poles and
//! branch points sitting on the imaginary axis away from the origin are enclosed.
//! A Fourier-series method accelerated by the epsilon algorithm works along a
//! vertical line only and serves transforms that grow in the left half-plane.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TimeGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InversionMethod {
    DeformedContour,
    SeriesAcceleration,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InversionSettings {
    /// Real offset of the contour; must lie right of every singularity.
    pub shift: f64,
    pub nodes: usize,
    pub method: InversionMethod,
    /// Imaginary coordinate of the contour axis.
    pub center: f64,
    /// Singularities on the imaginary axis lie within `center ± half_height`.
    pub half_height: f64,
}

impl Default for InversionSettings {
    fn default() -> Self {
        Self { shift: 0.0, nodes: 32, method: InversionMethod::DeformedContour, center: 0.0, half_height: 0.0 }
    }
}

const ALPHA: f64 = 1.1721;
const MAX_NODES: usize = 64;
const AGREEMENT: f64 = 1e-4;

fn hyperbola<F: Fn(Complex64) -> Complex64>(f: &F, t: f64, n: usize, s: &InversionSettings) -> Complex64 {
    let h = 1.0818 / n as f64;
    let mu = 4.4920 * n as f64 / t;
    let base = Complex64::new(s.shift, s.center);
    let i = Complex64::i();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -(n as i64)..=(n as i64) {
        let u = k as f64 * h;
        let arg = i * u - ALPHA;
        let z = base + mu * (1.0 + arg.sin());
        let dz = i * mu * arg.cos();
        acc += (z * t).exp() * f(z) * dz;
    }
    acc * h / (2.0 * std::f64::consts::PI * i)
}

/// Nodes needed so that the contour and its half-node comparison both cross
/// the imaginary axis beyond `half_height`, or `None` when that would exceed
/// the round-off limited maximum.
fn nodes_for(t: f64, s: &InversionSettings) -> Option<usize> {
    if s.half_height <= 0.0 {
        return Some(s.nodes);
    }
    // crossing half-height is mu cos^2(alpha) / sin(alpha) for zero shift
    let ratio = ALPHA.cos().powi(2) / ALPHA.sin();
    let needed = (1.25 * s.half_height * t / (4.4920 * ratio)).ceil() as usize;
    (2 * needed <= MAX_NODES).then_some(s.nodes.max(2 * needed))
}

fn wynn(partial: &[Complex64]) -> Complex64 {
    let n = partial.len();
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur = partial.to_vec();
    let mut best = *partial.last().unwrap();
    for k in 1..n {
        let len = cur.len() - 1;
        let mut next = Vec::with_capacity(len);
        for j in 0..len {
            let diff = cur[j + 1] - cur[j];
            if diff.norm() == 0.0 {
                return best;
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            let cand = *next.last().unwrap();
            if cand.is_finite() {
                best = cand;
            }
        }
        prev = cur;
        cur = next;
        if cur.len() < 2 {
            break;
        }
    }
    best
}

fn fourier_series<F: Fn(Complex64) -> Complex64>(
    f: &F,
    t: f64,
    terms: usize,
    period: f64,
    s: &InversionSettings,
) -> Complex64 {
    let sigma = s.shift + 23.0 / (2.0 * period);
    let w = std::f64::consts::PI / period;
    let i = Complex64::i();
    let mut up = Vec::with_capacity(terms + 1);
    let mut down = Vec::with_capacity(terms + 1);
    let mut su = Complex64::new(0.0, 0.0);
    let mut sd = Complex64::new(0.0, 0.0);
    for k in 1..=terms {
        let kw = k as f64 * w;
        su += f(Complex64::new(sigma, kw)) * (i * kw * t).exp();
        sd += f(Complex64::new(sigma, -kw)) * (-i * kw * t).exp();
        up.push(su);
        down.push(sd);
    }
    let total = f(Complex64::new(sigma, 0.0)) + wynn(&up) + wynn(&down);
    total * (sigma * t).exp() / (2.0 * period)
}

fn initial_value<F: Fn(Complex64) -> Complex64>(f: &F) -> Complex64 {
    let s = Complex64::new(1e12, 0.0);
    s * f(s)
}

/// Invert `transform` on every point of `grid`.
///
/// The value at `t = 0` comes from the initial-value theorem.
pub fn invert_laplace<F>(transform: F, grid: &TimeGrid, settings: &InversionSettings) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if settings.nodes < 16 {
        return Err(Error::InvalidInput(format!("node count {} below 16", settings.nodes)));
    }
    if !(settings.shift >= 0.0) {
        return Err(Error::InvalidInput("contour shift must be non-negative".into()));
    }
    let times = grid.times();
    let t_max = grid.t_max();
    times
        .par_iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok(initial_value(&transform));
            }
            let (fine, coarse) = match settings.method {
                InversionMethod::DeformedContour => {
                    let Some(n) = nodes_for(t, settings) else {
                        return Err(Error::OscillationDetected { t, disagreement: f64::INFINITY });
                    };
                    (hyperbola(&transform, t, n, settings), hyperbola(&transform, t, n / 2, settings))
                }
                InversionMethod::SeriesAcceleration => {
                    let period = 2.0 * t_max;
                    let m = 2 * settings.nodes;
                    (
                        fourier_series(&transform, t, m, period, settings),
                        fourier_series(&transform, t, m / 2, period, settings),
                    )
                }
            };
            let gap = (fine - coarse).norm() / fine.norm().max(1.0);
            if !(gap <= AGREEMENT) {
                return Err(Error::OscillationDetected { t, disagreement: gap });
            }
            Ok(fine)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> TimeGrid {
        TimeGrid::new(0.25, 41).unwrap()
    }

    #[test]
    fn exponential_pair() {
        let g = grid();
        let v = invert_laplace(|s| 1.0 / (s + 1.0), &g, &InversionSettings::default()).unwrap();
        for (t, f) in g.times().iter().zip(&v) {
            assert!((f - Complex64::new((-t).exp(), 0.0)).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn inverse_sqrt_pair() {
        let g = grid();
        let v = invert_laplace(|s| 1.0 / s.sqrt(), &g, &InversionSettings::default()).unwrap();
        for (t, f) in g.times().iter().zip(&v).skip(1) {
            let want = 1.0 / (PI * t).sqrt();
            assert!((f.re - want).abs() < 1e-9 * want && f.im.abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn raised_contour_encloses_oscillating_pole() {
        // e^{2it} has its pole at s = 2i
        let g = TimeGrid::new(0.5, 21).unwrap();
        let s = InversionSettings { center: 2.0, half_height: 0.5, ..Default::default() };
        let v = invert_laplace(|z| 1.0 / (z - Complex64::new(0.0, 2.0) + 0.3), &g, &s).unwrap();
        for (t, f) in g.times().iter().zip(&v) {
            let want = (Complex64::new(-0.3, 2.0) * t).exp();
            assert!((f - want).norm() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn series_method_pairs() {
        let g = TimeGrid::new(0.5, 13).unwrap();
        let s = InversionSettings { method: InversionMethod::SeriesAcceleration, ..Default::default() };
        let v = invert_laplace(|z| 1.0 / (z + 1.0), &g, &s).unwrap();
        for (t, f) in g.times().iter().zip(&v).skip(1) {
            assert!((f.re - (-t).exp()).abs() < 1e-7, "t={t} {f}");
        }
        let w = invert_laplace(|z| 1.0 / (z - Complex64::new(0.0, 1.5) + 0.5), &g, &s).unwrap();
        for (t, f) in g.times().iter().zip(&w).skip(1) {
            let want = (Complex64::new(-0.5, 1.5) * t).exp();
            assert!((f - want).norm() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn too_few_nodes_rejected() {
        let s = InversionSettings { nodes: 8, ..Default::default() };
        assert!(invert_laplace(|z| 1.0 / z, &grid(), &s).is_err());
    }

    #[test]
    fn insufficient_nodes_are_flagged() {
        // a pole far up the imaginary axis the contour cannot enclose
        let g = TimeGrid::new(1.0, 6).unwrap();
        let s = InversionSettings { nodes: 16, half_height: 40.0, ..Default::default() };
        let r = invert_laplace(|z| 1.0 / (z - Complex64::new(0.0, 40.0)), &g, &s);
        assert!(matches!(r, Err(Error::OscillationDetected { .. })));
    }
}
