//! Natural-parameter continuation of a mode in k with a secant predictor,
//! a Newton/Muller corrector and step halving.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::residual::{normalized_residual, residual_parts, transverse_wavevectors};
use super::seeds::bound_seeds;
use super::{DispersionProblem, DispersionSample, ModeBranch};
use crate::error::{Error, Result};
use crate::numerics::roots::find_root_complex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSettings {
    pub k_min: f64,
    pub k_max: f64,
    pub step: f64,
    /// Normalized residual accepted as a root.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Number of step halvings before a jump is attempted.
    #[serde(default = "default_halvings")]
    pub max_halvings: u32,
}

fn default_tol() -> f64 {
    1e-13
}

fn default_halvings() -> u32 {
    6
}

impl TraceSettings {
    pub fn new(k_min: f64, k_max: f64, points: usize) -> Self {
        let step = (k_max - k_min) / (points.max(2) - 1) as f64;
        Self { k_min, k_max, step, tol: default_tol(), max_halvings: default_halvings() }
    }

    fn grid(&self) -> Vec<f64> {
        let steps = ((self.k_max - self.k_min) / self.step).round().max(1.0) as usize;
        (0..=steps).map(|j| self.k_max - (self.k_max - self.k_min) * j as f64 / steps as f64).collect()
    }
}

/// Root of the normalized residual near `guess`.
///
/// On the medium light line the outer transverse wavevector vanishes and the
/// leading terms of the residual cancel identically, which the normalized
/// residual sees as a zero; such points are rejected.
pub fn polish_root(n: u32, k: f64, guess: Complex64, problem: &DispersionProblem, tol: f64) -> Result<Complex64> {
    let w = find_root_complex(|w| normalized_residual(n, k, w, problem), guess, tol)?;
    let (_, ko) = transverse_wavevectors(k, w, problem)?;
    if ko.norm() < 1e-4 * k.max(w.norm()) {
        return Err(Error::Domain(format!("degenerate light-line zero at k = {k}")));
    }
    Ok(w)
}

fn make_sample(n: u32, k: f64, omega: Complex64, problem: &DispersionProblem) -> Result<DispersionSample> {
    let parts = residual_parts(n, k, omega, problem)?;
    Ok(DispersionSample {
        n,
        k,
        omega,
        k_inner: parts.k_inner,
        k_outer: parts.k_outer,
        bound: problem.is_bound(k, omega),
        residual: parts.normalized().norm(),
    })
}

struct History {
    points: Vec<(f64, Complex64)>,
}

impl History {
    fn predict(&self, k: f64) -> Complex64 {
        match self.points.as_slice() {
            [.., (k1, w1), (k2, w2)] => *w2 + (*w2 - *w1) * ((k - k2) / (k2 - k1)),
            [(_, w)] => *w,
            [] => unreachable!(),
        }
    }

    fn last(&self) -> (f64, Complex64) {
        *self.points.last().unwrap()
    }

    fn push(&mut self, k: f64, w: Complex64) {
        self.points.push((k, w));
        if self.points.len() > 2 {
            self.points.remove(0);
        }
    }
}

/// One corrected step from the history to `k`; `None` if the root strays.
fn corrected(n: u32, k: f64, hist: &History, problem: &DispersionProblem, tol: f64) -> Option<Complex64> {
    let pred = hist.predict(k);
    let (k0, w0) = hist.last();
    let h = (k - k0).abs();
    let allowed = if hist.points.len() < 2 { 0.2 * h } else { (0.5 * (pred - w0).norm()).max(1e-3 * h) };
    let z = polish_root(n, k, pred, problem, tol).ok()?;
    ((z - pred).norm() <= allowed).then_some(z)
}

/// Advance from the history to `target`, halving the step on failure.
fn advance(n: u32, target: f64, hist: &mut History, problem: &DispersionProblem, s: &TraceSettings) -> Option<Complex64> {
    let (k0, _) = hist.last();
    for level in 0..=s.max_halvings {
        let pieces = 1usize << level;
        let mut trial = History { points: hist.points.clone() };
        let mut ok = true;
        for p in 1..=pieces {
            let k = k0 + (target - k0) * p as f64 / pieces as f64;
            match corrected(n, k, &trial, problem, s.tol) {
                Some(z) => trial.push(k, z),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let w = trial.last().1;
            *hist = trial;
            return Some(w);
        }
    }
    None
}

/// Nearest root to the previous one, searched from a fixed pattern of starts.
fn reseed(n: u32, k: f64, previous: Complex64, problem: &DispersionProblem, tol: f64) -> Option<Complex64> {
    let offsets = [0.0, 0.005, -0.005, 0.01, -0.01, 0.02, -0.02, 0.04, -0.04];
    let damping = [0.0, -0.005, -0.01, -0.02, -0.04];
    let mut best: Option<Complex64> = None;
    for &di in &damping {
        for &dr in &offsets {
            let start = previous + Complex64::new(dr, di);
            if let Ok(z) = polish_root(n, k, start, problem, tol) {
                if z.re > 0.0 && best.is_none_or(|b| (z - previous).norm() < (b - previous).norm()) {
                    best = Some(z);
                }
            }
        }
    }
    best
}

/// Trace mode `n` from a root `seed` at `k_max` down to `k_min`.
///
/// Samples are returned in increasing k. When the continuation cannot follow
/// the root even at `step / 2^max_halvings`, the tracer jumps to the nearest
/// root at the next grid point and records a discontinuity there.
pub fn trace_branch(n: u32, seed: Complex64, settings: &TraceSettings, problem: &DispersionProblem) -> Result<ModeBranch> {
    if !(settings.k_max > settings.k_min && settings.k_min >= 0.0 && settings.step > 0.0) {
        return Err(Error::InvalidInput("trace needs 0 <= k_min < k_max and a positive step".into()));
    }
    let grid = settings.grid();
    let first = polish_root(n, grid[0], seed, problem, settings.tol)?;
    let mut samples = vec![make_sample(n, grid[0], first, problem)?];
    let mut discontinuities = Vec::new();
    let mut hist = History { points: vec![(grid[0], first)] };
    for pair in grid.windows(2) {
        let (prev_k, target) = (pair[0], pair[1]);
        let w = match advance(n, target, &mut hist, problem, settings) {
            Some(w) => w,
            None => {
                let previous = hist.last().1;
                match reseed(n, target, previous, problem, settings.tol) {
                    Some(w) => {
                        discontinuities.push(0.5 * (prev_k + target));
                        hist = History { points: vec![(target, w)] };
                        w
                    }
                    None => {
                        samples.reverse();
                        discontinuities.reverse();
                        let partial = ModeBranch { n, problem: *problem, samples, discontinuities };
                        return Err(Error::BranchLost {
                            n,
                            k: target,
                            reason: "no root near the continuation after step refinement".into(),
                            partial: Box::new(partial),
                        });
                    }
                }
            }
        };
        samples.push(make_sample(n, target, w, problem)?);
    }
    samples.reverse();
    discontinuities.reverse();
    Ok(ModeBranch { n, problem: *problem, samples, discontinuities })
}

/// Seed every order at `k_max` and trace them in parallel.
pub fn trace_modes(orders: &[u32], settings: &TraceSettings, problem: &DispersionProblem) -> Result<Vec<ModeBranch>> {
    orders
        .par_iter()
        .map(|&n| {
            let seeds = bound_seeds(n, settings.k_max, problem)?;
            let seed = *seeds.first().ok_or_else(|| {
                Error::Domain(format!("no bound root for n = {n} at k = {}", settings.k_max))
            })?;
            trace_branch(n, seed, settings, problem)
        })
        .collect()
}
