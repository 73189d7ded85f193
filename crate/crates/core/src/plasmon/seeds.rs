//! Starting roots for branch tracing.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::residual::normalized_residual;
use super::trace::polish_root;
use super::DispersionProblem;
use crate::error::Result;
use crate::media::DrudeParams;
use crate::numerics::roots::brent;

/// Real roots of the lossless residual in the region below both the medium
/// light line and ω_p, where the residual is real for real ω. Sorted from the
/// highest frequency down. Finite loss is added afterwards by polishing.
pub fn bound_seeds(n: u32, k: f64, problem: &DispersionProblem) -> Result<Vec<Complex64>> {
    let lossless = DispersionProblem { drude: DrudeParams { tau: None, ..problem.drude }, ..*problem };
    let top = (k / problem.outer.eps_o.sqrt()).min(1.0) * (1.0 - 1e-9);
    let bottom = 1e-3;
    let steps = 4000;
    let real = |w: f64| {
        normalized_residual(n, k, Complex64::new(w, 0.0), &lossless)
            .map(|r| r.re)
            .unwrap_or(f64::NAN)
    };
    let mut roots = Vec::new();
    let mut prev_w = bottom;
    let mut prev_f = real(bottom);
    for i in 1..=steps {
        let w = bottom + (top - bottom) * i as f64 / steps as f64;
        let f = real(w);
        if prev_f.is_finite() && f.is_finite() && prev_f.signum() != f.signum() {
            if let Some(r) = brent(real, prev_w, w, 1e-15) {
                let z = Complex64::new(r, 0.0);
                if normalized_residual(n, k, z, &lossless).map(|v| v.norm() < 1e-8).unwrap_or(false) {
                    roots.push(z);
                }
            }
        }
        prev_w = w;
        prev_f = f;
    }
    roots.reverse();
    Ok(roots.iter().filter_map(|&z| polish_root(n, k, z, problem, 1e-13).ok()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedRectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

fn phase(n: u32, k: f64, z: Complex64, p: &DispersionProblem) -> Option<f64> {
    normalized_residual(n, k, z, p).ok().filter(|v| v.is_finite() && v.norm() > 0.0).map(|v| v.arg())
}

fn wrap(d: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    d - two_pi * (d / two_pi).round()
}

/// Accumulated phase change of the residual along the segment `a -> b`.
fn segment_winding(n: u32, k: f64, a: Complex64, b: Complex64, p: &DispersionProblem, depth: u32) -> Option<f64> {
    let pa = phase(n, k, a, p)?;
    let pb = phase(n, k, b, p)?;
    let d = wrap(pb - pa);
    if d.abs() < 0.5 || depth == 0 {
        return Some(d);
    }
    let m = 0.5 * (a + b);
    Some(segment_winding(n, k, a, m, p, depth - 1)? + segment_winding(n, k, m, b, p, depth - 1)?)
}

fn winding(n: u32, k: f64, corners: [Complex64; 4], p: &DispersionProblem) -> Option<i64> {
    let mut total = 0.0;
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        for j in 0..8 {
            let s = a + (b - a) * (j as f64 / 8.0);
            let e = a + (b - a) * ((j + 1) as f64 / 8.0);
            total += segment_winding(n, k, s, e, p, 12)?;
        }
    }
    Some((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// Roots inside `rect` located by counting the residual's winding number on a
/// `cells x cells` partition and polishing from each cell that encloses a zero.
///
/// The residual has a branch cut along the real axis below the medium light
/// line, so rectangles must stay off that cut (for instance strictly below
/// the real axis).
pub fn argument_principle_seeds(
    n: u32,
    k: f64,
    rect: &SeedRectangle,
    cells: usize,
    problem: &DispersionProblem,
) -> Vec<Complex64> {
    let dr = (rect.re_max - rect.re_min) / cells as f64;
    let di = (rect.im_max - rect.im_min) / cells as f64;
    let mut roots: Vec<Complex64> = Vec::new();
    for i in 0..cells {
        for j in 0..cells {
            let r0 = rect.re_min + i as f64 * dr;
            let i0 = rect.im_min + j as f64 * di;
            let corners = [
                Complex64::new(r0, i0),
                Complex64::new(r0 + dr, i0),
                Complex64::new(r0 + dr, i0 + di),
                Complex64::new(r0, i0 + di),
            ];
            let Some(w) = winding(n, k, corners, problem) else { continue };
            if w < 1 {
                continue;
            }
            let center = Complex64::new(r0 + 0.5 * dr, i0 + 0.5 * di);
            if let Ok(z) = polish_root(n, k, center, problem, 1e-13) {
                let inside = z.re >= r0 - dr && z.re <= r0 + 2.0 * dr && z.im >= i0 - di && z.im <= i0 + 2.0 * di;
                if inside && !roots.iter().any(|r| (r - z).norm() < 1e-8) {
                    roots.push(z);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    roots
}
