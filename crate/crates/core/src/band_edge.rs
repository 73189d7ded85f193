//! Quadratic band edges of a sampled dispersion curve: interior extrema,
//! refinement on the underlying curve, and a least-squares quadratic fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::roots::golden_min;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

impl ExtremumKind {
    /// +1 for a minimum, -1 for a maximum.
    pub fn sign(self) -> f64 {
        match self {
            ExtremumKind::Minimum => 1.0,
            ExtremumKind::Maximum => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEdgePoint {
    pub n: u32,
    pub k_c: f64,
    pub omega_c: f64,
    /// Positive curvature `A` in `ω ≈ ω_c ± A (k - k_c)^2`.
    pub curvature: f64,
    pub kind: ExtremumKind,
    /// Half-width of the fit window in k.
    pub fit_window: f64,
}

impl BandEdgePoint {
    pub fn model(&self, k: f64) -> f64 {
        self.omega_c + self.kind.sign() * self.curvature * (k - self.k_c).powi(2)
    }
}

/// Default fit half-width in units of the local sample spacing.
pub const DEFAULT_WINDOW_CELLS: f64 = 1.0;
const FIT_POINTS: usize = 21;

struct Quadratic {
    center: f64,
    value: f64,
    curvature: f64,
}

/// Least-squares `w = c0 + c1 u + c2 u^2` in `u = (k - origin) / scale`.
fn fit_quadratic(k: &[f64], w: &[f64], origin: f64, scale: f64) -> Option<Quadratic> {
    if k.len() < 3 {
        return None;
    }
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (&ki, &wi) in k.iter().zip(w) {
        let u = (ki - origin) / scale;
        let basis = [1.0, u, u * u];
        for r in 0..3 {
            rhs[r] += basis[r] * (wi - w[0]);
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
        }
    }
    let c = solve3(m, rhs)?;
    if c[2] == 0.0 {
        return None;
    }
    let u_c = -c[1] / (2.0 * c[2]);
    Some(Quadratic {
        center: origin + u_c * scale,
        value: w[0] + c[0] - c[1] * c[1] / (4.0 * c[2]),
        curvature: c[2] / (scale * scale),
    })
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            for c in col..3 {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for c in r + 1..3 {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// Band edges of the curve sampled at `(k, w)`.
///
/// Only samples with `eligible[i]` set take part. When `curve` is given the
/// extremum is refined by golden-section on it and the fit uses fresh curve
/// evaluations; otherwise the samples inside the window are fitted.
pub fn locate_band_edges(
    n: u32,
    k: &[f64],
    w: &[f64],
    eligible: &[bool],
    curve: Option<&(dyn Fn(f64) -> Option<f64> + Sync)>,
    window_cells: f64,
) -> Result<Vec<BandEdgePoint>> {
    if k.len() != w.len() || k.len() != eligible.len() {
        return Err(Error::InvalidInput("sample arrays differ in length".into()));
    }
    if k.len() < 9 {
        return Err(Error::InvalidInput(format!("need at least 9 samples, got {}", k.len())));
    }
    let mut out = Vec::new();
    for i in 1..k.len() - 1 {
        if !(eligible[i - 1] && eligible[i] && eligible[i + 1]) {
            continue;
        }
        let kind = if w[i] < w[i - 1] && w[i] <= w[i + 1] {
            ExtremumKind::Minimum
        } else if w[i] > w[i - 1] && w[i] >= w[i + 1] {
            ExtremumKind::Maximum
        } else {
            continue;
        };
        let sign = kind.sign();
        // contiguous eligible run around i bounds the window
        let mut lo = i;
        while lo > 0 && eligible[lo - 1] {
            lo -= 1;
        }
        let mut hi = i;
        while hi + 1 < k.len() && eligible[hi + 1] {
            hi += 1;
        }
        let spacing = 0.5 * (k[i + 1] - k[i - 1]);
        let mut half = window_cells * spacing;
        let fit = match curve {
            Some(f) => {
                let k_star = golden_min(
                    |x| f(x).map(|v| sign * v).unwrap_or(f64::INFINITY),
                    k[i - 1],
                    k[i + 1],
                    1e-10 * spacing.max(k[i].abs()),
                );
                half = half.min(k_star - k[lo]).min(k[hi] - k_star);
                if half <= 0.0 {
                    continue;
                }
                let mut ks = Vec::with_capacity(FIT_POINTS);
                let mut ws = Vec::with_capacity(FIT_POINTS);
                for j in 0..FIT_POINTS {
                    let x = k_star - half + 2.0 * half * j as f64 / (FIT_POINTS - 1) as f64;
                    if let Some(v) = f(x) {
                        ks.push(x);
                        ws.push(v);
                    }
                }
                if ks.len() < 5 {
                    continue;
                }
                // the extremum itself comes from the curve; the fit supplies curvature
                match (fit_quadratic(&ks, &ws, k_star, half), f(k_star)) {
                    (Some(q), Some(v)) => Some(Quadratic { center: k_star, value: v, ..q }),
                    _ => None,
                }
            }
            None => {
                half = half.min(k[i] - k[lo]).min(k[hi] - k[i]);
                let idx: Vec<usize> = (lo..=hi).filter(|&j| (k[j] - k[i]).abs() <= half * (1.0 + 1e-12)).collect();
                let ks: Vec<f64> = idx.iter().map(|&j| k[j]).collect();
                let ws: Vec<f64> = idx.iter().map(|&j| w[j]).collect();
                fit_quadratic(&ks, &ws, k[i], half.max(spacing))
            }
        };
        let Some(q) = fit else { continue };
        if q.curvature * sign <= 0.0 {
            continue;
        }
        out.push(BandEdgePoint {
            n,
            k_c: q.center,
            omega_c: q.value,
            curvature: q.curvature.abs(),
            kind,
            fit_window: half,
        });
    }
    Ok(out)
}
