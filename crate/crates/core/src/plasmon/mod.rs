//! Surface-plasmon modes of a metallic wire: residual, seeds, branch tracing
//! and band edges.

mod residual;
mod seeds;
mod trace;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band_edge::{locate_band_edges, BandEdgePoint, DEFAULT_WINDOW_CELLS};
use crate::error::Result;
use crate::media::{DrudeParams, OuterMedium, WireGeometry};

pub use residual::{dispersion_residual, normalized_residual, residual_parts, transverse_wavevectors, ResidualParts};
pub use seeds::{argument_principle_seeds, bound_seeds, SeedRectangle};
pub use trace::{polish_root, trace_branch, trace_modes, TraceSettings};

/// Which light line separates bound from radiating samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LightLine {
    /// `k > Re ω / c`.
    #[default]
    Vacuum,
    /// `k > sqrt(eps_O) Re ω / c`.
    Medium,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionProblem {
    pub drude: DrudeParams,
    pub outer: OuterMedium,
    pub geometry: WireGeometry,
    #[serde(default)]
    pub light_line: LightLine,
}

impl DispersionProblem {
    pub fn silver_in_gan(radius: f64) -> Self {
        Self {
            drude: DrudeParams::silver(),
            outer: OuterMedium::gallium_nitride(),
            geometry: WireGeometry { radius },
            light_line: LightLine::Vacuum,
        }
    }

    pub fn is_bound(&self, k: f64, omega: Complex64) -> bool {
        match self.light_line {
            LightLine::Vacuum => k > omega.re,
            LightLine::Medium => k > self.outer.eps_o.sqrt() * omega.re,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub n: u32,
    pub k: f64,
    pub omega: Complex64,
    pub k_inner: Complex64,
    pub k_outer: Complex64,
    pub bound: bool,
    /// Residual normalized by its dominant term.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBranch {
    pub n: u32,
    pub problem: DispersionProblem,
    /// Samples ordered by increasing k.
    pub samples: Vec<DispersionSample>,
    /// Wavevectors where the continuation had to jump to a new root.
    pub discontinuities: Vec<f64>,
}

impl ModeBranch {
    pub fn k(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.k).collect()
    }

    pub fn re_omega(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.omega.re).collect()
    }

    pub fn bound_flags(&self) -> Vec<bool> {
        self.samples.iter().map(|s| s.bound).collect()
    }

    /// True when no recorded discontinuity falls between samples `i` and `i + 1`.
    pub fn joined(&self, i: usize) -> bool {
        let (a, b) = (self.samples[i].k, self.samples[i + 1].k);
        !self.discontinuities.iter().any(|&d| d >= a && d <= b)
    }

    /// Polished Re ω at an arbitrary k inside the traced range.
    pub fn re_omega_at(&self, k: f64) -> Option<f64> {
        let i = self.samples.partition_point(|s| s.k < k);
        let (lo, hi) = match i {
            0 => (0, 1),
            i if i >= self.samples.len() => (self.samples.len() - 2, self.samples.len() - 1),
            i => (i - 1, i),
        };
        let a = &self.samples[lo];
        let b = &self.samples[hi];
        let t = (k - a.k) / (b.k - a.k);
        let guess = a.omega + (b.omega - a.omega) * t;
        polish_root(self.n, k, guess, &self.problem, 1e-13).ok().map(|w| w.re)
    }
}

/// Band edges of the bound part of a traced branch.
pub fn find_band_edges(branch: &ModeBranch) -> Result<Vec<BandEdgePoint>> {
    find_band_edges_with_window(branch, DEFAULT_WINDOW_CELLS)
}

pub fn find_band_edges_with_window(branch: &ModeBranch, window_cells: f64) -> Result<Vec<BandEdgePoint>> {
    let k = branch.k();
    let w = branch.re_omega();
    let mut ok = branch.bound_flags();
    for i in 0..ok.len().saturating_sub(1) {
        if !branch.joined(i) {
            ok[i] = false;
            ok[i + 1] = false;
        }
    }
    let curve = |x: f64| branch.re_omega_at(x);
    locate_band_edges(branch.n, &k, &w, &ok, Some(&curve), window_cells)
}
