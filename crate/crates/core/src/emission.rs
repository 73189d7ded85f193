//! Golden-rule emission rate into guided modes: each resonant crossing of a
//! bound branch contributes `weight / |dω/dk|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_edge::{BandEdgePoint, ExtremumKind};
use crate::error::{Error, Result};
use crate::numerics::roots::brent;
use crate::plasmon::ModeBranch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingTable {
    pub n: u32,
    pub k: Vec<f64>,
    pub weight: Vec<f64>,
}

/// Spectral coupling weight per mode and wavevector, in β units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingModel {
    Uniform { weight: f64 },
    UserTable { tables: Vec<CouplingTable> },
}

impl Default for CouplingModel {
    fn default() -> Self {
        CouplingModel::Uniform { weight: 1.0 }
    }
}

impl CouplingModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CouplingModel::Uniform { weight } if *weight >= 0.0 => Ok(()),
            CouplingModel::Uniform { .. } => Err(Error::InvalidInput("coupling weight must be non-negative".into())),
            CouplingModel::UserTable { tables } => {
                for t in tables {
                    if t.k.len() != t.weight.len() || t.k.is_empty() {
                        return Err(Error::InvalidInput(format!("coupling table for n = {} is malformed", t.n)));
                    }
                    if t.k.windows(2).any(|w| w[1] <= w[0]) {
                        return Err(Error::InvalidInput("coupling table k must increase".into()));
                    }
                    if t.weight.iter().any(|w| !(*w >= 0.0)) {
                        return Err(Error::InvalidInput("coupling weights must be non-negative".into()));
                    }
                }
                Ok(())
            }
        }
    }

    /// Piecewise-linear in k, clamped at the table ends; zero for absent modes.
    pub fn weight(&self, n: u32, k: f64) -> f64 {
        match self {
            CouplingModel::Uniform { weight } => *weight,
            CouplingModel::UserTable { tables } => {
                let Some(t) = tables.iter().find(|t| t.n == n) else { return 0.0 };
                let i = t.k.partition_point(|&x| x < k);
                if i == 0 {
                    return t.weight[0];
                }
                if i == t.k.len() {
                    return *t.weight.last().unwrap();
                }
                let s = (k - t.k[i - 1]) / (t.k[i] - t.k[i - 1]);
                t.weight[i - 1] + s * (t.weight[i] - t.weight[i - 1])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SEProfile {
    pub omega0: Vec<f64>,
    pub rate: Vec<f64>,
    pub is_singular: Vec<bool>,
    /// Midpoints of grid cells across which a branch gains or loses a pair of crossings.
    pub singular_points: Vec<f64>,
}

/// A contiguous run of bound, continuously joined samples.
#[derive(Debug, Clone)]
pub struct Segment {
    pub n: u32,
    pub k: Vec<f64>,
    pub w: Vec<f64>,
    pub slope: Vec<f64>,
}

/// Derivative of the 5-point interpolating polynomial through the nearest nodes.
fn derivatives(k: &[f64], w: &[f64]) -> Vec<f64> {
    let m = k.len();
    let span = m.min(5);
    (0..m)
        .map(|i| {
            let start = i.saturating_sub(span / 2).min(m - span);
            let nodes = start..start + span;
            let mut d = 0.0;
            for j in nodes.clone() {
                let lj = if j == i {
                    nodes.clone().filter(|&q| q != j).map(|q| 1.0 / (k[j] - k[q])).sum::<f64>()
                } else {
                    let num: f64 = nodes.clone().filter(|&q| q != j && q != i).map(|q| k[i] - k[q]).product();
                    let den: f64 = nodes.clone().filter(|&q| q != j).map(|q| k[j] - k[q]).product();
                    num / den
                };
                d += lj * w[j];
            }
            d
        })
        .collect()
}

const REFINE_CELLS: usize = 3;
const REFINE_FACTOR: usize = 32;

/// Resample cells around interior extrema with polished roots. A polished
/// value is kept only if it agrees with the coarse interpolant.
fn refine_extrema(seg: Segment, polish: &dyn Fn(f64) -> Option<f64>) -> Segment {
    let m = seg.k.len();
    if m < 5 {
        return seg;
    }
    let mut marked = vec![false; m - 1];
    for i in 1..m - 1 {
        let (l, r) = (seg.w[i] - seg.w[i - 1], seg.w[i + 1] - seg.w[i]);
        if l * r <= 0.0 {
            for c in i.saturating_sub(REFINE_CELLS)..(i + REFINE_CELLS).min(m - 1) {
                marked[c] = true;
            }
        }
    }
    if !marked.iter().any(|&x| x) {
        return seg;
    }
    let mut k = vec![seg.k[0]];
    let mut w = vec![seg.w[0]];
    for c in 0..m - 1 {
        if marked[c] {
            let h = seg.k[c + 1] - seg.k[c];
            for j in 1..REFINE_FACTOR {
                let t = j as f64 / REFINE_FACTOR as f64;
                let (coarse, _) = seg.hermite(c, t);
                match polish(seg.k[c] + t * h) {
                    Some(v) if (v - coarse).abs() < 1e-6 => {
                        k.push(seg.k[c] + t * h);
                        w.push(v);
                    }
                    _ => {}
                }
            }
        }
        k.push(seg.k[c + 1]);
        w.push(seg.w[c + 1]);
    }
    Segment::new(seg.n, k, w)
}

impl Segment {
    pub fn new(n: u32, k: Vec<f64>, w: Vec<f64>) -> Self {
        let slope = derivatives(&k, &w);
        Self { n, k, w, slope }
    }

    fn hermite(&self, i: usize, t: f64) -> (f64, f64) {
        let h = self.k[i + 1] - self.k[i];
        let (y0, y1) = (self.w[i], self.w[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        let dv = (6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1;
        (v, dv / h)
    }

    /// Interpolated frequency, clamped to the segment ends.
    pub fn value_at(&self, k: f64) -> f64 {
        let m = self.k.len();
        let i = self.k.partition_point(|&x| x <= k).clamp(1, m - 1) - 1;
        let t = ((k - self.k[i]) / (self.k[i + 1] - self.k[i])).clamp(0.0, 1.0);
        self.hermite(i, t).0
    }

    /// Resonant wavevectors and slopes `(k*, dω/dk)` at frequency `omega0`.
    pub fn crossings(&self, omega0: f64) -> Vec<(f64, f64)> {
        let mut out = self.raw_crossings(omega0);
        // exact tangencies carry no measure
        out.retain(|&(_, s)| s.abs() > 1e-14);
        out
    }

    fn raw_crossings(&self, omega0: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let cells = self.k.len() - 1;
        for i in 0..cells {
            let lo = self.w[i].min(self.w[i + 1]);
            let hi = self.w[i].max(self.w[i + 1]);
            let h = self.k[i + 1] - self.k[i];
            // the cubic can overshoot its end values by at most |m| h / 4
            let reach = 0.25 * h * (self.slope[i].abs() + self.slope[i + 1].abs());
            if omega0 < lo - reach || omega0 > hi + reach {
                continue;
            }
            // split at stationary points of the cubic so each piece is monotone
            let mut cuts = vec![0.0, 1.0];
            let (y0, y1) = (self.w[i], self.w[i + 1]);
            let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
            let a = 3.0 * (2.0 * y0 + m0 - 2.0 * y1 + m1);
            let b = 2.0 * (-3.0 * y0 - 2.0 * m0 + 3.0 * y1 - m1);
            let c = m0;
            if a.abs() > 1e-300 {
                let disc = b * b - 4.0 * a * c;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for r in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                        if r > 0.0 && r < 1.0 {
                            cuts.push(r);
                        }
                    }
                }
            } else if b.abs() > 1e-300 {
                let r = -c / b;
                if r > 0.0 && r < 1.0 {
                    cuts.push(r);
                }
            }
            cuts.sort_by(f64::total_cmp);
            let last_cell = i + 1 == cells;
            for p in cuts.windows(2) {
                let f = |t: f64| self.hermite(i, t).0 - omega0;
                let (fa, fb) = (f(p[0]), f(p[1]));
                if fa == 0.0 && p[0] == 0.0 || fa.signum() != fb.signum() {
                    // half-open cells: a root at t = 1 belongs to the next cell
                    if let Some(t) = brent(f, p[0], p[1], 1e-15) {
                        if t < 1.0 || last_cell {
                            let (_, slope) = self.hermite(i, t);
                            out.push((self.k[i] + t * h, slope));
                        }
                    }
                } else if fb == 0.0 && p[1] == 1.0 && last_cell {
                    let (_, slope) = self.hermite(i, 1.0);
                    out.push((self.k[i + 1], slope));
                }
            }
        }
        out
    }
}

/// Split a branch into bound, continuously joined runs of at least two samples.
pub fn bound_segments(branch: &ModeBranch) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut k = Vec::new();
    let mut w = Vec::new();
    for (i, s) in branch.samples.iter().enumerate() {
        let joined = i == 0 || branch.joined(i - 1);
        if !s.bound || !joined {
            if k.len() >= 2 {
                out.push(Segment::new(branch.n, std::mem::take(&mut k), std::mem::take(&mut w)));
            }
            k.clear();
            w.clear();
        }
        if s.bound {
            k.push(s.k);
            w.push(s.omega.re);
        }
    }
    if k.len() >= 2 {
        out.push(Segment::new(branch.n, k, w));
    }
    let polish = |k: f64| branch.re_omega_at(k);
    out.into_iter().map(|s| refine_extrema(s, &polish)).collect()
}

fn segment_rate(seg: &Segment, coupling: &CouplingModel, omega0: f64) -> (f64, usize) {
    let xs = seg.crossings(omega0);
    let rate = xs.iter().map(|&(k, s)| coupling.weight(seg.n, k) / s.abs()).sum();
    (rate, xs.len())
}

/// Emission rate profile over `omega0` (ω_p units; rate in the coupling's units).
pub fn se_rate_profile(branches: &[ModeBranch], coupling: &CouplingModel, omega0: &[f64]) -> Result<SEProfile> {
    coupling.validate()?;
    let segments: Vec<Segment> = branches.iter().flat_map(bound_segments).collect();
    if segments.is_empty() {
        return Err(Error::InvalidInput("no bound samples to integrate over".into()));
    }
    let lo = segments.iter().flat_map(|s| s.w.iter()).cloned().fold(f64::INFINITY, f64::min);
    let hi = segments.iter().flat_map(|s| s.w.iter()).cloned().fold(f64::NEG_INFINITY, f64::max);
    if let Some(&bad) = omega0.iter().find(|&&w| !(w >= lo && w <= hi)) {
        return Err(Error::GridOutsideSpan { omega: bad, lo, hi });
    }
    let rows: Vec<(f64, Vec<usize>)> = omega0
        .par_iter()
        .map(|&w| {
            let mut total = 0.0;
            let mut counts = Vec::with_capacity(segments.len());
            for seg in &segments {
                let (r, c) = segment_rate(seg, coupling, w);
                total += r;
                counts.push(c);
            }
            (total, counts)
        })
        .collect();
    let mut is_singular = vec![false; omega0.len()];
    let mut singular_points = Vec::new();
    for j in 0..omega0.len().saturating_sub(1) {
        let (a, b) = (&rows[j].1, &rows[j + 1].1);
        let jump = a.iter().zip(b).any(|(x, y)| x.abs_diff(*y) >= 2);
        if jump {
            singular_points.push(0.5 * (omega0[j] + omega0[j + 1]));
            let side = if rows[j].0 >= rows[j + 1].0 { j } else { j + 1 };
            is_singular[side] = true;
        }
    }
    Ok(SEProfile { omega0: omega0.to_vec(), rate: rows.into_iter().map(|r| r.0).collect(), is_singular, singular_points })
}

/// Slope of log(rate) against log|ω0 - ω_c| on the resonant side of `edge`,
/// sampled at the given detunings.
pub fn edge_log_slope(branches: &[ModeBranch], coupling: &CouplingModel, edge: &BandEdgePoint, detunings: &[f64]) -> Result<f64> {
    let sign = match edge.kind {
        ExtremumKind::Minimum => 1.0,
        ExtremumKind::Maximum => -1.0,
    };
    let grid: Vec<f64> = detunings.iter().map(|d| edge.omega_c + sign * d).collect();
    let branch: Vec<ModeBranch> = branches.iter().filter(|b| b.n == edge.n).cloned().collect();
    let profile = se_rate_profile(&branch, coupling, &grid)?;
    let xs: Vec<f64> = detunings.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = profile.rate.iter().map(|r| r.ln()).collect();
    Ok(linear_slope(&xs, &ys))
}

pub(crate) fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
