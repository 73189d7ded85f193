//! Confined acoustic phonons of a free-standing slab: Rayleigh-Lamb
//! residuals, branch tracing from the zone-centre cutoffs, and band edges.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band_edge::{locate_band_edges, BandEdgePoint, DEFAULT_WINDOW_CELLS};
use crate::error::{Error, Result};
use crate::numerics::roots::{brent, golden_min};

pub const MAX_BRANCHES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElasticSlab {
    pub w: f64,
    pub c_l: f64,
    pub c_t: f64,
}

impl ElasticSlab {
    /// Unit width and transverse velocity.
    pub fn dimensionless(velocity_ratio: f64) -> Self {
        Self { w: 1.0, c_l: velocity_ratio, c_t: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(Error::InvalidInput(format!("slab width {} must be positive", self.w)));
        }
        if !(self.c_t > 0.0 && self.c_l > self.c_t && self.c_l.is_finite()) {
            return Err(Error::InvalidInput(format!("need c_l > c_t > 0, got c_l = {}, c_t = {}", self.c_l, self.c_t)));
        }
        Ok(())
    }

    pub fn velocity_ratio(&self) -> f64 {
        self.c_l / self.c_t
    }

    /// `(q_l, q_t)` as principal complex roots.
    pub fn wavevectors(&self, q_parallel: f64, omega: f64) -> (Complex64, Complex64) {
        let k2 = q_parallel * q_parallel;
        let ql = Complex64::new((omega / self.c_l).powi(2) - k2, 0.0).sqrt();
        let qt = Complex64::new((omega / self.c_t).powi(2) - k2, 0.0).sqrt();
        (ql, qt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhononFamily {
    /// Symmetric about the mid-plane.
    Dilatational,
    /// Antisymmetric bending waves.
    Flexural,
}

impl PhononFamily {
    pub fn name(self) -> &'static str {
        match self {
            PhononFamily::Dilatational => "dilatational",
            PhononFamily::Flexural => "flexural",
        }
    }
}

/// `sin(z h) / z`, regular at `z = 0`.
fn sinc(z: Complex64, h: f64) -> Complex64 {
    let zh = z * h;
    if zh.norm() < 1e-4 {
        let z2 = zh * zh;
        h * (1.0 - z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        zh.sin() / z
    }
}

/// Bound on `|sin(z h)|` and `|cos(z h)|`.
fn envelope(z: Complex64, h: f64) -> f64 {
    (z.im * h).abs().cosh()
}

/// Cross-multiplied dispersion relation and a scale made of term
/// envelopes, so the scale stays finite where both terms vanish. The
/// trivial factors `q_t` (dilatational) and `q_l` (flexural) are divided
/// out so the points `q_t = 0`, `q_l = 0` are not spurious roots.
fn residual_and_scale(family: PhononFamily, q_parallel: f64, omega: f64, slab: &ElasticSlab) -> (Complex64, f64) {
    let (ql, qt) = slab.wavevectors(q_parallel, omega);
    let h = 0.5 * slab.w;
    let k2 = q_parallel * q_parallel;
    let lead = (k2 - qt * qt).powi(2);
    let (inner, outer) = match family {
        PhononFamily::Dilatational => (qt, ql),
        PhononFamily::Flexural => (ql, qt),
    };
    // lead · sinc(inner) · cos(outer) + 4 k² · outer · sin(outer) · cos(inner)
    let value = lead * sinc(inner, h) * (outer * h).cos() + 4.0 * k2 * outer * (outer * h).sin() * (inner * h).cos();
    let e = envelope(inner, h) * envelope(outer, h);
    let scale = lead.norm() * h * e / (inner.norm() * h).max(1.0) + 4.0 * k2 * outer.norm() * e;
    (value, scale)
}

/// Pole-free Rayleigh-Lamb residual; real up to rounding for real inputs.
pub fn rayleigh_lamb_residual(family: PhononFamily, q_parallel: f64, omega: f64, slab: &ElasticSlab) -> Complex64 {
    residual_and_scale(family, q_parallel, omega, slab).0
}

/// Residual relative to the envelope of its terms.
pub fn normalized_phonon_residual(family: PhononFamily, q_parallel: f64, omega: f64, slab: &ElasticSlab) -> f64 {
    let (v, s) = residual_and_scale(family, q_parallel, omega, slab);
    if s == 0.0 {
        0.0
    } else {
        v.norm() / s
    }
}

/// Signed real residual used for bracketing.
fn signed_residual(family: PhononFamily, q_parallel: f64, omega: f64, slab: &ElasticSlab) -> f64 {
    let (v, s) = residual_and_scale(family, q_parallel, omega, slab);
    if s == 0.0 {
        0.0
    } else {
        v.re / s
    }
}

type Series<'a> = Box<dyn Fn(usize) -> f64 + 'a>;

/// Zone-centre frequencies of the lowest `count` branches, with multiplicity.
/// The lowest branch of each family starts at zero.
pub fn zone_centre_cutoffs(family: PhononFamily, slab: &ElasticSlab, count: usize) -> Vec<f64> {
    let base = PI / slab.w;
    let mut out = vec![0.0];
    let (t_series, l_series): (Series<'_>, Series<'_>) = match family {
        PhononFamily::Dilatational => (
            Box::new(move |m| 2.0 * (m + 1) as f64 * base * slab.c_t),
            Box::new(move |m| (2 * m + 1) as f64 * base * slab.c_l),
        ),
        PhononFamily::Flexural => (
            Box::new(move |m| (2 * m + 1) as f64 * base * slab.c_t),
            Box::new(move |m| 2.0 * (m + 1) as f64 * base * slab.c_l),
        ),
    };
    for m in 0..count {
        out.push(t_series(m));
        out.push(l_series(m));
    }
    out.sort_by(f64::total_cmp);
    out.truncate(count);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononSample {
    pub q_parallel: f64,
    pub omega: f64,
    pub q_l: Complex64,
    pub q_t: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhononBranch {
    pub family: PhononFamily,
    pub n: usize,
    pub slab: ElasticSlab,
    pub samples: Vec<PhononSample>,
}

impl PhononBranch {
    /// Frequency polished on the residual at an arbitrary in-plane wavevector.
    pub fn omega_at(&self, q_parallel: f64) -> Option<f64> {
        let s = &self.samples;
        let i = s.partition_point(|p| p.q_parallel < q_parallel).clamp(1, s.len() - 1);
        let (a, b) = (&s[i - 1], &s[i]);
        let guess = a.omega + (b.omega - a.omega) * (q_parallel - a.q_parallel) / (b.q_parallel - a.q_parallel);
        let f = |w: f64| signed_residual(self.family, q_parallel, w, &self.slab);
        let mut delta = 1e-7 * (guess.abs() + self.slab.c_t / self.slab.w);
        for _ in 0..30 {
            let (lo, hi) = ((guess - delta).max(0.0), guess + delta);
            if f(lo) * f(hi) < 0.0 {
                return brent(f, lo, hi, 1e-15 * guess.abs().max(1e-300));
            }
            delta *= 2.0;
        }
        None
    }

    /// `max |c√(q_∥² + q²) - ω|` over both velocities and all samples,
    /// relative to `max(ω, c_t q_∥)`.
    pub fn compatibility_residual(&self) -> f64 {
        self.samples
            .iter()
            .filter(|p| p.omega > 0.0)
            .map(|p| {
                let scale = p.omega.max(self.slab.c_t * p.q_parallel);
                let k2 = Complex64::new(p.q_parallel * p.q_parallel, 0.0);
                let l = (self.slab.c_l * (k2 + p.q_l * p.q_l).sqrt()).norm() - p.omega;
                let t = (self.slab.c_t * (k2 + p.q_t * p.q_t).sqrt()).norm() - p.omega;
                l.abs().max(t.abs()) / scale
            })
            .fold(0.0, f64::max)
    }

    /// Largest normalized residual over the samples away from zero frequency.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .filter(|p| p.omega > 0.0)
            .map(|p| normalized_phonon_residual(self.family, p.q_parallel, p.omega, &self.slab))
            .fold(0.0, f64::max)
    }
}

/// In-plane wavevectors `0, q_max / (points - 1), ..., q_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavevectorRange {
    pub q_max: f64,
    pub points: usize,
}

/// Resolution of the first-step scan, in units of `c_t / w`.
const SCAN_STEP: f64 = 1e-3;
const MAX_SUBDIVISIONS: u32 = 4;
/// Relative spacing below which two branches count as touching.
const SEPARATION: f64 = 1e-9;

/// Dimensionless tracer: `c_t = w = 1`.
struct Tracer {
    family: PhononFamily,
    slab: ElasticSlab,
    count: usize,
}

impl Tracer {
    fn g(&self, x: f64, w: f64) -> f64 {
        signed_residual(self.family, x, w, &self.slab)
    }

    /// Lowest `count` roots at `x` by a scan fine enough to split near-degenerate pairs.
    fn scan(&self, x: f64) -> Result<Vec<f64>> {
        let f = |w: f64| self.g(x, w);
        // geometric start below the thin-plate bending frequency, above the
        // rounding floor around the trivial zero root
        let kappa = self.slab.velocity_ratio();
        let plate = x * x * (1.0 - 1.0 / (kappa * kappa)).sqrt() / 3f64.sqrt();
        let start = 0.5 * plate.min(0.5 * x);
        let mut grid: Vec<f64> = if start < 0.1 { (0..200).map(|i| start * (0.1 / start).powf(i as f64 / 199.0)).collect() } else { vec![start] };
        let mut w = *grid.last().unwrap();
        let limit = 2.0 * PI * (self.count as f64 + 2.0) * self.slab.c_l;
        while w < limit {
            w += SCAN_STEP;
            grid.push(w);
        }
        let vals: Vec<f64> = grid.iter().map(|&w| f(w)).collect();
        let mut roots = Vec::new();
        for j in 1..grid.len() {
            if roots.len() >= self.count {
                break;
            }
            let (a, b) = (grid[j - 1], grid[j]);
            if vals[j - 1] * vals[j] < 0.0 {
                roots.extend(brent(f, a, b, 1e-15 * b));
            } else if j + 1 < grid.len() && vals[j].abs() < vals[j - 1].abs() && vals[j].abs() <= vals[j + 1].abs() && vals[j] * vals[j + 1] > 0.0 {
                // a close pair shows up as a dip of |g| without a sign change
                let s = vals[j].signum();
                let m = golden_min(|w| s * f(w), a, grid[j + 1], 1e-15 * b);
                if s * f(m) < 0.0 {
                    roots.extend(brent(f, a, m, 1e-15 * b));
                    roots.extend(brent(f, m, grid[j + 1], 1e-15 * b));
                }
            }
        }
        roots.truncate(self.count);
        if roots.len() < self.count {
            return Err(Error::InvalidInput(format!("found {} of {} branches at q w = {x}", roots.len(), self.count)));
        }
        if let Some(i) = (1..roots.len()).find(|&i| roots[i] - roots[i - 1] <= SEPARATION * roots[i]) {
            return Err(Error::BranchCrossingAmbiguity { lower: i - 1, upper: i, q: x / self.slab.w });
        }
        Ok(roots)
    }

    /// Corrects every branch at `x` from linear predictions; each bracket
    /// grows from the prediction up to half the gap to its neighbours.
    fn correct(&self, x: f64, predicted: &[f64]) -> Option<Vec<f64>> {
        let n = predicted.len();
        let f = |w: f64| self.g(x, w);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let p = predicted[i];
            let below = if i == 0 { p } else { p - predicted[i - 1] };
            let above = if i + 1 < n { predicted[i + 1] - p } else { below };
            let reach = 0.5 * below.min(above);
            if !(reach > 0.0) {
                return None;
            }
            let fp = f(p);
            let mut delta = (1e-9 * p).min(reach);
            let root = loop {
                if fp == 0.0 {
                    break Some(p);
                }
                let (lo, hi) = (p - delta, p + delta);
                let (fl, fh) = (f(lo), f(hi));
                if fp * fl < 0.0 {
                    break brent(f, lo, p, 1e-15 * p);
                }
                if fp * fh < 0.0 {
                    break brent(f, p, hi, 1e-15 * hi);
                }
                if delta >= reach {
                    break None;
                }
                delta = (4.0 * delta).min(reach);
            }?;
            out.push(root);
        }
        let ordered = out.windows(2).all(|w| w[1] - w[0] > SEPARATION * w[1]) && out[0] > 0.0;
        ordered.then_some(out)
    }

    /// Advances from `(x0, w0)` with slopes `slope` to `x1`, halving the step
    /// when correction fails and falling back to a rank scan.
    fn advance(&self, x0: f64, w0: &[f64], slope: &[f64], x1: f64, depth: u32) -> Result<Vec<f64>> {
        let predicted: Vec<f64> = w0.iter().zip(slope).map(|(w, s)| w + s * (x1 - x0)).collect();
        if let Some(w) = self.correct(x1, &predicted) {
            return Ok(w);
        }
        if depth >= MAX_SUBDIVISIONS {
            return self.scan(x1);
        }
        let xm = 0.5 * (x0 + x1);
        let wm = self.advance(x0, w0, slope, xm, depth + 1)?;
        let slope_m: Vec<f64> = wm.iter().zip(w0).map(|(b, a)| (b - a) / (xm - x0)).collect();
        self.advance(xm, &wm, &slope_m, x1, depth + 1)
    }
}

/// Lowest `branch_count` branches of one family over `range`, sorted by
/// zone-centre frequency.
pub fn trace_phonon_branches(slab: &ElasticSlab, family: PhononFamily, branch_count: usize, range: &WavevectorRange) -> Result<Vec<PhononBranch>> {
    slab.validate()?;
    if branch_count == 0 || branch_count > MAX_BRANCHES {
        return Err(Error::InvalidInput(format!("branch count {branch_count} must lie in 1..={MAX_BRANCHES}")));
    }
    if !(range.q_max > 0.0 && range.q_max.is_finite()) || range.points < 3 {
        return Err(Error::InvalidInput("wavevector range needs q_max > 0 and at least 3 points".into()));
    }
    let unit = ElasticSlab::dimensionless(slab.velocity_ratio());
    let tracer = Tracer { family, slab: unit, count: branch_count };
    let x_max = range.q_max * slab.w;
    let xs: Vec<f64> = (0..range.points).map(|i| x_max * i as f64 / (range.points - 1) as f64).collect();
    let mut rows = vec![zone_centre_cutoffs(family, &unit, branch_count), tracer.scan(xs[1])?];
    for i in 2..xs.len() {
        let (a, b) = (&rows[i - 2], &rows[i - 1]);
        let slope: Vec<f64> = a.iter().zip(b).map(|(p, q)| (q - p) / (xs[i - 1] - xs[i - 2])).collect();
        let next = tracer.advance(xs[i - 1], b, &slope, xs[i], 0)?;
        rows.push(next);
    }
    let scale = slab.c_t / slab.w;
    Ok((0..branch_count)
        .map(|n| PhononBranch {
            family,
            n,
            slab: *slab,
            samples: xs
                .iter()
                .zip(&rows)
                .map(|(&x, row)| {
                    let (q_parallel, omega) = (x / slab.w, row[n] * scale);
                    let (q_l, q_t) = slab.wavevectors(q_parallel, omega);
                    PhononSample { q_parallel, omega, q_l, q_t }
                })
                .collect(),
        })
        .collect())
}

/// Both families, traced in parallel.
pub fn trace_both_families(slab: &ElasticSlab, branch_count: usize, range: &WavevectorRange) -> Result<(Vec<PhononBranch>, Vec<PhononBranch>)> {
    let (d, f) = rayon::join(
        || trace_phonon_branches(slab, PhononFamily::Dilatational, branch_count, range),
        || trace_phonon_branches(slab, PhononFamily::Flexural, branch_count, range),
    );
    Ok((d?, f?))
}

/// Band edges of a traced branch, refined on the residual.
pub fn find_phonon_band_edges(branch: &PhononBranch) -> Result<Vec<BandEdgePoint>> {
    find_phonon_band_edges_with_window(branch, DEFAULT_WINDOW_CELLS)
}

pub fn find_phonon_band_edges_with_window(branch: &PhononBranch, window_cells: f64) -> Result<Vec<BandEdgePoint>> {
    let k: Vec<f64> = branch.samples.iter().map(|s| s.q_parallel).collect();
    let w: Vec<f64> = branch.samples.iter().map(|s| s.omega).collect();
    let curve = |q: f64| branch.omega_at(q);
    locate_band_edges(branch.n as u32, &k, &w, &vec![true; k.len()], Some(&curve), window_cells)
}

/// Least-squares slope of `ln ω` against `ln q_∥` over samples with
/// `0 < q_∥ ≤ q_fit`.
pub fn onset_exponent(branch: &PhononBranch, q_fit: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = branch
        .samples
        .iter()
        .filter(|s| s.q_parallel > 0.0 && s.q_parallel <= q_fit && s.omega > 0.0)
        .map(|s| (s.q_parallel.ln(), s.omega.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
