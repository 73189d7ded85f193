//! Exciton amplitude near a quadratic band edge. The reservoir memory kernel
//! is `φ C e^{iδτ} / sqrt(πτ)` with `φ = e^{∓iπ/4}` for a minimum or maximum;
//! its transform gives `b̃(z) = 1 / (z + γ/2 + φ C / sqrt(z - iδ))`.
//!
//! Times are in units of 1/β and rates in units of β.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_edge::ExtremumKind;
use crate::error::{Error, Result};
use crate::numerics::laplace::{invert_laplace, InversionMethod, InversionSettings};
use crate::numerics::volterra::{solve_volterra, KernelShape};
use crate::numerics::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirSpec {
    /// Exciton frequency minus band-edge frequency.
    pub delta: f64,
    pub curvature: f64,
    /// Band-edge coupling, β^{3/2} units.
    #[serde(default = "unit")]
    pub coupling: f64,
    /// Background decay into other modes.
    #[serde(default)]
    pub gamma: f64,
    pub kind: ExtremumKind,
}

fn unit() -> f64 {
    1.0
}

impl ReservoirSpec {
    pub fn minimum(delta: f64, gamma: f64) -> Self {
        Self { delta, curvature: 1.0, coupling: 1.0, gamma, kind: ExtremumKind::Minimum }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coupling >= 0.0) || !(self.gamma >= 0.0) || !(self.curvature > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidInput("reservoir needs C >= 0, gamma >= 0, A > 0 and finite delta".into()));
        }
        Ok(())
    }

    pub fn phase(&self) -> Complex64 {
        let q = std::f64::consts::FRAC_PI_4;
        match self.kind {
            ExtremumKind::Minimum => Complex64::from_polar(1.0, -q),
            ExtremumKind::Maximum => Complex64::from_polar(1.0, q),
        }
    }

    fn transform(&self, z: Complex64) -> Complex64 {
        let root = (z - Complex64::new(0.0, self.delta)).sqrt();
        1.0 / (z + 0.5 * self.gamma + self.phase() * self.coupling / root)
    }

    /// Memory kernel without its `1/sqrt(τ)` factor.
    pub fn kernel_factor(&self, tau: f64) -> Complex64 {
        self.phase() * self.coupling * Complex64::from_polar(1.0, self.delta * tau) / std::f64::consts::PI.sqrt()
    }
}

/// `b̃(z)` on the principal branch; only defined for `Re z > 0`.
pub fn amplitude_transform(spec: &ReservoirSpec, z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return Err(Error::BranchViolation { re: z.re });
    }
    spec.validate()?;
    Ok(spec.transform(z))
}

fn cubic_roots(c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    // u^3 + c1 u + c0 by simultaneous iteration, then Newton polish
    let p = |u: Complex64| u * u * u + c1 * u + c0;
    let scale = 1.0 + c1.norm().sqrt() + c0.norm().cbrt();
    let seed = Complex64::new(0.4, 0.9) * scale;
    let mut r = [Complex64::new(1.0, 0.0) * scale, seed, seed * seed / scale];
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..3 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            let step = p(r[i]) / den;
            r[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * scale {
            break;
        }
    }
    for u in &mut r {
        for _ in 0..3 {
            let d = 3.0 * *u * *u + c1;
            if d.norm() > 0.0 {
                *u -= p(*u) / d;
            }
        }
    }
    r
}

/// Poles of `b̃` on the principal sheet of `sqrt(z - iδ)`.
pub fn transform_poles(spec: &ReservoirSpec) -> Vec<Complex64> {
    let c1 = Complex64::new(0.5 * spec.gamma, spec.delta);
    let c0 = spec.phase() * spec.coupling;
    if spec.coupling == 0.0 {
        return vec![Complex64::new(-0.5 * spec.gamma, 0.0)];
    }
    cubic_roots(c1, c0)
        .into_iter()
        .filter(|u| u.re > 0.0 || (u.re == 0.0 && u.im >= 0.0))
        .map(|u| u * u + Complex64::new(0.0, spec.delta))
        .collect()
}

/// Residues of `b̃` at its principal-sheet poles.
pub fn pole_residues(spec: &ReservoirSpec) -> Vec<(Complex64, Complex64)> {
    transform_poles(spec)
        .into_iter()
        .map(|p| {
            let root = (p - Complex64::new(0.0, spec.delta)).sqrt();
            let slope = 1.0 - 0.5 * spec.phase() * spec.coupling / (root * root * root);
            (p, 1.0 / slope)
        })
        .collect()
}

/// Contour around the branch cut only; poles are removed beforehand.
pub fn inversion_settings(spec: &ReservoirSpec) -> InversionSettings {
    InversionSettings {
        shift: 0.0,
        nodes: 32,
        method: InversionMethod::DeformedContour,
        center: spec.delta,
        half_height: 0.0,
    }
}

/// Pole terms in closed form plus the inverted branch-cut remainder.
pub fn laplace_amplitude(spec: &ReservoirSpec, grid: &TimeGrid) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let poles = if spec.coupling == 0.0 {
        vec![(Complex64::new(-0.5 * spec.gamma, 0.0), Complex64::new(1.0, 0.0))]
    } else {
        pole_residues(spec)
    };
    let cut = invert_laplace(
        |z| {
            let smooth: Complex64 = poles.iter().map(|(p, r)| r / (z - p)).sum();
            if spec.coupling == 0.0 { Complex64::new(0.0, 0.0) } else { spec.transform(z) - smooth }
        },
        grid,
        &inversion_settings(spec),
    )?;
    let mut b: Vec<Complex64> = cut
        .into_iter()
        .enumerate()
        .map(|(i, c)| c + poles.iter().map(|(p, r)| r * (p * grid.t(i)).exp()).sum::<Complex64>())
        .collect();
    b[0] = Complex64::new(1.0, 0.0);
    Ok(b)
}

pub const CROSS_CHECK_LIMIT: f64 = 1e-5;
const VOLTERRA_STEP: f64 = 0.0025;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTrace {
    pub grid: TimeGrid,
    pub b_e: Vec<Complex64>,
    pub population: Vec<f64>,
    /// Sup-norm distance to the direct time-domain solution.
    pub cross_check: f64,
}

/// Direct product-integration solution sampled on `grid`.
pub fn volterra_amplitude(spec: &ReservoirSpec, grid: &TimeGrid) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let sub = (grid.dt / VOLTERRA_STEP).ceil().max(1.0) as usize;
    let fine = TimeGrid::new(grid.dt / sub as f64, (grid.count - 1) * sub + 1)?;
    let sol = solve_volterra(
        Complex64::new(0.5 * spec.gamma, 0.0),
        |tau| spec.kernel_factor(tau),
        KernelShape::InverseSqrt,
        &fine,
    )?;
    Ok((0..grid.count).map(|i| sol.extrapolated[i * sub]).collect())
}

/// Amplitude by contour inversion, cross-checked against the Volterra solution.
pub fn decay_trace(spec: &ReservoirSpec, grid: &TimeGrid) -> Result<AmplitudeTrace> {
    spec.validate()?;
    if grid.t_max() < 5.0 {
        return Err(Error::InvalidInput(format!("time grid must span at least 5/β, got {}", grid.t_max())));
    }
    let (laplace, direct) = rayon::join(
        || laplace_amplitude(spec, grid),
        || volterra_amplitude(spec, grid),
    );
    let b_e = laplace?;
    let direct = direct?;
    let cross_check = b_e.iter().zip(&direct).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if !(cross_check <= CROSS_CHECK_LIMIT) {
        return Err(Error::CrossCheckFailure { disagreement: cross_check });
    }
    let population = b_e.iter().map(|b| b.norm_sqr()).collect();
    Ok(AmplitudeTrace { grid: *grid, b_e, population, cross_check })
}

/// Traces for several specs on a shared grid.
pub fn decay_traces(specs: &[ReservoirSpec], grid: &TimeGrid) -> Result<Vec<AmplitudeTrace>> {
    specs.par_iter().map(|s| decay_trace(s, grid)).collect()
}
