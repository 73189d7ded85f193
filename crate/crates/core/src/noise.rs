//! Current noise of a single dot in a p-i-n junction whose exciton decays
//! into a band-edge plasmon reservoir. States cycle `|0⟩ → |↑⟩ → |↓⟩ → |0⟩`
//! with electron injection Γ_L, exciton decay through the reservoir and hole
//! injection Γ_R. All rates and frequencies are in units of β.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band_edge::{BandEdgePoint, ExtremumKind};
use crate::dynamics::ReservoirSpec;
use crate::emission::Segment;
use crate::error::{Error, Result};
use crate::numerics::quad::integrate_adaptive;
use crate::plasmon::ModeBranch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionRates {
    pub gamma_l: f64,
    pub gamma_r: f64,
}

impl JunctionRates {
    pub fn validate(&self) -> Result<()> {
        if self.gamma_l > 0.0 && self.gamma_r > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidInput("junction rates must be positive".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DotState {
    EmptyWithHole,
    Exciton,
    EmptyGround,
}

/// Cycle order of the dot states.
pub const DOT_CYCLE: [DotState; 3] = [DotState::EmptyWithHole, DotState::Exciton, DotState::EmptyGround];

/// How the population kernel is built from the amplitude self-energy `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelConvention {
    /// `Re c(iω) + Re c(-iω)`: the dissipative part only.
    #[default]
    Dissipative,
    /// `c(iω) + conj(c(-iω))` including the reactive part.
    AsPrinted,
}

/// Reservoir self-energy built from a traced branch near one band edge.
#[derive(Debug, Clone)]
pub struct NumericReservoir {
    /// Branch frequency relative to the edge, in β units, against `k - k_c`.
    segment: Segment,
    curvature: f64,
    kind: ExtremumKind,
    weight: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl NumericReservoir {
    /// `offsets` are `k - k_c`; `detuning` is the branch frequency minus the
    /// edge frequency in β units. The weight is set so that an exactly
    /// quadratic branch reproduces `spec`.
    pub fn from_samples(offsets: Vec<f64>, detuning: Vec<f64>, spec: &ReservoirSpec) -> Result<Self> {
        spec.validate()?;
        if offsets.len() < 5 || offsets.len() != detuning.len() || offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("numeric reservoir needs >= 5 increasing samples".into()));
        }
        if !(offsets[0] < 0.0 && *offsets.last().unwrap() > 0.0) {
            return Err(Error::InvalidInput("samples must straddle the band edge".into()));
        }
        let weight = spec.coupling * spec.curvature.sqrt() / std::f64::consts::PI;
        Ok(Self {
            segment: Segment::new(0, offsets, detuning),
            curvature: spec.curvature,
            kind: spec.kind,
            weight,
            delta: spec.delta,
            gamma: spec.gamma,
        })
    }

    /// Resample polished roots of `branch` on `points` uniform wavevectors
    /// within `half_width` of `edge`. `frequency_scale` is β in ω_p units;
    /// `spec.curvature` is overwritten by the edge curvature in β units.
    pub fn from_branch(
        branch: &ModeBranch,
        edge: &BandEdgePoint,
        half_width: f64,
        points: usize,
        frequency_scale: f64,
        spec: &ReservoirSpec,
    ) -> Result<Self> {
        if points < 5 || !(half_width > 0.0) || !(frequency_scale > 0.0) {
            return Err(Error::InvalidInput("bad resampling window".into()));
        }
        let offsets: Vec<f64> = (0..points).map(|i| -half_width + 2.0 * half_width * i as f64 / (points - 1) as f64).collect();
        let detuning = offsets
            .par_iter()
            .map(|&u| {
                branch
                    .re_omega_at(edge.k_c + u)
                    .map(|w| (w - edge.omega_c) / frequency_scale)
                    .ok_or_else(|| Error::Domain(format!("cannot polish branch at k = {}", edge.k_c + u)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let spec = ReservoirSpec { curvature: edge.curvature / frequency_scale, kind: edge.kind, ..*spec };
        Self::from_samples(offsets, detuning, &spec)
    }

    fn sign(&self) -> f64 {
        match self.kind {
            ExtremumKind::Minimum => 1.0,
            ExtremumKind::Maximum => -1.0,
        }
    }

    /// `∫_L^∞ du / (a + b u²)` for `Re a > 0`.
    fn tail(&self, a: Complex64, length: f64) -> Complex64 {
        let b = Complex64::new(0.0, self.sign() * self.curvature);
        let (ra, rb) = (a.sqrt(), b.sqrt());
        (Complex64::new(std::f64::consts::FRAC_PI_2, 0.0) - (length * rb / ra).atan()) / (ra * rb)
    }

    /// Self-energy for `Re z > 0`: quadrature over the sampled window plus
    /// quadratic tails outside it.
    pub fn selfenergy(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re > 0.0) {
            return Err(Error::BranchViolation { re: z.re });
        }
        let k = &self.segment.k;
        let (lo, hi) = (k[0], *k.last().unwrap());
        let a = z - Complex64::new(0.0, self.delta);
        let inner = integrate_adaptive(
            |u| 1.0 / (a + Complex64::new(0.0, self.segment.value_at(u))),
            lo,
            hi,
            1e-13,
            1e-10,
            4000,
        )?;
        let tails = self.tail(a, -lo) + self.tail(a, hi);
        Ok(0.5 * self.gamma + self.weight * (inner + tails))
    }

    /// `Re c(iω)` approached from the right half-plane: golden-rule sum over
    /// the resonant wavevectors, including those on the quadratic tails.
    pub fn axis_real(&self, omega: f64) -> f64 {
        let target = self.delta - omega;
        let mut total = 0.0;
        for (_, slope) in self.segment.crossings(target) {
            total += 1.0 / slope.abs();
        }
        let k = &self.segment.k;
        let reach = target * self.sign() / self.curvature;
        if reach > 0.0 {
            let u = reach.sqrt();
            for edge in [-k[0], *k.last().unwrap()] {
                if u > edge {
                    total += 1.0 / (2.0 * self.curvature * u);
                }
            }
        }
        0.5 * self.gamma + std::f64::consts::PI * self.weight * total
    }
}

/// Self-energy `c(z)` of the exciton amplitude.
#[derive(Debug, Clone)]
pub enum Reservoir {
    Quadratic(ReservoirSpec),
    Numeric(NumericReservoir),
}

impl Reservoir {
    pub fn delta(&self) -> f64 {
        match self {
            Reservoir::Quadratic(s) => s.delta,
            Reservoir::Numeric(n) => n.delta,
        }
    }

    /// `c(z)` for `Re z > 0`.
    pub fn selfenergy(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Reservoir::Quadratic(s) => {
                if !(z.re > 0.0) {
                    return Err(Error::BranchViolation { re: z.re });
                }
                Ok(quadratic_selfenergy(s, z))
            }
            Reservoir::Numeric(n) => n.selfenergy(z),
        }
    }
}

fn quadratic_selfenergy(s: &ReservoirSpec, z: Complex64) -> Complex64 {
    if s.coupling == 0.0 {
        return Complex64::new(0.5 * s.gamma, 0.0);
    }
    if z == Complex64::new(0.0, s.delta) {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    0.5 * s.gamma + s.phase() * s.coupling / (z - Complex64::new(0.0, s.delta)).sqrt()
}

/// `c(z)` on the imaginary axis as the limit from the right.
pub fn reservoir_selfenergy(reservoir: &Reservoir, z: Complex64) -> Result<Complex64> {
    reservoir.selfenergy(z)
}

/// `A(iω)` and its first derivative in ω at the same point, when available.
fn kernel_with_slope(reservoir: &Reservoir, omega: f64, convention: KernelConvention) -> Result<(Complex64, Complex64)> {
    match (reservoir, convention) {
        (Reservoir::Quadratic(s), KernelConvention::AsPrinted) => {
            // the limit Re z → 0+ of the principal branch is the principal branch at Re z = 0
            let up = quadratic_selfenergy(s, Complex64::new(0.0, omega));
            let down = quadratic_selfenergy(s, Complex64::new(0.0, -omega));
            let d = |w: f64| {
                if s.coupling == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let r = Complex64::new(0.0, w - s.delta);
                -0.5 * Complex64::i() * s.phase() * s.coupling / (r * r.sqrt())
            };
            Ok((up + down.conj(), d(omega) - d(-omega).conj()))
        }
        (Reservoir::Quadratic(s), KernelConvention::Dissipative) => {
            let a = quadratic_selfenergy(s, Complex64::new(0.0, omega)).re + quadratic_selfenergy(s, Complex64::new(0.0, -omega)).re;
            Ok((Complex64::new(a, 0.0), Complex64::new(0.0, 0.0)))
        }
        (Reservoir::Numeric(n), KernelConvention::Dissipative) => {
            Ok((Complex64::new(n.axis_real(omega) + n.axis_real(-omega), 0.0), Complex64::new(0.0, 0.0)))
        }
        (Reservoir::Numeric(_), KernelConvention::AsPrinted) => {
            Err(Error::InvalidInput("the numeric reservoir provides the dissipative kernel only".into()))
        }
    }
}

/// Population kernel `A(iω)`.
pub fn population_kernel(reservoir: &Reservoir, omega: f64, convention: KernelConvention) -> Result<Complex64> {
    kernel_with_slope(reservoir, omega, convention).map(|(a, _)| a)
}

/// `B(ω)` of the noise formula for a given kernel value.
fn response(rates: &JunctionRates, a: Complex64, omega: f64) -> Result<Complex64> {
    let (gl, gr) = (rates.gamma_l, rates.gamma_r);
    let iw = Complex64::new(0.0, omega);
    if a.is_infinite() {
        // on the branch point itself; limit A → ∞
        return Ok(gl / (-gl * gr + (gl + iw) * (gr + iw)));
    }
    let den = -a * gl * gr + (a + iw) * (gl + iw) * (gr + iw);
    let scale = (a.norm() + omega.abs()) * (gl + omega.abs()) * (gr + omega.abs());
    if den.norm() <= 1e-14 * scale {
        return Err(Error::PoleOnGrid { omega });
    }
    Ok(a * gl / den)
}

/// `1 + Γ_R [B(ω) + B(-ω)]` from kernel values at `±ω`, `ω != 0`.
pub(crate) fn fano_from_kernel(rates: &JunctionRates, omega: f64, a_plus: Complex64, a_minus: Complex64) -> Result<f64> {
    let w = omega.abs();
    let plus = response(rates, a_plus, w)?;
    let minus = response(rates, a_minus, -w)?;
    Ok(1.0 + rates.gamma_r * (plus + minus).re)
}

/// Zero-frequency limit for `A(iω) = a0 + a1 ω + O(ω²)`: the simple poles
/// of `B(ω)` and `B(-ω)` cancel.
pub(crate) fn fano_at_zero(rates: &JunctionRates, a0: Complex64, a1: Complex64) -> f64 {
    let (gl, gr) = (rates.gamma_l, rates.gamma_r);
    let s = gl + gr;
    if a0.is_infinite() {
        // branch point at the origin; limit A → ∞
        return 1.0 - 2.0 * gl * gr / (s * s);
    }
    let p0 = a0 * s + gl * gr;
    let q = Complex64::i() * a1 * s - a0 - s;
    let sum = 2.0 * gl * (a1 / (Complex64::i() * p0) + a0 * q / (p0 * p0));
    1.0 + gr * sum.re
}

/// `1 + Γ_R [B(ω) + B(-ω)]` at a single frequency.
pub fn fano_at(rates: &JunctionRates, reservoir: &Reservoir, omega: f64, convention: KernelConvention) -> Result<f64> {
    rates.validate()?;
    if omega == 0.0 {
        let (a0, a1) = kernel_with_slope(reservoir, 0.0, convention)?;
        return Ok(fano_at_zero(rates, a0, a1));
    }
    let w = omega.abs();
    fano_from_kernel(
        rates,
        w,
        population_kernel(reservoir, w, convention)?,
        population_kernel(reservoir, -w, convention)?,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseResult {
    pub omega: Vec<f64>,
    pub fano: Vec<f64>,
    /// Midpoints of grid cells holding a discontinuity.
    pub jumps: Vec<f64>,
}

const JUMP_FLOOR: f64 = 1e-9;
const BISECTIONS: usize = 40;

/// Cells holding a discontinuity of `f`. Each cell is bisected toward its
/// steeper half; a jump keeps its size while smooth or cusp-like variation
/// shrinks with the cell.
pub fn detect_jumps<F>(x: &[f64], y: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut out = Vec::new();
    for j in 0..y.len().saturating_sub(1) {
        let initial = (y[j + 1] - y[j]).abs();
        if !(initial > JUMP_FLOOR) {
            continue;
        }
        let (mut a, mut b) = (x[j], x[j + 1]);
        let (mut fa, mut fb) = (y[j], y[j + 1]);
        let mut persistent = true;
        for _ in 0..BISECTIONS {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m)?;
            if (fm - fa).abs() >= (fb - fm).abs() {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
            if (fb - fa).abs() < 0.1 * initial {
                persistent = false;
                break;
            }
        }
        if persistent {
            out.push(0.5 * (x[j] + x[j + 1]));
        }
    }
    Ok(out)
}

/// `S/2eI` over `omega` with the frequencies evaluated in parallel.
pub fn noise_spectrum(rates: &JunctionRates, reservoir: &Reservoir, omega: &[f64], convention: KernelConvention) -> Result<NoiseResult> {
    rates.validate()?;
    if let Reservoir::Quadratic(spec) = reservoir {
        spec.validate()?;
    }
    let fano = omega
        .par_iter()
        .map(|&w| fano_at(rates, reservoir, w, convention))
        .collect::<Result<Vec<f64>>>()?;
    let jumps = detect_jumps(omega, &fano, |w| fano_at(rates, reservoir, w, convention))?;
    Ok(NoiseResult { omega: omega.to_vec(), fano, jumps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseMap {
    pub omega: Vec<f64>,
    pub delta: Vec<f64>,
    /// Row per detuning.
    pub fano: Vec<Vec<f64>>,
    /// `(δ, ω)` of detected jumps.
    pub locus: Vec<(f64, f64)>,
}

/// Spectra for a family of reservoirs indexed by detuning.
pub fn noise_map<F>(rates: &JunctionRates, family: F, delta: &[f64], omega: &[f64], convention: KernelConvention) -> Result<NoiseMap>
where
    F: Fn(f64) -> Result<Reservoir> + Sync,
{
    let rows = delta
        .par_iter()
        .map(|&d| noise_spectrum(rates, &family(d)?, omega, convention))
        .collect::<Result<Vec<NoiseResult>>>()?;
    let locus = delta.iter().zip(&rows).flat_map(|(&d, r)| r.jumps.iter().map(move |&w| (d, w))).collect();
    Ok(NoiseMap { omega: omega.to_vec(), delta: delta.to_vec(), fano: rows.into_iter().map(|r| r.fano).collect(), locus })
}
