//! Two dots sharing a one-dimensional plasmon channel with travel time
//! `τ = r/v`. Dot 1 starts excited; each passage of the field between the
//! dots adds a delayed term with phase `i e^{iθ}`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{fano_at_zero, fano_from_kernel, JunctionRates, NoiseResult};
use crate::numerics::chirp::uniform_fourier_sum;
use crate::numerics::quad::gauss_legendre;
use crate::numerics::TimeGrid;

/// Whether `gamma_0` is the amplitude decay constant or the population rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateConvention {
    #[default]
    Amplitude,
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoDotConfig {
    pub gamma_0: f64,
    /// Dot separation.
    pub r: f64,
    /// Plasmon group velocity.
    pub v: f64,
    /// Propagation phase `k₀ r`; derived from `omega0_over_gamma0` when absent.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub omega0_over_gamma0: Option<f64>,
    #[serde(default)]
    pub rate_convention: RateConvention,
    /// `false` removes the second dot.
    #[serde(default = "yes")]
    pub coupled: bool,
}

fn yes() -> bool {
    true
}

impl TwoDotConfig {
    /// Separation chosen so that `γ₀ τ` equals `delay_product`.
    pub fn with_delay(gamma_0: f64, delay_product: f64, omega0_over_gamma0: f64) -> Self {
        Self {
            gamma_0,
            r: delay_product / gamma_0,
            v: 1.0,
            theta: None,
            omega0_over_gamma0: Some(omega0_over_gamma0),
            rate_convention: RateConvention::Amplitude,
            coupled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_0 > 0.0 && self.r > 0.0 && self.v > 0.0) {
            return Err(Error::InvalidInput("gamma_0, r and v must be positive".into()));
        }
        if self.theta.is_none() && self.omega0_over_gamma0.is_none() {
            return Err(Error::InvalidInput("either theta or omega0_over_gamma0 is required".into()));
        }
        Ok(())
    }

    pub fn tau_d(&self) -> f64 {
        self.r / self.v
    }

    pub fn amplitude_rate(&self) -> f64 {
        match self.rate_convention {
            RateConvention::Amplitude => self.gamma_0,
            RateConvention::Population => 0.5 * self.gamma_0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or_else(|| self.omega0_over_gamma0.unwrap_or(0.0) * self.gamma_0 * self.tau_d())
    }

    /// The delayed-coupling treatment assumes `θ ≥ 3`.
    pub fn in_validity_regime(&self) -> bool {
        self.theta() >= 3.0
    }

    fn hop(&self) -> Complex64 {
        Complex64::i() * Complex64::from_polar(1.0, self.theta())
    }
}

/// Series evaluator with cached `ln m!`.
struct Series {
    rate: f64,
    tau: f64,
    hop: Complex64,
    coupled: bool,
    log_factorial: Vec<f64>,
}

impl Series {
    fn new(config: &TwoDotConfig, m_max: usize) -> Self {
        let mut log_factorial = vec![0.0; m_max + 1];
        for m in 1..=m_max {
            log_factorial[m] = log_factorial[m - 1] + (m as f64).ln();
        }
        Self { rate: config.amplitude_rate(), tau: config.tau_d(), hop: config.hop(), coupled: config.coupled, log_factorial }
    }

    fn m_max(&self) -> usize {
        self.log_factorial.len() - 1
    }

    fn term(&self, m: usize, t: f64) -> Complex64 {
        let u = t - m as f64 * self.tau;
        if u < 0.0 || (m > 0 && u == 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let x = self.rate * u;
        let log_mag = if m == 0 { -x } else { m as f64 * x.ln() - self.log_factorial[m] - x };
        self.hop.powu(m as u32) * log_mag.exp()
    }

    /// `(b1, b2, |last included term|)`.
    fn at(&self, t: f64) -> (Complex64, Complex64, f64) {
        let mut b = [Complex64::new(0.0, 0.0); 2];
        let top = if self.coupled { self.m_max() } else { 0 };
        // terms with m τ > t vanish
        let reach = ((t / self.tau).floor() as usize).min(top);
        for m in 0..=reach {
            b[m % 2] += self.term(m, t);
        }
        (b[0], b[1], self.term(top, t).norm())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetardedAmplitudes {
    pub grid: TimeGrid,
    pub b1: Vec<Complex64>,
    pub b2: Vec<Complex64>,
    pub survival: Vec<f64>,
}

pub const TRUNCATION_LIMIT: f64 = 1e-12;

/// Delay-series amplitudes on `grid`, keeping terms up to `m_max`.
pub fn retarded_amplitudes_series(config: &TwoDotConfig, grid: &TimeGrid, m_max: usize) -> Result<RetardedAmplitudes> {
    config.validate()?;
    let series = Series::new(config, m_max);
    let rows: Vec<(Complex64, Complex64, f64)> = grid.times().par_iter().map(|&t| series.at(t)).collect();
    let mut worst: f64 = 0.0;
    for (b1, b2, last) in &rows {
        let scale = (b1.norm() + b2.norm()).max(f64::MIN_POSITIVE);
        if config.coupled && m_max > 0 {
            worst = worst.max(last / scale);
        }
    }
    if worst > TRUNCATION_LIMIT {
        return Err(Error::TruncationTooSmall { ratio: worst });
    }
    let b1: Vec<Complex64> = rows.iter().map(|r| r.0).collect();
    let b2: Vec<Complex64> = rows.iter().map(|r| r.1).collect();
    let survival = b1.iter().zip(&b2).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).collect();
    Ok(RetardedAmplitudes { grid: *grid, b1, b2, survival })
}

/// Smallest series order covering `t_max`.
pub fn required_order(config: &TwoDotConfig, t_max: f64) -> usize {
    (t_max / config.tau_d()).ceil() as usize + 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceAmplitudes {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
}

/// Closed-form transforms of the symmetric and antisymmetric amplitudes.
pub fn retarded_amplitudes_laplace(config: &TwoDotConfig, s: Complex64) -> Result<LaplaceAmplitudes> {
    config.validate()?;
    if !(s.re > 0.0) {
        return Err(Error::BranchViolation { re: s.re });
    }
    let g = config.amplitude_rate();
    let (c_plus, c_minus) = if config.coupled {
        let feedback = g * config.hop() * (-s * config.tau_d()).exp();
        (1.0 / (s + g - feedback), 1.0 / (s + g + feedback))
    } else {
        let c = 1.0 / (s + g);
        (c, c)
    };
    Ok(LaplaceAmplitudes { c_plus, c_minus, b1: 0.5 * (c_plus + c_minus), b2: 0.5 * (c_plus - c_minus) })
}

const GL_ORDER: usize = 16;
const TAIL_STOP: f64 = 1e-13;
pub const TAIL_LIMIT: f64 = 1e-8;

/// Gauss-Legendre panels aligned to multiples of the delay, extended until
/// `size(t)` stays below the stop level over two delay intervals.
struct PanelRule {
    t: Vec<f64>,
    w: Vec<f64>,
}

impl PanelRule {
    fn build(tau: f64, h_max: f64, horizon: f64, size: impl Fn(f64) -> f64) -> Result<Self> {
        let (x, wx) = gauss_legendre(GL_ORDER);
        let block = tau.min(horizon);
        let per_block = (block / h_max).ceil().max(1.0) as usize;
        let h = block / per_block as f64;
        let mut t = Vec::new();
        let mut w = Vec::new();
        let mut start = 0.0;
        let mut quiet = 0;
        loop {
            let mut peak: f64 = 0.0;
            for p in 0..per_block {
                let a = start + p as f64 * h;
                for (xi, wi) in x.iter().zip(&wx) {
                    let ti = a + 0.5 * h * (xi + 1.0);
                    t.push(ti);
                    w.push(0.5 * h * wi);
                    peak = peak.max(size(ti));
                }
            }
            start += block;
            quiet = if peak < TAIL_STOP { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
            if start > horizon {
                if peak > TAIL_LIMIT {
                    return Err(Error::TransformNonconvergence { tail: peak });
                }
                break;
            }
        }
        Ok(Self { t, w })
    }

    fn apply(&self, values: &[Complex64], s: Complex64) -> Complex64 {
        self.t.iter().zip(&self.w).zip(values).map(|((t, w), v)| w * (-s * t).exp() * v).sum()
    }
}

/// Largest gap between the numerically transformed series and the closed
/// form over points with `Re s > 0`.
pub fn series_laplace_disagreement(config: &TwoDotConfig, points: &[Complex64]) -> Result<f64> {
    config.validate()?;
    let sigma = points.iter().map(|s| s.re).fold(f64::INFINITY, f64::min);
    if !(sigma > 0.0) {
        return Err(Error::BranchViolation { re: sigma });
    }
    let rate = config.amplitude_rate();
    let omega_max = points.iter().map(|s| s.im.abs()).fold(rate, f64::max);
    // the transform weight e^{-σt} bounds how far the series is needed
    let horizon = (40.0 / sigma).min(2000.0 / rate);
    let series = Series::new(config, required_order(config, horizon + config.tau_d()));
    let rule = PanelRule::build(config.tau_d(), (0.25 / rate).min(2.0 / omega_max), horizon, |t| {
        let (a, b, _) = series.at(t);
        (a.norm() + b.norm()) * (-sigma * t).exp()
    })?;
    let vals: Vec<(Complex64, Complex64)> = rule
        .t
        .par_iter()
        .map(|&t| {
            let (a, b, _) = series.at(t);
            (a, b)
        })
        .collect();
    let b1: Vec<Complex64> = vals.iter().map(|v| v.0).collect();
    let b2: Vec<Complex64> = vals.iter().map(|v| v.1).collect();
    let mut worst: f64 = 0.0;
    for &s in points {
        let exact = retarded_amplitudes_laplace(config, s)?;
        worst = worst.max((rule.apply(&b1, s) - exact.b1).norm()).max((rule.apply(&b2, s) - exact.b2).norm());
    }
    Ok(worst)
}

/// Steps per delay interval are a multiple of four (Boole's rule per block).
const MIN_STEPS_PER_DELAY: usize = 8;
const STEP_TARGET: f64 = 0.025;
/// Longest time, in units of the inverse amplitude rate, the survival is followed.
pub const SURVIVAL_HORIZON: f64 = 2e5;

/// `C(t)` of `C' = -γ C + κ C(t - τ)`, `C(0) = 1`, `C(t < 0) = 0`, sampled
/// at `h = τ / n`. Each step integrates the delayed term exactly against a
/// cubic through four delayed samples from the same delay interval.
struct DelayStepper {
    decay: Complex64,
    weights: [[Complex64; 4]; 3],
    n: usize,
}

impl DelayStepper {
    fn new(rate: f64, h: f64, n: usize) -> Self {
        let (x, wx) = gauss_legendre(GL_ORDER);
        let mut weights = [[Complex64::new(0.0, 0.0); 4]; 3];
        // stencil offsets relative to the interval start: {-1,0,1,2}, {0,1,2,3}, {-2,-1,0,1}
        for (p, first) in [-1.0f64, 0.0, -2.0].iter().enumerate() {
            let nodes: Vec<f64> = (0..4).map(|i| first + i as f64).collect();
            for i in 0..4 {
                let mut acc = 0.0;
                for (xi, wi) in x.iter().zip(&wx) {
                    let u = 0.5 * (xi + 1.0);
                    let mut li = 1.0;
                    for k in 0..4 {
                        if k != i {
                            li *= (u - nodes[k]) / (nodes[i] - nodes[k]);
                        }
                    }
                    acc += 0.5 * wi * (-rate * h * (1.0 - u)).exp() * li;
                }
                weights[p][i] = Complex64::new(acc * h, 0.0);
            }
        }
        Self { decay: Complex64::new((-rate * h).exp(), 0.0), weights, n }
    }

    /// Delayed-term increment for the step from `j` to `j + 1`.
    fn delayed(&self, history: &[Complex64], j: usize) -> Complex64 {
        if j < self.n {
            return Complex64::new(0.0, 0.0);
        }
        let d = j - self.n;
        let block = d / self.n * self.n;
        let (pattern, first) = if d == block {
            (1, d)
        } else if d + 2 > block + self.n {
            (2, d - 2)
        } else {
            (0, d - 1)
        };
        (0..4).map(|i| self.weights[pattern][i] * history[first + i]).sum()
    }
}

/// Transform of the survival probability `|b1|² + |b2|²`, built from the
/// delay equation for `C± = b1 ± b2`.
pub struct SurvivalTransform {
    h: f64,
    n: usize,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl SurvivalTransform {
    pub fn new(config: &TwoDotConfig, omega_max: f64) -> Result<Self> {
        config.validate()?;
        let rate = config.amplitude_rate();
        let tau = config.tau_d();
        let h_target = (STEP_TARGET / rate).min(0.5 / omega_max.max(1e-300));
        let n = ((tau / h_target).ceil() as usize).max(MIN_STEPS_PER_DELAY).next_multiple_of(4);
        let h = tau / n as f64;
        let stepper = DelayStepper::new(rate, h, n);
        let kappa = rate * config.hop();
        let couplings: Vec<Complex64> = if config.coupled { vec![kappa, -kappa] } else { vec![Complex64::new(0.0, 0.0)] };
        let horizon_steps = (SURVIVAL_HORIZON / rate / h) as usize;
        let mut traces: Vec<Vec<Complex64>> = couplings.iter().map(|_| vec![Complex64::new(1.0, 0.0)]).collect();
        let mut values = vec![1.0];
        let mut quiet_blocks = 0;
        let mut block_peak: f64 = 0.0;
        let mut j = 0;
        loop {
            let mut n_next = 0.0;
            for (trace, k) in traces.iter_mut().zip(&couplings) {
                let next = stepper.decay * trace[j] + k * stepper.delayed(trace, j);
                trace.push(next);
                n_next += next.norm_sqr();
            }
            let n_next = n_next / couplings.len() as f64;
            values.push(n_next);
            block_peak = block_peak.max(n_next);
            j += 1;
            if j % n == 0 {
                quiet_blocks = if block_peak < TAIL_STOP { quiet_blocks + 1 } else { 0 };
                if quiet_blocks >= 2 {
                    break;
                }
                if j >= horizon_steps {
                    if block_peak > TAIL_LIMIT {
                        return Err(Error::TransformNonconvergence { tail: block_peak });
                    }
                    break;
                }
                block_peak = 0.0;
            }
        }
        // Boole's rule on each group of four steps
        let mut weights = vec![0.0; values.len()];
        for g in (0..values.len() - 1).step_by(4) {
            for (i, c) in [7.0, 32.0, 12.0, 32.0, 7.0].iter().enumerate() {
                weights[g + i] += 2.0 * h * c / 45.0;
            }
        }
        Ok(Self { h, n, weights, values })
    }

    /// Survival samples and their spacing.
    pub fn samples(&self) -> (f64, &[f64]) {
        (self.h, &self.values)
    }

    pub fn steps_per_delay(&self) -> usize {
        self.n
    }

    pub fn at(&self, s: Complex64) -> Complex64 {
        let ratio = (-s * self.h).exp();
        let mut phase = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, v) in self.weights.iter().zip(&self.values) {
            acc += phase * (w * v);
            phase *= ratio;
        }
        acc
    }

    /// `ñ(iω)` over a frequency grid; uniform grids use chirp-z sums.
    pub fn on_axis(&self, omega: &[f64]) -> Vec<Complex64> {
        let m = omega.len();
        let uniform = m > 2 && {
            let dw = (omega[m - 1] - omega[0]) / (m - 1) as f64;
            dw != 0.0 && omega.iter().enumerate().all(|(k, w)| (w - omega[0] - k as f64 * dw).abs() <= 1e-12 * (1.0 + w.abs()))
        };
        if uniform {
            let dw = (omega[m - 1] - omega[0]) / (m - 1) as f64;
            let x: Vec<f64> = self.weights.iter().zip(&self.values).map(|(w, v)| w * v).collect();
            uniform_fourier_sum(&x, self.h, omega[0], dw, m)
        } else {
            omega.par_iter().map(|&w| self.at(Complex64::new(0.0, w))).collect()
        }
    }

    /// `∫ t n(t) dt`.
    pub fn first_moment(&self) -> f64 {
        self.weights.iter().zip(&self.values).enumerate().map(|(j, (w, v))| j as f64 * self.h * w * v).sum()
    }

    /// Effective radiative kernel `1/ñ(s) - s`.
    pub fn kernel(&self, s: Complex64) -> Complex64 {
        1.0 / self.at(s) - s
    }
}

/// `n_axis` is `ñ(iω)`; the conjugate gives `ñ(-iω)` since the survival is real.
fn retarded_fano(rates: &JunctionRates, tr: &SurvivalTransform, omega: f64, n_axis: Complex64) -> Result<f64> {
    if omega == 0.0 {
        let n0 = tr.at(Complex64::new(0.0, 0.0));
        let a0 = 1.0 / n0;
        // d/dω of 1/ñ(iω) - iω at zero
        let a1 = Complex64::i() * tr.first_moment() / (n0 * n0) - Complex64::i();
        return Ok(fano_at_zero(rates, a0, a1));
    }
    let n = if omega > 0.0 { n_axis } else { n_axis.conj() };
    let w = Complex64::new(0.0, omega.abs());
    fano_from_kernel(rates, w.im, 1.0 / n - w, 1.0 / n.conj() + w)
}

/// `S/2eI` with the single-dot kernel replaced by the retarded one.
pub fn retarded_noise_spectrum(config: &TwoDotConfig, rates: &JunctionRates, omega: &[f64]) -> Result<NoiseResult> {
    rates.validate()?;
    if omega.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidInput("frequency grid must be finite".into()));
    }
    let omega_max = omega.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let tr = SurvivalTransform::new(config, omega_max)?;
    let axis = tr.on_axis(omega);
    let fano = omega.par_iter().zip(axis).map(|(&w, n)| retarded_fano(rates, &tr, w, n)).collect::<Result<Vec<f64>>>()?;
    // the kernel transforms a decaying survival, so it is smooth in ω
    Ok(NoiseResult { omega: omega.to_vec(), fano, jumps: vec![] })
}

/// Oversampling of the zero-padded periodogram.
const PERIODOGRAM_PADDING: usize = 16;

/// Spacing in ω of the dominant ripple of `values`, from the strongest
/// Fourier period up to `max_period`. Needs a uniform grid.
pub fn ripple_spacing(omega: &[f64], values: &[f64], max_period: f64) -> Option<f64> {
    let m = omega.len();
    if m < 8 || values.len() != m {
        return None;
    }
    let range = omega[m - 1] - omega[0];
    let dw = range / (m - 1) as f64;
    if !(range > 0.0) {
        return None;
    }
    let size = (PERIODOGRAM_PADDING * m).next_power_of_two();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(size, Complex64::new(0.0, 0.0));
    rustfft::FftPlanner::new().plan_fft_forward(size).process(&mut buf);
    // bin j is the period 2π j / (size dω); at least two ripples must fit
    let period = |j: usize| 2.0 * std::f64::consts::PI * j as f64 / (size as f64 * dw);
    let lo = 4.0 * std::f64::consts::PI / range;
    let best = (1..size / 2)
        .filter(|&j| period(j) >= lo && period(j) <= max_period)
        .max_by(|&i, &j| buf[i].norm_sqr().total_cmp(&buf[j].norm_sqr()))?;
    Some(2.0 * std::f64::consts::PI / period(best))
}

/// Markov reference: constant kernel equal to the decoupled population rate.
pub fn markov_noise_spectrum(config: &TwoDotConfig, rates: &JunctionRates, omega: &[f64]) -> Result<NoiseResult> {
    rates.validate()?;
    let a = Complex64::new(2.0 * config.amplitude_rate(), 0.0);
    let fano = omega
        .iter()
        .map(|&w| if w == 0.0 { Ok(fano_at_zero(rates, a, Complex64::new(0.0, 0.0))) } else { fano_from_kernel(rates, w, a, a) })
        .collect::<Result<Vec<f64>>>()?;
    Ok(NoiseResult { omega: omega.to_vec(), fano, jumps: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(product: f64) -> TwoDotConfig {
        TwoDotConfig::with_delay(1.0, product, 100.3)
    }

    #[test]
    fn single_term_before_the_first_return() {
        let c = cfg(2.0);
        let g = TimeGrid::new(0.01, 400).unwrap();
        let a = retarded_amplitudes_series(&c, &g, required_order(&c, g.t_max())).unwrap();
        for i in 0..g.count {
            let t = g.t(i);
            if t < 2.0 {
                assert_eq!(a.b2[i], Complex64::new(0.0, 0.0));
            }
            if t < 4.0 {
                assert!((a.b1[i] - Complex64::new((-t).exp(), 0.0)).norm() < 1e-15);
            }
        }
        assert_eq!(a.b1[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn truncation_is_reported() {
        let c = cfg(1.0);
        let g = TimeGrid::new(0.05, 201).unwrap();
        assert!(matches!(retarded_amplitudes_series(&c, &g, 3), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn second_order_coefficient() {
        // the m = 2 term of C+ is X² γ² (t - 2τ)² e^{-γ(t-2τ)} / 2
        let c = cfg(0.7);
        let s = Series::new(&c, 4);
        let t = 2.0;
        let u = t - 1.4;
        let want = c.hop() * c.hop() * 0.5 * u * u * (-u).exp();
        assert!((s.term(2, t) - want).norm() < 1e-15);
    }

    #[test]
    fn initial_values_of_the_transforms() {
        let c = cfg(2.0);
        let s = Complex64::new(1e9, 0.0);
        let l = retarded_amplitudes_laplace(&c, s).unwrap();
        assert!((s * l.b1 - 1.0).norm() < 1e-8);
        assert!((s * l.b2).norm() < 1e-8);
    }

    #[test]
    fn decoupled_transform_is_single_exponential() {
        let c = TwoDotConfig { coupled: false, ..cfg(2.0) };
        let s = Complex64::new(0.3, 1.2);
        let l = retarded_amplitudes_laplace(&c, s).unwrap();
        assert_eq!(l.c_plus, 1.0 / (s + 1.0));
        assert_eq!(l.b2, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn stepper_matches_the_series() {
        let c = TwoDotConfig { theta: Some(40.0 * std::f64::consts::PI + 0.5), ..cfg(1.3) };
        let tr = SurvivalTransform::new(&c, 1.0).unwrap();
        let (h, n) = tr.samples();
        let series = Series::new(&c, 40);
        for j in (0..n.len()).step_by(37).take_while(|&j| j as f64 * h < 40.0) {
            let (a, b, _) = series.at(j as f64 * h);
            assert!((n[j] - (a.norm_sqr() + b.norm_sqr())).abs() < 1e-7, "t = {}", j as f64 * h);
        }
    }

    #[test]
    fn theta_follows_the_delay() {
        let c = cfg(2.0 * std::f64::consts::PI);
        assert!((c.theta() - 100.3 * 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(c.in_validity_regime());
        assert!(TwoDotConfig { theta: Some(1.0), ..c }.theta() == 1.0);
    }
}
