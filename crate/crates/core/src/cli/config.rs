//! Run configurations: one record per subcommand, parsed from JSON with every
//! field defaulted, then overridden by flags and validated before any work.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use bandedge::band_edge::ExtremumKind;
use bandedge::dynamics::ReservoirSpec;
use bandedge::emission::CouplingModel;
use bandedge::media::{DrudeParams, OuterMedium, WireGeometry};
use bandedge::noise::{JunctionRates, KernelConvention};
use bandedge::phonon::{ElasticSlab, PhononFamily, WavevectorRange, MAX_BRANCHES};
use bandedge::plasmon::{DispersionProblem, LightLine, TraceSettings};
use bandedge::retardation::TwoDotConfig;
use bandedge::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: String,
    pub svg: bool,
}

impl Default for Output {
    fn default() -> Self {
        Self { dir: ".".into(), svg: false }
    }
}

/// `points` values evenly spaced over `[min, max]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) || self.points < 2 {
            return Err(invalid(format!("{name} grid needs finite min < max and at least two points")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points).map(|i| self.min + (self.max - self.min) * i as f64 / last).collect()
    }
}

/// Silver wire in GaN, the material shared by the plasmon subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Wire {
    pub drude: DrudeParams,
    pub outer: OuterMedium,
    pub radius: f64,
    pub light_line: LightLine,
}

impl Default for Wire {
    fn default() -> Self {
        let p = DispersionProblem::silver_in_gan(0.1);
        Self { drude: p.drude, outer: p.outer, radius: 0.1, light_line: p.light_line }
    }
}

impl Wire {
    pub fn problem(&self) -> DispersionProblem {
        DispersionProblem { drude: self.drude, outer: self.outer, geometry: WireGeometry { radius: self.radius }, light_line: self.light_line }
    }

    pub fn validate(&self) -> Result<()> {
        self.drude.validate()?;
        if !(self.outer.eps_o > 0.0) {
            return Err(invalid("eps_o must be positive"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(invalid("radius must be positive"));
        }
        Ok(())
    }
}

/// Wavevector sweep for branch tracing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
    pub tol: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        Self { k_min: 0.1, k_max: 20.0, points: 400, tol: 1e-13 }
    }
}

impl Sweep {
    pub fn settings(&self) -> TraceSettings {
        TraceSettings { tol: self.tol, ..TraceSettings::new(self.k_min, self.k_max, self.points) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_min > 0.0 && self.k_max > self.k_min && self.k_max.is_finite()) || self.points < 2 {
            return Err(invalid("sweep needs 0 < k_min < k_max and at least two points"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid("tol must lie in (0, 1)"));
        }
        Ok(())
    }
}

fn validate_modes(modes: &[u32]) -> Result<()> {
    if modes.is_empty() {
        return Err(invalid("at least one mode order is required"));
    }
    let mut sorted = modes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != modes.len() {
        return Err(invalid("mode orders must be distinct"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionConfig {
    pub wire: Wire,
    pub modes: Vec<u32>,
    pub sweep: Sweep,
    pub output: Output,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self { wire: Wire::default(), modes: vec![0, 1, 2, 3], sweep: Sweep::default(), output: Output::default() }
    }
}

impl DispersionConfig {
    pub fn validate(&self) -> Result<()> {
        self.wire.validate()?;
        validate_modes(&self.modes)?;
        self.sweep.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SeRateConfig {
    pub wire: Wire,
    pub modes: Vec<u32>,
    pub sweep: Sweep,
    pub coupling: CouplingModel,
    /// Emitter frequencies in ω_p units; spans the bound samples when absent.
    pub omega0: Option<Grid>,
    /// Points used when `omega0` is derived from the bound span.
    pub omega0_points: usize,
    pub output: Output,
}

impl Default for SeRateConfig {
    fn default() -> Self {
        Self {
            wire: Wire::default(),
            modes: vec![0, 1, 2, 3],
            sweep: Sweep::default(),
            coupling: CouplingModel::default(),
            omega0: None,
            omega0_points: 2001,
            output: Output::default(),
        }
    }
}

impl SeRateConfig {
    pub fn validate(&self) -> Result<()> {
        self.wire.validate()?;
        validate_modes(&self.modes)?;
        self.sweep.validate()?;
        self.coupling.validate()?;
        if let Some(g) = &self.omega0 {
            g.validate("omega0")?;
        }
        if self.omega0_points < 2 {
            return Err(invalid("omega0_points must be at least two"));
        }
        Ok(())
    }
}

/// Band-edge reservoir parameters in β units, detuning supplied separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Edge {
    pub curvature: f64,
    pub coupling: f64,
    pub gamma: f64,
    pub kind: ExtremumKind,
}

impl Default for Edge {
    fn default() -> Self {
        Self { curvature: 1.0, coupling: 1.0, gamma: 0.0, kind: ExtremumKind::Minimum }
    }
}

impl Edge {
    pub fn spec(&self, delta: f64) -> ReservoirSpec {
        ReservoirSpec { delta, curvature: self.curvature, coupling: self.coupling, gamma: self.gamma, kind: self.kind }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayConfig {
    pub edge: Edge,
    /// One trace per detuning.
    pub deltas: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
    pub output: Output,
}

impl Default for DecayConfig {
    fn default() -> Self {
        Self {
            edge: Edge { gamma: 0.1, ..Edge::default() },
            deltas: vec![0.0, 0.2, 0.4, 0.8],
            t_max: 10.0,
            dt: 0.01,
            output: Output::default(),
        }
    }
}

impl DecayConfig {
    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() {
            return Err(invalid("at least one detuning is required"));
        }
        for &d in &self.deltas {
            self.edge.spec(d).validate()?;
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite() && self.dt > 0.0 && self.dt <= self.t_max) {
            return Err(invalid("time grid needs 0 < dt <= t_max"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Quadratic,
    Numeric,
}

/// Numeric reservoir built from a traced plasmon branch around its first
/// band edge of the requested kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericEdge {
    pub wire: Wire,
    pub mode: u32,
    pub sweep: Sweep,
    /// Half-width of the resampling window in k around the edge.
    pub half_width: f64,
    pub samples: usize,
    /// β in ω_p units.
    pub frequency_scale: f64,
}

impl Default for NumericEdge {
    fn default() -> Self {
        Self { wire: Wire::default(), mode: 1, sweep: Sweep::default(), half_width: 0.5, samples: 2001, frequency_scale: 1e-6 }
    }
}

impl NumericEdge {
    pub fn validate(&self) -> Result<()> {
        self.wire.validate()?;
        self.sweep.validate()?;
        if !(self.half_width > 0.0) || self.samples < 5 || !(self.frequency_scale > 0.0) {
            return Err(invalid("numeric backend needs half_width > 0, samples >= 5, frequency_scale > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub rates: JunctionRates,
    pub delta: f64,
    pub edge: Edge,
    pub convention: KernelConvention,
    pub backend: Backend,
    pub numeric: NumericEdge,
    pub omega: Grid,
    pub output: Output,
}

fn junction() -> JunctionRates {
    JunctionRates { gamma_l: 0.01, gamma_r: 0.1 }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            rates: junction(),
            delta: -0.01,
            edge: Edge::default(),
            convention: KernelConvention::default(),
            backend: Backend::default(),
            numeric: NumericEdge::default(),
            omega: Grid { min: -0.04, max: 0.04, points: 2001 },
            output: Output::default(),
        }
    }
}

fn validate_backend(edge: &Edge, backend: Backend, numeric: &NumericEdge, convention: KernelConvention) -> Result<()> {
    edge.spec(0.0).validate()?;
    if backend == Backend::Numeric {
        numeric.validate()?;
        if convention != KernelConvention::Dissipative {
            return Err(invalid("the numeric backend supports the dissipative kernel only"));
        }
    }
    Ok(())
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<()> {
        self.rates.validate()?;
        if !self.delta.is_finite() {
            return Err(invalid("delta must be finite"));
        }
        validate_backend(&self.edge, self.backend, &self.numeric, self.convention)?;
        self.omega.validate("omega")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseMapConfig {
    pub rates: JunctionRates,
    pub delta: Grid,
    pub edge: Edge,
    pub convention: KernelConvention,
    pub backend: Backend,
    pub numeric: NumericEdge,
    pub omega: Grid,
    pub output: Output,
}

impl Default for NoiseMapConfig {
    fn default() -> Self {
        let grid = Grid { min: -0.05, max: 0.05, points: 201 };
        Self {
            rates: junction(),
            delta: grid,
            edge: Edge::default(),
            convention: KernelConvention::default(),
            backend: Backend::default(),
            numeric: NumericEdge::default(),
            omega: grid,
            output: Output::default(),
        }
    }
}

impl NoiseMapConfig {
    pub fn validate(&self) -> Result<()> {
        self.rates.validate()?;
        validate_backend(&self.edge, self.backend, &self.numeric, self.convention)?;
        self.delta.validate("delta")?;
        self.omega.validate("omega")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetardConfig {
    pub dots: TwoDotConfig,
    pub rates: JunctionRates,
    pub omega: Grid,
    pub output: Output,
}

impl Default for RetardConfig {
    fn default() -> Self {
        Self {
            dots: TwoDotConfig::with_delay(1.0, 2.0 * PI, 100.0),
            rates: JunctionRates { gamma_l: 0.5, gamma_r: 0.5 },
            omega: Grid { min: -4.0, max: 4.0, points: 4001 },
            output: Output::default(),
        }
    }
}

impl RetardConfig {
    pub fn validate(&self) -> Result<()> {
        self.dots.validate()?;
        self.rates.validate()?;
        self.omega.validate("omega")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhononConfig {
    pub slab: ElasticSlab,
    pub families: Vec<PhononFamily>,
    pub branches: usize,
    pub range: WavevectorRange,
    pub output: Output,
}

impl Default for PhononConfig {
    fn default() -> Self {
        Self {
            slab: ElasticSlab::dimensionless(2.0),
            families: vec![PhononFamily::Dilatational, PhononFamily::Flexural],
            branches: 6,
            range: WavevectorRange { q_max: 12.0, points: 1201 },
            output: Output::default(),
        }
    }
}

impl PhononConfig {
    pub fn validate(&self) -> Result<()> {
        self.slab.validate()?;
        if self.families.is_empty() {
            return Err(invalid("at least one phonon family is required"));
        }
        if self.branches == 0 || self.branches > MAX_BRANCHES {
            return Err(invalid(format!("branches must lie in 1..={MAX_BRANCHES}")));
        }
        if !(self.range.q_max > 0.0 && self.range.q_max.is_finite()) || self.range.points < 2 {
            return Err(invalid("wavevector range needs q_max > 0 and at least two points"));
        }
        Ok(())
    }
}
