//! C ABI over the bandedge library.
//!
//! Every fallible call returns a [`BandedgeStatus`]; on failure the message is
//! available from [`bandedge_last_error`] on the same thread. Traced branch
//! sets live behind opaque handles that the caller releases with the matching
//! `_free` function. Array outputs go into caller buffers; passing a null
//! buffer or a short capacity reports the required length through `written`.
//! Enum arguments must hold one of their declared values.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bandedge::band_edge::{BandEdgePoint, ExtremumKind};
use bandedge::dynamics::{decay_trace, ReservoirSpec};
use bandedge::media::{DrudeParams, OuterMedium, WireGeometry};
use bandedge::noise::{noise_spectrum, JunctionRates, KernelConvention, Reservoir};
use bandedge::numerics::TimeGrid;
use bandedge::phonon::{find_phonon_band_edges, trace_phonon_branches, ElasticSlab, PhononBranch, PhononFamily, WavevectorRange};
use bandedge::plasmon::{find_band_edges, trace_modes, DispersionProblem, LightLine, ModeBranch, TraceSettings};
use bandedge::retardation::{retarded_noise_spectrum, RateConvention, TwoDotConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandedgeStatus {
    Ok = 0,
    InvalidInput = 1,
    NullPointer = 2,
    BufferTooSmall = 3,
    SolverFailure = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandedgeExtremum {
    Minimum = 0,
    Maximum = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandedgeFamily {
    Dilatational = 0,
    Flexural = 1,
}

/// Drude wire in a dielectric. `tau <= 0` or NaN means a lossless metal.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeWire {
    pub eps_inf: f64,
    pub omega_p_ev: f64,
    pub tau: f64,
    pub eps_o: f64,
    /// Radius in c/ω_p.
    pub radius: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeSweep {
    pub k_min: f64,
    pub k_max: f64,
    pub points: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BandedgeModeSample {
    pub k: f64,
    pub re_omega: f64,
    pub im_omega: f64,
    pub bound: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeEdge {
    pub branch: u32,
    pub k_c: f64,
    pub omega_c: f64,
    pub curvature: f64,
    pub kind: BandedgeExtremum,
}

/// Quadratic band-edge reservoir in β units.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeReservoir {
    pub delta: f64,
    pub curvature: f64,
    pub coupling: f64,
    pub gamma: f64,
    pub kind: BandedgeExtremum,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeRates {
    pub gamma_l: f64,
    pub gamma_r: f64,
}

/// Two dots on a wire; `gamma_0` is the amplitude decay constant.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeTwoDot {
    pub gamma_0: f64,
    pub r: f64,
    pub v: f64,
    pub theta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BandedgeSlab {
    pub w: f64,
    pub c_l: f64,
    pub c_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BandedgePhononSample {
    pub q_parallel: f64,
    pub omega: f64,
}

/// Traced plasmon branches.
pub struct BandedgeDispersion {
    branches: Vec<ModeBranch>,
}

/// Traced slab branches of one family.
pub struct BandedgePhonon {
    branches: Vec<PhononBranch>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: BandedgeStatus,
    message: String,
}

impl Failure {
    fn new(status: BandedgeStatus, message: impl Into<String>) -> Self {
        Self { status, message: message.into() }
    }
}

impl From<bandedge::Error> for Failure {
    fn from(e: bandedge::Error) -> Self {
        let status = if e.is_solver_failure() { BandedgeStatus::SolverFailure } else { BandedgeStatus::InvalidInput };
        Self::new(status, e.to_string())
    }
}

fn remember(message: Option<String>) {
    let text = message.map(|m| CString::new(m.replace('\0', " ")).expect("interior nul bytes were replaced"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BandedgeStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let detail = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".into());
        Err(Failure::new(BandedgeStatus::Panic, format!("panic: {detail}")))
    });
    match outcome {
        Ok(()) => {
            remember(None);
            BandedgeStatus::Ok
        }
        Err(f) => {
            remember(Some(f.message));
            f.status
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::new(BandedgeStatus::NullPointer, format!("{name} is null"))
}

unsafe fn reference<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn input<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// Copies `items` into `buf` when it fits; always reports the full length.
unsafe fn fill<T: Copy>(items: &[T], buf: *mut T, capacity: usize, written: *mut usize) -> Result<(), Failure> {
    let written = written.as_mut().ok_or_else(|| null("written"))?;
    *written = items.len();
    if buf.is_null() || capacity < items.len() {
        return Err(Failure::new(
            BandedgeStatus::BufferTooSmall,
            format!("buffer holds {capacity} entries, {} needed", items.len()),
        ));
    }
    std::slice::from_raw_parts_mut(buf, items.len()).copy_from_slice(items);
    Ok(())
}

fn kind(k: BandedgeExtremum) -> ExtremumKind {
    match k {
        BandedgeExtremum::Minimum => ExtremumKind::Minimum,
        BandedgeExtremum::Maximum => ExtremumKind::Maximum,
    }
}

fn edge(e: &BandEdgePoint) -> BandedgeEdge {
    let kind = match e.kind {
        ExtremumKind::Minimum => BandedgeExtremum::Minimum,
        ExtremumKind::Maximum => BandedgeExtremum::Maximum,
    };
    BandedgeEdge { branch: e.n, k_c: e.k_c, omega_c: e.omega_c, curvature: e.curvature, kind }
}

fn spec(r: &BandedgeReservoir) -> ReservoirSpec {
    ReservoirSpec { delta: r.delta, curvature: r.curvature, coupling: r.coupling, gamma: r.gamma, kind: kind(r.kind) }
}

fn rates(r: &BandedgeRates) -> JunctionRates {
    JunctionRates { gamma_l: r.gamma_l, gamma_r: r.gamma_r }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn bandedge_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn bandedge_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Traces the plasmon branches of the listed angular orders.
///
/// # Safety
/// `wire`, `sweep` and `out` must be valid pointers; `modes` must hold
/// `mode_count` entries. On success `*out` receives a handle to release with
/// [`bandedge_dispersion_free`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_dispersion_trace(
    wire: *const BandedgeWire,
    modes: *const u32,
    mode_count: usize,
    sweep: *const BandedgeSweep,
    out: *mut *mut BandedgeDispersion,
) -> BandedgeStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let w = reference(wire, "wire")?;
        let s = reference(sweep, "sweep")?;
        let modes = input(modes, mode_count, "modes")?;
        let tau = (w.tau > 0.0).then_some(w.tau);
        let drude = DrudeParams { eps_inf: w.eps_inf, omega_p_ev: w.omega_p_ev, tau };
        drude.validate()?;
        if !(w.radius > 0.0 && w.eps_o > 0.0) || s.points < 2 || !(s.k_max > s.k_min && s.k_min > 0.0) {
            return Err(Failure::new(BandedgeStatus::InvalidInput, "wire or sweep out of range"));
        }
        let problem = DispersionProblem {
            drude,
            outer: OuterMedium { eps_o: w.eps_o },
            geometry: WireGeometry { radius: w.radius },
            light_line: LightLine::Vacuum,
        };
        let branches = trace_modes(modes, &TraceSettings::new(s.k_min, s.k_max, s.points), &problem)?;
        *out = Box::into_raw(Box::new(BandedgeDispersion { branches }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`bandedge_dispersion_trace`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_dispersion_branch_count(handle: *const BandedgeDispersion) -> usize {
    handle.as_ref().map_or(0, |h| h.branches.len())
}

unsafe fn mode_branch<'a>(handle: *const BandedgeDispersion, branch: usize) -> Result<&'a ModeBranch, Failure> {
    let h = reference(handle, "handle")?;
    h.branches
        .get(branch)
        .ok_or_else(|| Failure::new(BandedgeStatus::InvalidInput, format!("branch {branch} out of range")))
}

/// Copies the samples of one branch, ordered by increasing k.
///
/// # Safety
/// `handle` must be live, `written` valid, and `buf` null or writable for
/// `capacity` entries.
#[no_mangle]
pub unsafe extern "C" fn bandedge_dispersion_samples(
    handle: *const BandedgeDispersion,
    branch: usize,
    buf: *mut BandedgeModeSample,
    capacity: usize,
    written: *mut usize,
) -> BandedgeStatus {
    guard(|| {
        let b = mode_branch(handle, branch)?;
        let samples: Vec<BandedgeModeSample> = b
            .samples
            .iter()
            .map(|s| BandedgeModeSample { k: s.k, re_omega: s.omega.re, im_omega: s.omega.im, bound: u8::from(s.bound) })
            .collect();
        fill(&samples, buf, capacity, written)
    })
}

/// Band edges of one branch.
///
/// # Safety
/// As for [`bandedge_dispersion_samples`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_dispersion_band_edges(
    handle: *const BandedgeDispersion,
    branch: usize,
    buf: *mut BandedgeEdge,
    capacity: usize,
    written: *mut usize,
) -> BandedgeStatus {
    guard(|| {
        let edges: Vec<BandedgeEdge> = find_band_edges(mode_branch(handle, branch)?)?.iter().map(edge).collect();
        fill(&edges, buf, capacity, written)
    })
}

/// # Safety
/// `handle` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn bandedge_dispersion_free(handle: *mut BandedgeDispersion) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Exciton amplitude `b_e(t)` on `t = 0, dt, ..., (count - 1) dt`, with the
/// sup-norm gap between the two independent solvers in `cross_check`.
///
/// # Safety
/// `reservoir` must be valid; each output buffer must hold `count` entries;
/// `cross_check` may be null.
#[no_mangle]
pub unsafe extern "C" fn bandedge_decay(
    reservoir: *const BandedgeReservoir,
    dt: f64,
    count: usize,
    re_b: *mut f64,
    im_b: *mut f64,
    population: *mut f64,
    cross_check: *mut f64,
) -> BandedgeStatus {
    guard(|| {
        let r = reference(reservoir, "reservoir")?;
        let (re, im, pop) = (output(re_b, count, "re_b")?, output(im_b, count, "im_b")?, output(population, count, "population")?);
        let trace = decay_trace(&spec(r), &TimeGrid::new(dt, count)?)?;
        for (i, b) in trace.b_e.iter().enumerate() {
            re[i] = b.re;
            im[i] = b.im;
        }
        pop.copy_from_slice(&trace.population);
        if let Some(c) = cross_check.as_mut() {
            *c = trace.cross_check;
        }
        Ok(())
    })
}

/// Fano factor `S/2eI` at each frequency with the dissipative kernel.
///
/// # Safety
/// `rates` and `reservoir` must be valid; `omega` and `fano` must hold
/// `count` entries.
#[no_mangle]
pub unsafe extern "C" fn bandedge_noise_spectrum(
    rates: *const BandedgeRates,
    reservoir: *const BandedgeReservoir,
    omega: *const f64,
    count: usize,
    fano: *mut f64,
) -> BandedgeStatus {
    guard(|| {
        let j = self::rates(reference(rates, "rates")?);
        let r = Reservoir::Quadratic(spec(reference(reservoir, "reservoir")?));
        let w = input(omega, count, "omega")?;
        let out = output(fano, count, "fano")?;
        out.copy_from_slice(&noise_spectrum(&j, &r, w, KernelConvention::Dissipative)?.fano);
        Ok(())
    })
}

/// Fano factor with a second dot coupled through a delayed plasmon.
///
/// # Safety
/// As for [`bandedge_noise_spectrum`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_retarded_noise_spectrum(
    dots: *const BandedgeTwoDot,
    rates: *const BandedgeRates,
    omega: *const f64,
    count: usize,
    fano: *mut f64,
) -> BandedgeStatus {
    guard(|| {
        let d = reference(dots, "dots")?;
        let config = TwoDotConfig {
            gamma_0: d.gamma_0,
            r: d.r,
            v: d.v,
            theta: Some(d.theta),
            omega0_over_gamma0: None,
            rate_convention: RateConvention::Amplitude,
            coupled: true,
        };
        config.validate()?;
        let j = self::rates(reference(rates, "rates")?);
        let w = input(omega, count, "omega")?;
        let out = output(fano, count, "fano")?;
        out.copy_from_slice(&retarded_noise_spectrum(&config, &j, w)?.fano);
        Ok(())
    })
}

/// Traces the lowest `branch_count` branches of one family on
/// `points` in-plane wavevectors spanning `[0, q_max]`.
///
/// # Safety
/// `slab` and `out` must be valid. On success `*out` receives a handle to
/// release with [`bandedge_phonon_free`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_phonon_trace(
    slab: *const BandedgeSlab,
    family: BandedgeFamily,
    branch_count: usize,
    q_max: f64,
    points: usize,
    out: *mut *mut BandedgePhonon,
) -> BandedgeStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let s = reference(slab, "slab")?;
        let slab = ElasticSlab { w: s.w, c_l: s.c_l, c_t: s.c_t };
        let family = match family {
            BandedgeFamily::Dilatational => PhononFamily::Dilatational,
            BandedgeFamily::Flexural => PhononFamily::Flexural,
        };
        let branches = trace_phonon_branches(&slab, family, branch_count, &WavevectorRange { q_max, points })?;
        *out = Box::into_raw(Box::new(BandedgePhonon { branches }));
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a live handle from [`bandedge_phonon_trace`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_phonon_branch_count(handle: *const BandedgePhonon) -> usize {
    handle.as_ref().map_or(0, |h| h.branches.len())
}

unsafe fn phonon_branch<'a>(handle: *const BandedgePhonon, branch: usize) -> Result<&'a PhononBranch, Failure> {
    let h = reference(handle, "handle")?;
    h.branches
        .get(branch)
        .ok_or_else(|| Failure::new(BandedgeStatus::InvalidInput, format!("branch {branch} out of range")))
}

/// # Safety
/// As for [`bandedge_dispersion_samples`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_phonon_samples(
    handle: *const BandedgePhonon,
    branch: usize,
    buf: *mut BandedgePhononSample,
    capacity: usize,
    written: *mut usize,
) -> BandedgeStatus {
    guard(|| {
        let b = phonon_branch(handle, branch)?;
        let samples: Vec<BandedgePhononSample> =
            b.samples.iter().map(|s| BandedgePhononSample { q_parallel: s.q_parallel, omega: s.omega }).collect();
        fill(&samples, buf, capacity, written)
    })
}

/// # Safety
/// As for [`bandedge_dispersion_samples`].
#[no_mangle]
pub unsafe extern "C" fn bandedge_phonon_band_edges(
    handle: *const BandedgePhonon,
    branch: usize,
    buf: *mut BandedgeEdge,
    capacity: usize,
    written: *mut usize,
) -> BandedgeStatus {
    guard(|| {
        let edges: Vec<BandedgeEdge> = find_phonon_band_edges(phonon_branch(handle, branch)?)?.iter().map(edge).collect();
        fill(&edges, buf, capacity, written)
    })
}

/// # Safety
/// `handle` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn bandedge_phonon_free(handle: *mut BandedgePhonon) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
