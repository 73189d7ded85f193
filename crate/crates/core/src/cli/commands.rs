//! Computation behind each subcommand. Every function returns the file
//! contents it wants written; nothing touches the filesystem here.

use rayon::prelude::*;

use bandedge::dynamics::ReservoirSpec;
use bandedge::noise::{noise_map, noise_spectrum, NumericReservoir, Reservoir};
use bandedge::numerics::TimeGrid;
use bandedge::phonon::{find_phonon_band_edges, trace_phonon_branches, PhononBranch};
use bandedge::plasmon::{find_band_edges, trace_modes, ModeBranch};
use bandedge::retardation::{markov_noise_spectrum, retarded_noise_spectrum};
use bandedge::{dynamics, emission, Error, Result};

use super::config::*;
use super::csv::{Field, Table};
use super::svg::{heatmap, line_plot, Series};

#[derive(Debug, Default)]
pub struct Bundle {
    /// File name and contents, written in order.
    pub files: Vec<(String, String)>,
    /// Human-readable findings printed after the files are written.
    pub notes: Vec<String>,
}

impl Bundle {
    fn add(&mut self, name: impl Into<String>, text: String) {
        self.files.push((name.into(), text));
    }
}

fn branch_series(branches: &[ModeBranch]) -> Vec<Series> {
    branches
        .iter()
        .map(|b| Series { label: format!("n = {}", b.n), points: b.samples.iter().map(|s| (s.k, s.omega.re)).collect() })
        .collect()
}

fn edge_notes(branches: &[ModeBranch], notes: &mut Vec<String>) -> Result<()> {
    for b in branches {
        for e in find_band_edges(b)? {
            notes.push(format!("band edge n = {}: {:?} at k = {:.6}, omega = {:.6}, curvature = {:.6}", e.n, e.kind, e.k_c, e.omega_c, e.curvature));
        }
    }
    Ok(())
}

pub fn dispersion(cfg: &DispersionConfig) -> Result<Bundle> {
    let branches = trace_modes(&cfg.modes, &cfg.sweep.settings(), &cfg.wire.problem())?;
    let mut out = Bundle::default();
    let mut t = Table::new(&["n", "k_z", "re_omega", "im_omega", "bound"]);
    for b in &branches {
        for s in &b.samples {
            t.row(&[Field::Int(b.n.into()), Field::Float(s.k), Field::Float(s.omega.re), Field::Float(s.omega.im), Field::Flag(s.bound)]);
        }
    }
    out.add("dispersion.csv", t.finish());
    if cfg.output.svg {
        out.add("dispersion.svg", line_plot(&branch_series(&branches), "k_z (ω_p/c)", "Re ω (ω_p)"));
    }
    edge_notes(&branches, &mut out.notes)?;
    Ok(out)
}

/// Range of bound frequencies, nudged inward so every point is interior.
fn bound_span(branches: &[ModeBranch]) -> Result<(f64, f64)> {
    let w = branches.iter().flat_map(|b| b.samples.iter().filter(|s| s.bound).map(|s| s.omega.re));
    let (lo, hi) = w.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !(hi > lo) {
        return Err(Error::InvalidInput("traced branches have no bound frequency span".into()));
    }
    let pad = 1e-9 * (hi - lo);
    Ok((lo + pad, hi - pad))
}

/// Also returns the emitter grid actually used, for the sidecar.
pub fn se_rate(cfg: &SeRateConfig) -> Result<(Bundle, Grid)> {
    let branches = trace_modes(&cfg.modes, &cfg.sweep.settings(), &cfg.wire.problem())?;
    let grid = match cfg.omega0 {
        Some(g) => g,
        None => {
            let (min, max) = bound_span(&branches)?;
            Grid { min, max, points: cfg.omega0_points }
        }
    };
    let profile = emission::se_rate_profile(&branches, &cfg.coupling, &grid.values())?;
    let mut out = Bundle::default();
    let mut t = Table::new(&["omega0", "rate", "is_singular"]);
    for ((w, r), s) in profile.omega0.iter().zip(&profile.rate).zip(&profile.is_singular) {
        t.row(&[Field::Float(*w), Field::Float(*r), Field::Flag(*s)]);
    }
    out.add("se-rate.csv", t.finish());
    if cfg.output.svg {
        let points = profile.omega0.iter().zip(&profile.rate).map(|(&w, &r)| (w, r.log10())).collect();
        out.add("se-rate.svg", line_plot(&[Series { label: "rate".into(), points }], "ω0 (ω_p)", "log10 rate"));
    }
    for p in &profile.singular_points {
        out.notes.push(format!("divergence near omega0 = {p:.8}"));
    }
    edge_notes(&branches, &mut out.notes)?;
    Ok((out, grid))
}

pub fn decay(cfg: &DecayConfig) -> Result<Bundle> {
    let grid = TimeGrid::spanning(cfg.t_max, cfg.dt)?;
    let specs: Vec<_> = cfg.deltas.iter().map(|&d| cfg.edge.spec(d)).collect();
    let traces = dynamics::decay_traces(&specs, &grid)?;
    let mut out = Bundle::default();
    let mut series = Vec::new();
    for (i, tr) in traces.iter().enumerate() {
        let mut t = Table::new(&["t", "re_b", "im_b", "population"]);
        for (j, (b, p)) in tr.b_e.iter().zip(&tr.population).enumerate() {
            t.row(&[Field::Float(grid.t(j)), Field::Float(b.re), Field::Float(b.im), Field::Float(*p)]);
        }
        out.add(format!("decay_{i}.csv"), t.finish());
        out.notes.push(format!("delta = {}: methods agree to {:.2e}", cfg.deltas[i], tr.cross_check));
        series.push(Series {
            label: format!("δ = {}", cfg.deltas[i]),
            points: tr.population.iter().enumerate().map(|(j, &p)| (grid.t(j), p)).collect(),
        });
    }
    if cfg.output.svg {
        out.add("decay.svg", line_plot(&series, "t (1/β)", "|b_e|²"));
    }
    Ok(out)
}

/// Reservoir with detuning zero; callers set the detuning they need.
fn reservoir(edge: &Edge, backend: Backend, numeric: &NumericEdge) -> Result<Reservoir> {
    let spec = edge.spec(0.0);
    match backend {
        Backend::Quadratic => Ok(Reservoir::Quadratic(spec)),
        Backend::Numeric => {
            let branch = trace_modes(&[numeric.mode], &numeric.sweep.settings(), &numeric.wire.problem())?.remove(0);
            let found = find_band_edges(&branch)?;
            let Some(e) = found.iter().find(|e| e.kind == edge.kind) else {
                return Err(Error::Domain(format!("mode {} has no {:?} band edge in the sweep", numeric.mode, edge.kind)));
            };
            let r = NumericReservoir::from_branch(&branch, e, numeric.half_width, numeric.samples, numeric.frequency_scale, &spec)?;
            Ok(Reservoir::Numeric(r))
        }
    }
}

fn detuned(base: &Reservoir, delta: f64) -> Reservoir {
    match base {
        Reservoir::Quadratic(s) => Reservoir::Quadratic(ReservoirSpec { delta, ..*s }),
        Reservoir::Numeric(n) => {
            let mut r = n.clone();
            r.delta = delta;
            Reservoir::Numeric(r)
        }
    }
}

pub fn noise(cfg: &NoiseConfig) -> Result<Bundle> {
    let base = reservoir(&cfg.edge, cfg.backend, &cfg.numeric)?;
    let r = noise_spectrum(&cfg.rates, &detuned(&base, cfg.delta), &cfg.omega.values(), cfg.convention)?;
    let mut out = Bundle::default();
    let mut t = Table::new(&["omega", "fano"]);
    for (w, f) in r.omega.iter().zip(&r.fano) {
        t.row(&[Field::Float(*w), Field::Float(*f)]);
    }
    out.add("noise.csv", t.finish());
    if cfg.output.svg {
        let points = r.omega.iter().copied().zip(r.fano.iter().copied()).collect();
        out.add("noise.svg", line_plot(&[Series { label: format!("δ = {}", cfg.delta), points }], "ω (β)", "S/2eI"));
    }
    for j in &r.jumps {
        out.notes.push(format!("jump near omega = {j:.8}"));
    }
    Ok(out)
}

/// End points of `δ = ω` and `δ = -ω` inside the plotted box.
fn diagonal_guides(x: (f64, f64), y: (f64, f64)) -> Vec<((f64, f64), (f64, f64))> {
    let mut out = Vec::new();
    let (a, b) = (x.0.max(y.0), x.1.min(y.1));
    if b > a {
        out.push(((a, a), (b, b)));
    }
    let (a, b) = (x.0.max(-y.1), x.1.min(-y.0));
    if b > a {
        out.push(((a, -a), (b, -b)));
    }
    out
}

pub fn noise_map_run(cfg: &NoiseMapConfig) -> Result<Bundle> {
    let base = reservoir(&cfg.edge, cfg.backend, &cfg.numeric)?;
    let (delta, omega) = (cfg.delta.values(), cfg.omega.values());
    let map = noise_map(&cfg.rates, |d| Ok(detuned(&base, d)), &delta, &omega, cfg.convention)?;
    let mut out = Bundle::default();
    let mut t = Table::new(&["omega", "delta", "fano"]);
    for (d, row) in map.delta.iter().zip(&map.fano) {
        for (w, f) in map.omega.iter().zip(row) {
            t.row(&[Field::Float(*w), Field::Float(*d), Field::Float(*f)]);
        }
    }
    out.add("noise-map.csv", t.finish());
    if cfg.output.svg {
        let guides = diagonal_guides((cfg.omega.min, cfg.omega.max), (cfg.delta.min, cfg.delta.max));
        out.add("noise-map.svg", heatmap(&map.omega, &map.delta, &map.fano, &guides, "ω (β)", "δ (β)"));
    }
    out.notes.push(format!("{} discontinuity cells detected", map.locus.len()));
    Ok(out)
}

pub fn retard(cfg: &RetardConfig) -> Result<Bundle> {
    let omega = cfg.omega.values();
    let (r, m) = rayon::join(
        || retarded_noise_spectrum(&cfg.dots, &cfg.rates, &omega),
        || markov_noise_spectrum(&cfg.dots, &cfg.rates, &omega),
    );
    let (r, m) = (r?, m?);
    let d = &cfg.dots;
    let meta = format!("gamma_0_tau_d={:.16e},theta={:.16e}", d.gamma_0 * d.tau_d(), d.theta());
    let mut t = Table::new(&["omega", "fano"]).with_preamble(&meta);
    for (w, f) in r.omega.iter().zip(&r.fano) {
        t.row(&[Field::Float(*w), Field::Float(*f)]);
    }
    let mut out = Bundle::default();
    out.add("retard.csv", t.finish());
    if cfg.output.svg {
        let pair = |v: &[f64]| omega.iter().copied().zip(v.iter().copied()).collect();
        let series = [Series { label: "retarded".into(), points: pair(&r.fano) }, Series { label: "Markov".into(), points: pair(&m.fano) }];
        out.add("retard.svg", line_plot(&series, "ω (γ₀)", "S/2eI"));
    }
    if !d.in_validity_regime() {
        out.notes.push(format!("theta = {:.4} is below the delayed-coupling validity threshold of 3", d.theta()));
    }
    Ok(out)
}

pub fn phonon(cfg: &PhononConfig) -> Result<Bundle> {
    let families: Vec<Vec<PhononBranch>> = cfg
        .families
        .par_iter()
        .map(|&f| trace_phonon_branches(&cfg.slab, f, cfg.branches, &cfg.range))
        .collect::<Result<_>>()?;
    let (w, c_t) = (cfg.slab.w, cfg.slab.c_t);
    let mut out = Bundle::default();
    let mut t = Table::new(&["family", "branch_index", "q_parallel_w", "omega_w_over_ct"]);
    let mut series = Vec::new();
    for b in families.iter().flatten() {
        for s in &b.samples {
            t.row(&[Field::Text(b.family.name()), Field::Int(b.n as u64), Field::Float(s.q_parallel * w), Field::Float(s.omega * w / c_t)]);
        }
        series.push(Series {
            label: format!("{} {}", b.family.name(), b.n),
            points: b.samples.iter().map(|s| (s.q_parallel * w, s.omega * w / c_t)).collect(),
        });
        for e in find_phonon_band_edges(b)? {
            out.notes.push(format!(
                "{} branch {}: {:?} at q w = {:.6}, omega w / c_t = {:.6}",
                b.family.name(),
                b.n,
                e.kind,
                e.k_c * w,
                e.omega_c * w / c_t
            ));
        }
    }
    out.add("phonon.csv", t.finish());
    if cfg.output.svg {
        out.add("phonon.svg", line_plot(&series, "q∥ w", "ω w / c_t"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guides_stay_inside_the_box() {
        let g = diagonal_guides((-1.0, 1.0), (-0.5, 0.5));
        assert_eq!(g, vec![((-0.5, -0.5), (0.5, 0.5)), ((-0.5, 0.5), (0.5, -0.5))]);
    }
}
