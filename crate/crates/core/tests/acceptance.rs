//! Acceptance criteria, one PASS/FAIL line each. Failing criteria are
//! reported, not hidden; pass `--strict` to turn any FAIL into a non-zero
//! exit status.

mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use bandedge::band_edge::ExtremumKind;
use bandedge::dynamics::{decay_traces, ReservoirSpec};
use bandedge::emission::{edge_log_slope, se_rate_profile, CouplingModel};
use bandedge::noise::{fano_at, noise_map, JunctionRates, KernelConvention, NumericReservoir, Reservoir};
use bandedge::numerics::TimeGrid;
use bandedge::phonon::*;
use bandedge::plasmon::{find_band_edges, trace_modes, DispersionProblem, ModeBranch, TraceSettings};
use bandedge::retardation::*;

type Check = Result<(bool, String), String>;

fn fmt_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn silver_wire_branches() -> Result<Vec<ModeBranch>, String> {
    trace_modes(&[0, 1, 2, 3], &TraceSettings::new(0.1, 20.0, 400), &DispersionProblem::silver_in_gan(0.1)).map_err(fmt_err)
}

fn verdict(parts: &[(&str, bool)]) -> bool {
    parts.iter().all(|p| p.1)
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn dispersion_structure() -> Check {
    let start = Instant::now();
    let branches = silver_wire_branches()?;
    let secs = start.elapsed().as_secs_f64();
    let zero = &branches[0];
    let monotone = zero.samples.windows(2).all(|w| w[1].omega.re > w[0].omega.re);
    let limit = (9.6f64 / 14.9).sqrt();
    let end = zero.samples.last().unwrap();
    let a = monotone && (end.omega.re - limit).abs() < 0.01 * limit;
    let one = &branches[1];
    let minima: Vec<_> = find_band_edges(one)
        .map_err(fmt_err)?
        .into_iter()
        .filter(|e| e.kind == ExtremumKind::Minimum)
        .filter(|e| one.samples.iter().min_by(|x, y| (x.k - e.k_c).abs().total_cmp(&(y.k - e.k_c).abs())).is_some_and(|s| s.bound))
        .collect();
    let b = !minima.is_empty();
    let worst = branches.iter().flat_map(|br| br.samples.iter().map(|s| s.residual)).fold(0.0, f64::max);
    let c = worst < 1e-12;
    let t = secs < 60.0;
    Ok((
        verdict(&[("a", a), ("b", b), ("c", c), ("t", t)]),
        format!(
            "(a) {} n=0 monotone={monotone}, Ω(K={:.0})={:.4} vs {limit:.4}; (b) {} n=1 bound minima {}; (c) {} max residual {worst:.1e}; trace {secs:.1} s",
            mark(a),
            end.k,
            end.omega.re,
            mark(b),
            minima.len(),
            mark(c)
        ),
    ))
}

fn se_rate() -> Check {
    let start = Instant::now();
    let branches = silver_wire_branches()?;
    let bound = branches.iter().flat_map(|b| b.samples.iter().filter(|s| s.bound).map(|s| s.omega.re));
    let (lo, hi) = bound.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), w| (a.min(w), b.max(w)));
    let points = 4001;
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| lo + 1e-9 + (hi - lo - 2e-9) * i as f64 / (points - 1) as f64).collect();
    let coupling = CouplingModel::default();
    let profile = se_rate_profile(&branches, &coupling, &grid).map_err(fmt_err)?;
    let mut edges = Vec::new();
    for b in &branches {
        edges.extend(find_band_edges(b).map_err(fmt_err)?);
    }
    let interior: Vec<_> = edges.iter().filter(|e| e.omega_c > lo + step && e.omega_c < hi - step).collect();
    let matched = interior.iter().all(|e| profile.singular_points.iter().any(|p| (p - e.omega_c).abs() <= step));
    let explained = profile.singular_points.iter().all(|p| interior.iter().any(|e| (p - e.omega_c).abs() <= step));
    let detunings: Vec<f64> = (0..9).map(|i| 1e-7 * 10f64.powf(i as f64 / 4.0)).collect();
    let mut slopes = Vec::new();
    for e in &interior {
        let owner: Vec<ModeBranch> = branches.iter().filter(|b| b.n == e.n).cloned().collect();
        slopes.push(edge_log_slope(&owner, &coupling, e, &detunings).map_err(fmt_err)?);
    }
    let slope_ok = !slopes.is_empty() && slopes.iter().all(|s| (s + 0.5).abs() <= 0.02);
    let secs = start.elapsed().as_secs_f64();
    let ok = matched && explained && !interior.is_empty() && slope_ok && secs < 30.0;
    let slope_text: Vec<String> = slopes.iter().map(|s| format!("{s:.4}")).collect();
    Ok((
        ok,
        format!(
            "{} edges, {} divergences, all within one cell ({:.1e}): {}; log-log slopes [{}]; {secs:.1} s",
            interior.len(),
            profile.singular_points.len(),
            step,
            mark(matched && explained),
            slope_text.join(", ")
        ),
    ))
}

fn decay() -> Check {
    let start = Instant::now();
    let grid = TimeGrid::new(0.01, 1001).map_err(fmt_err)?;
    let deltas = [0.0, 0.2, 0.4, 0.8];
    let mut specs: Vec<ReservoirSpec> = deltas.iter().map(|&d| ReservoirSpec::minimum(d, 0.1)).collect();
    specs.push(ReservoirSpec::minimum(0.0, 0.0));
    let traces = decay_traces(&specs, &grid).map_err(fmt_err)?;
    let rises = |p: &[f64]| p.windows(2).any(|w| w[1] > w[0] + 1e-12);
    let a = traces[1..4].iter().all(|t| rises(&t.population));
    let finals: Vec<f64> = traces[..4].iter().map(|t| *t.population.last().unwrap()).collect();
    let b = finals.windows(2).all(|w| w[1] < w[0]);
    let plateau: Vec<f64> = traces[4].population[800..].to_vec();
    let spread = plateau.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - plateau.iter().cloned().fold(f64::INFINITY, f64::min);
    let c = spread < 1e-3;
    let gap = traces.iter().map(|t| t.cross_check).fold(0.0, f64::max);
    let d = gap < 1e-5;
    let secs = start.elapsed().as_secs_f64();
    let p: Vec<String> = finals.iter().map(|x| format!("{x:.4}")).collect();
    Ok((
        verdict(&[("a", a), ("b", b), ("c", c), ("d", d)]) && secs < 60.0,
        format!(
            "(a) {} oscillation at δ=0.2,0.4,0.8; (b) {} p(10) for δ=0,0.2,0.4,0.8: [{}]; (c) {} plateau spread over [8,10] {spread:.2e}; (d) {} solver gap {gap:.1e}; {secs:.1} s",
            mark(a),
            mark(b),
            p.join(", "),
            mark(c),
            mark(d)
        ),
    ))
}

fn noise_spectrum_window() -> Check {
    let start = Instant::now();
    let rates = JunctionRates { gamma_l: 0.01, gamma_r: 0.1 };
    let step = 2e-5;
    let grid: Vec<f64> = (0..=2000).map(|i| -0.02 + step * i as f64).collect();
    let conv = KernelConvention::Dissipative;
    let spectrum = |d: f64| bandedge::noise::noise_spectrum(&rates, &Reservoir::Quadratic(ReservoirSpec::minimum(d, 0.0)), &grid, conv);
    let below = spectrum(-0.01).map_err(fmt_err)?;
    let above = spectrum(0.01).map_err(fmt_err)?;
    // open interval between the jumps
    let inside: Vec<usize> = (0..grid.len()).filter(|&i| grid[i].abs() < 0.01 - 0.5 * step).collect();
    let plateau = inside.iter().map(|&i| (below.fano[i] - 1.0).abs()).fold(0.0, f64::max);
    let sub = inside.iter().map(|&i| above.fano[i]).fold(f64::NEG_INFINITY, f64::max);
    let jumps_ok = [&below, &above].iter().all(|r| {
        r.jumps.len() == 2 && r.jumps.iter().all(|j| (j.abs() - 0.01).abs() <= step) && r.jumps[0] < 0.0 && r.jumps[1] > 0.0
    });
    let mut markov_gap: f64 = 0.0;
    for (gl, g, gr) in [(0.01, 0.3, 0.1), (1.0, 1.0, 1.0), (0.2, 5.0, 0.03)] {
        let r = Reservoir::Quadratic(ReservoirSpec { coupling: 0.0, ..ReservoirSpec::minimum(0.0, g) });
        let j = JunctionRates { gamma_l: gl, gamma_r: gr };
        for w in [0.0, 0.05, 0.3, 2.0] {
            for c in [KernelConvention::Dissipative, KernelConvention::AsPrinted] {
                let f = fano_at(&j, &r, w, c).map_err(fmt_err)?;
                markov_gap = markov_gap.max((f - common::cycle_fano(gl, g, gr, w)).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = plateau < 1e-3 && sub < 1.0 && jumps_ok && markov_gap < 1e-10 && secs < 30.0;
    Ok((
        ok,
        format!(
            "δ=-0.01 plateau |S/2eI-1| ≤ {plateau:.1e}; δ=+0.01 max {sub:.4}; jumps {:?} / {:?}: {}; Markov closed form gap {markov_gap:.1e}; {secs:.1} s",
            below.jumps,
            above.jumps,
            mark(jumps_ok)
        ),
    ))
}

fn noise_map_locus() -> Check {
    let start = Instant::now();
    let rates = JunctionRates { gamma_l: 0.01, gamma_r: 0.1 };
    let cell = 5e-4;
    let grid: Vec<f64> = (0..201).map(|i| cell * (i as f64 - 100.0)).collect();
    let conv = KernelConvention::Dissipative;

    let scale = 1e-6;
    let problem = DispersionProblem::silver_in_gan(0.1);
    let branch = trace_modes(&[1], &TraceSettings::new(0.1, 20.0, 400), &problem).map_err(fmt_err)?.remove(0);
    let edges = find_band_edges(&branch).map_err(fmt_err)?;
    let edge = edges.iter().find(|e| e.kind == ExtremumKind::Minimum).ok_or("no minimum on n = 1")?;
    let base = ReservoirSpec::minimum(0.0, 0.0);
    let numeric = NumericReservoir::from_branch(&branch, edge, 0.5, 2001, scale, &base).map_err(fmt_err)?;
    let quadratic = ReservoirSpec { curvature: edge.curvature / scale, ..base };

    let quad_map = noise_map(&rates, |d| Ok(Reservoir::Quadratic(ReservoirSpec { delta: d, ..quadratic })), &grid, &grid, conv).map_err(fmt_err)?;
    let num_map = noise_map(
        &rates,
        |d| {
            let mut r = numeric.clone();
            r.delta = d;
            Ok(Reservoir::Numeric(r))
        },
        &grid,
        &grid,
        conv,
    )
    .map_err(fmt_err)?;
    let off = quad_map.locus.iter().filter(|(d, w)| (d.abs() - w.abs()).abs() > cell + 1e-12).count();
    let mut worst: f64 = 0.0;
    for (j, d) in grid.iter().enumerate() {
        for (i, w) in grid.iter().enumerate() {
            // cells touching the discontinuity lines are compared through the locus instead
            if (d.abs() - w.abs()).abs() <= cell + 1e-12 {
                continue;
            }
            let (a, b) = (quad_map.fano[j][i], num_map.fano[j][i]);
            worst = worst.max((a - b).abs() / b.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = !quad_map.locus.is_empty() && off == 0 && worst < 0.05 && secs < 600.0;
    Ok((
        ok,
        format!(
            "{} locus cells, {off} off δ=±ω by more than one cell; numeric vs quadratic backends max relative gap {worst:.1e}; {secs:.1} s",
            quad_map.locus.len()
        ),
    ))
}

fn retardation() -> Check {
    let start = Instant::now();
    let products = [2.0 * PI, 4.0 * PI];
    let ratios = [100.0, 100.2, 100.3];
    let rates = JunctionRates { gamma_l: 0.5, gamma_r: 0.5 };
    let points: Vec<num_complex::Complex64> = [0.3, 1.0, 2.5, -1.7].iter().map(|&w| num_complex::Complex64::new(0.2, w)).collect();

    let mut series_gap: f64 = 0.0;
    let mut causal = true;
    for &p in &products {
        for &q in &ratios {
            let c = TwoDotConfig::with_delay(1.0, p, q);
            series_gap = series_gap.max(series_laplace_disagreement(&c, &points).map_err(fmt_err)?);
            let grid = TimeGrid::new(0.01, 3001).map_err(fmt_err)?;
            let a = retarded_amplitudes_series(&c, &grid, required_order(&c, grid.t_max())).map_err(fmt_err)?;
            causal &= (0..grid.count).filter(|&i| grid.t(i) < c.tau_d()).all(|i| a.b2[i] == num_complex::Complex64::new(0.0, 0.0));
        }
    }

    let omega: Vec<f64> = (0..=4000).map(|i| -4.0 + 0.002 * i as f64).collect();
    let mut c_ok = true;
    let mut rows = Vec::new();
    for &p in &products {
        for &q in &ratios {
            let cfg = TwoDotConfig::with_delay(1.0, p, q);
            let r = retarded_noise_spectrum(&cfg, &rates, &omega).map_err(fmt_err)?;
            let m = markov_noise_spectrum(&cfg, &rates, &omega).map_err(fmt_err)?;
            let d: Vec<f64> = r.fano.iter().zip(&m.fano).map(|(a, b)| a - b).collect();
            let sup = d.iter().fold(0.0f64, |s, x| s.max(x.abs()));
            let want = 2.0 * PI * cfg.v / cfg.r;
            let spacing = ripple_spacing(&omega, &d, f64::INFINITY).unwrap_or(f64::NAN);
            let ok = sup > 0.01 && (spacing - want).abs() <= 0.1 * want;
            c_ok &= ok;
            rows.push(format!("γτ={:.2} ω0/γ0={q}: sup {sup:.3}, spacing {spacing:.3}/{want:.3}", p));
        }
    }

    let decoupled = TwoDotConfig { coupled: false, ..TwoDotConfig::with_delay(1.0, 2.0 * PI, 100.0) };
    let coarse: Vec<f64> = (0..=160).map(|i| -4.0 + 0.05 * i as f64).collect();
    let r = retarded_noise_spectrum(&decoupled, &rates, &coarse).map_err(fmt_err)?;
    let markov = Reservoir::Quadratic(ReservoirSpec { coupling: 0.0, ..ReservoirSpec::minimum(0.0, 2.0 * decoupled.amplitude_rate()) });
    let mut d_gap: f64 = 0.0;
    for (w, f) in coarse.iter().zip(&r.fano) {
        d_gap = d_gap.max((f - fano_at(&rates, &markov, *w, KernelConvention::Dissipative).map_err(fmt_err)?).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let a = series_gap < 1e-8;
    let d = d_gap < 1e-8;
    Ok((
        a && causal && c_ok && d && secs < 60.0,
        format!(
            "(a) {} series/Laplace gap {series_gap:.1e}; (b) {} causality; (c) {} {}; (d) {} decoupled gap {d_gap:.1e}; {secs:.1} s",
            mark(a),
            mark(causal),
            mark(c_ok),
            rows.join("; "),
            mark(d)
        ),
    ))
}

/// Zone-centre frequencies from the decoupled standing-wave conditions with
/// `h = 1/2`, `c_t = 1`, `c_l = 2`, including the rigid mode at zero.
fn enumerated_cutoffs(family: PhononFamily, count: usize) -> Vec<f64> {
    let mut v = vec![0.0];
    for m in 0..count {
        let (t, l) = match family {
            PhononFamily::Dilatational => (2.0 * PI * (m + 1) as f64, 2.0 * PI * (2 * m + 1) as f64),
            PhononFamily::Flexural => (PI * (2 * m + 1) as f64, 4.0 * PI * (m + 1) as f64),
        };
        v.push(t);
        v.push(l);
    }
    v.sort_by(f64::total_cmp);
    v.truncate(count);
    v
}

fn phonon_slab() -> Check {
    let start = Instant::now();
    let slab = ElasticSlab::dimensionless(2.0);
    let range = WavevectorRange { q_max: 12.0, points: 1201 };
    let (dil, flex) = trace_both_families(&slab, 6, &range).map_err(fmt_err)?;
    let mut cutoff_gap: f64 = 0.0;
    let mut compat: f64 = 0.0;
    let mut minima = Vec::new();
    for (family, branches) in [(PhononFamily::Dilatational, &dil), (PhononFamily::Flexural, &flex)] {
        for (b, w) in branches.iter().zip(enumerated_cutoffs(family, 6)) {
            cutoff_gap = cutoff_gap.max((b.samples[0].omega - w).abs());
            compat = compat.max(b.compatibility_residual());
        }
        let mut count = 0;
        for b in branches {
            count += find_phonon_band_edges(b).map_err(fmt_err)?.iter().filter(|e| e.kind == ExtremumKind::Minimum && e.k_c > 0.0).count();
        }
        minima.push(count);
    }
    let d_exp = onset_exponent(&dil[0], 0.1).ok_or("dilatational onset fit failed")?;
    let f_exp = onset_exponent(&flex[0], 0.1).ok_or("flexural onset fit failed")?;
    let secs = start.elapsed().as_secs_f64();
    let a = cutoff_gap < 1e-12;
    let b = (f_exp - 2.0).abs() <= 0.05 && (d_exp - 1.0).abs() <= 0.02;
    let c = minima.iter().all(|&m| m > 0);
    let d = compat < 1e-10;
    Ok((
        verdict(&[("a", a), ("b", b), ("c", c), ("d", d)]) && secs < 60.0,
        format!(
            "(a) {} cutoff gap {cutoff_gap:.1e}; (b) {} onset exponents flexural {f_exp:.4}, dilatational {d_exp:.4}; (c) {} interior minima dilatational {}, flexural {}; (d) {} compatibility {compat:.1e}; {secs:.1} s",
            mark(a),
            mark(b),
            mark(c),
            minima[0],
            minima[1],
            mark(d)
        ),
    ))
}

fn run_cli(args: &[&str], out: &Path) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_bandedge")).args(args).arg("--out").arg(out).output().map_err(fmt_err)?;
    if o.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr).trim()))
    }
}

fn csv_files(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(fmt_err)? {
        let p = e.map_err(fmt_err)?.path();
        if p.extension().is_some_and(|x| x == "csv") {
            out.push((p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).map_err(fmt_err)?));
        }
    }
    out.sort();
    Ok(out)
}

fn determinism(suite_start: Instant) -> Check {
    let commands = ["dispersion", "se-rate", "decay", "noise", "noise-map", "retard", "phonon"];
    let mut same = Vec::new();
    for c in commands {
        let (first, replay) = (tempfile::tempdir().map_err(fmt_err)?, tempfile::tempdir().map_err(fmt_err)?);
        run_cli(&[c], first.path())?;
        let sidecar = first.path().join(format!("{c}.json"));
        run_cli(&["replay", sidecar.to_str().unwrap()], replay.path())?;
        let (a, b) = (csv_files(first.path())?, csv_files(replay.path())?);
        same.push((c, !a.is_empty() && a == b));
    }
    let total = suite_start.elapsed().as_secs_f64();
    let all = same.iter().all(|s| s.1);
    let failed: Vec<&str> = same.iter().filter(|s| !s.1).map(|s| s.0).collect();
    Ok((
        all && total < 900.0,
        format!("{} of {} subcommands replay byte-identically{}; suite {total:.1} s", same.len() - failed.len(), same.len(), if failed.is_empty() { String::new() } else { format!(" (differs: {})", failed.join(", ")) }),
    ))
}

fn main() {
    let strict = std::env::args().any(|a| a == "--strict");
    let suite = Instant::now();
    let criteria: [(&str, &dyn Fn() -> Check); 8] = [
        ("1 dispersion structure", &dispersion_structure),
        ("2 emission-rate profile", &se_rate),
        ("3 non-Markovian decay", &decay),
        ("4 noise spectrum", &noise_spectrum_window),
        ("5 noise map", &noise_map_locus),
        ("6 retardation", &retardation),
        ("7 phonon slab", &phonon_slab),
        ("8 determinism", &|| determinism(suite)),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!("criterion {name}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failures);
    if strict && failures > 0 {
        std::process::exit(1);
    }
}
