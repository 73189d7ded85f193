use std::sync::OnceLock;

use bandedge::band_edge::ExtremumKind;
use bandedge::plasmon::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn problem() -> DispersionProblem {
    DispersionProblem::silver_in_gan(0.1)
}

fn branch(n: u32) -> &'static ModeBranch {
    static CELLS: [OnceLock<ModeBranch>; 2] = [OnceLock::new(), OnceLock::new()];
    CELLS[n as usize].get_or_init(|| {
        let p = problem();
        let seed = bound_seeds(n, 20.0, &p).unwrap()[0];
        trace_branch(n, seed, &TraceSettings::new(0.1, 20.0, 400), &p).unwrap()
    })
}

#[test]
fn axisymmetric_residual_is_the_bracket_product() {
    let p = problem();
    for (k, w) in [(0.3, Complex64::new(0.5, -0.1)), (5.0, Complex64::new(0.71, 0.0)), (12.0, Complex64::new(0.9, 0.2))] {
        let parts = residual_parts(0, k, w, &p).unwrap();
        assert_eq!(dispersion_residual(0, k, w, &p).unwrap(), parts.bracket_product);
        assert_eq!(parts.coupling, Complex64::new(0.0, 0.0));
    }
}

#[test]
fn axisymmetric_root_at_moderate_wavevector() {
    let p = problem();
    let seed = bound_seeds(0, 5.0, &p).unwrap()[0];
    assert!(normalized_residual(0, 5.0, seed, &p).unwrap().norm() < 1e-12);
    assert!(seed.im.abs() < 1e-14);
    assert!(seed.re > 0.4 && seed.re < 0.8027);
}

#[test]
fn axisymmetric_branch_is_monotone() {
    let b = branch(0);
    assert!(b.samples.windows(2).all(|w| w[1].omega.re >= w[0].omega.re));
    assert!(b.samples.windows(2).all(|w| w[1].k > w[0].k));
    assert!(b.discontinuities.is_empty());
}

#[test]
fn every_root_is_accurate_and_consistent() {
    let p = problem();
    for b in [branch(0), branch(1)] {
        for s in &b.samples {
            assert!(s.residual < 1e-12, "k = {} residual {}", s.k, s.residual);
            let (ki, ko) = transverse_wavevectors(s.k, s.omega, &p).unwrap();
            assert_eq!((ki, ko), (s.k_inner, s.k_outer));
            assert_eq!(s.bound, p.is_bound(s.k, s.omega));
        }
    }
}

#[test]
fn dipole_branch_jumps_near_the_light_line() {
    let b = branch(1);
    assert!(!b.discontinuities.is_empty());
    let sqrt_eps = problem().outer.eps_o.sqrt();
    for &k in &b.discontinuities {
        // the guided root ends where k meets sqrt(eps_O) Re ω
        let w = b.samples.iter().find(|s| s.k > k).unwrap().omega.re;
        assert!((k - sqrt_eps * w).abs() < 0.15 * k, "jump at {k}, light line {}", sqrt_eps * w);
    }
}

#[test]
fn radiating_roots_decay() {
    let b = branch(1);
    let sqrt_eps = problem().outer.eps_o.sqrt();
    let leaky: Vec<_> = b.samples.iter().filter(|s| s.k < sqrt_eps * s.omega.re).collect();
    assert!(!leaky.is_empty());
    assert!(leaky.iter().all(|s| s.omega.im < 0.0));
}

#[test]
fn dipole_branch_has_a_bound_minimum() {
    let edges = find_band_edges(branch(1)).unwrap();
    let min = edges.iter().find(|e| e.kind == ExtremumKind::Minimum).expect("no minimum");
    assert!(min.curvature > 0.0);
    assert!(problem().is_bound(min.k_c, Complex64::new(min.omega_c, 0.0)));
    let b = branch(1);
    for j in 0..21 {
        let k = min.k_c - min.fit_window + 2.0 * min.fit_window * j as f64 / 20.0;
        let w = b.re_omega_at(k).unwrap();
        assert!((w - min.model(k)).abs() < 1e-4 * min.omega_c);
    }
}

#[test]
fn curvature_is_stable_under_window_halving() {
    let b = branch(1);
    let full = find_band_edges_with_window(b, 1.0).unwrap();
    let half = find_band_edges_with_window(b, 0.5).unwrap();
    assert_eq!(full.len(), half.len());
    for (a, h) in full.iter().zip(&half) {
        assert!((a.curvature - h.curvature).abs() < 0.01 * a.curvature);
    }
}

#[test]
fn leaky_seed_from_winding_number() {
    let rect = SeedRectangle { re_min: 0.75, re_max: 0.85, im_min: -0.05, im_max: -1e-3 };
    let roots = argument_principle_seeds(1, 0.1, &rect, 8, &problem());
    assert!(roots.iter().any(|z| (z - Complex64::new(0.7927, -0.0075)).norm() < 1e-3), "{roots:?}");
}

#[test]
fn tracing_is_deterministic() {
    let p = problem();
    let s = TraceSettings::new(0.1, 20.0, 120);
    let a = trace_modes(&[0, 1, 2], &s, &p).unwrap();
    let b = trace_modes(&[0, 1, 2], &s, &p).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn axisymmetric_coupling_vanishes(k in 0.05f64..30.0, re in 0.05f64..1.5, im in -0.5f64..0.5) {
        let p = problem();
        let w = Complex64::new(re, im);
        let parts = residual_parts(0, k, w, &p).unwrap();
        prop_assert_eq!(parts.value, parts.bracket_product);
    }

    #[test]
    fn transverse_wavevectors_square_back(k in 0.0f64..30.0, re in 0.05f64..1.5, im in -0.5f64..0.5) {
        let p = problem();
        let w = Complex64::new(re, im);
        let (ki, ko) = transverse_wavevectors(k, w, &p).unwrap();
        let eps_i = bandedge::media::drude_epsilon(&p.drude, w).unwrap();
        let want_i = eps_i * w * w - k * k;
        let want_o = p.outer.eps_o * w * w - k * k;
        prop_assert!((ki * ki - want_i).norm() <= 1e-12 * want_i.norm().max(1.0));
        prop_assert!((ko * ko - want_o).norm() <= 1e-12 * want_o.norm().max(1.0));
    }

    #[test]
    fn bound_flag_ignores_the_imaginary_part(k in 0.0f64..5.0, re in 0.0f64..1.5, im in -1.0f64..1.0) {
        let p = problem();
        prop_assert_eq!(p.is_bound(k, Complex64::new(re, im)), p.is_bound(k, Complex64::new(re, 0.0)));
    }
}
