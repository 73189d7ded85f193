use std::sync::OnceLock;

use bandedge::band_edge::ExtremumKind;
use bandedge::dynamics::*;
use bandedge::numerics::TimeGrid;
use bandedge::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn detuned() -> &'static Vec<AmplitudeTrace> {
    static CELL: OnceLock<Vec<AmplitudeTrace>> = OnceLock::new();
    CELL.get_or_init(|| {
        let specs: Vec<_> = [0.2, 0.4, 0.8].iter().map(|&d| ReservoirSpec::minimum(d, 0.1)).collect();
        decay_traces(&specs, &TimeGrid::new(0.02, 501).unwrap()).unwrap()
    })
}

#[test]
fn detuned_decay_oscillates() {
    for tr in detuned() {
        assert!(tr.population.windows(2).any(|w| w[1] > w[0]));
        assert_eq!(tr.b_e[0], Complex64::new(1.0, 0.0));
    }
}

#[test]
fn larger_detuning_decays_further() {
    let p: Vec<f64> = detuned().iter().map(|t| *t.population.last().unwrap()).collect();
    assert!(p[0] > p[1] && p[1] > p[2], "{p:?}");
}

#[test]
fn population_never_exceeds_one() {
    for tr in detuned() {
        assert!(tr.population.iter().all(|&p| p <= 1.0 + 1e-9));
        assert!(tr.cross_check < CROSS_CHECK_LIMIT);
    }
}

#[test]
fn trapped_population_regression() {
    // frozen from the time-domain solver at t = 10
    let g = TimeGrid::new(0.5, 21).unwrap();
    let v = volterra_amplitude(&ReservoirSpec::minimum(0.0, 0.0), &g).unwrap();
    assert!((v[20].norm_sqr() - 0.456049457).abs() < 1e-8);
    let l = laplace_amplitude(&ReservoirSpec::minimum(0.0, 0.0), &g).unwrap();
    assert!((v[20] - l[20]).norm() < 1e-7);
}

#[test]
fn trapped_population_approaches_bound_state_weight() {
    // residue 2/3 at the bound pole z = i
    let g = TimeGrid::new(1.0, 201).unwrap();
    let l = laplace_amplitude(&ReservoirSpec::minimum(0.0, 0.0), &g).unwrap();
    assert!((l[200].norm_sqr() - 4.0 / 9.0).abs() < 1e-3);
}

#[test]
fn maximum_kind_agrees_between_methods() {
    let spec = ReservoirSpec { kind: ExtremumKind::Maximum, ..ReservoirSpec::minimum(-0.4, 0.1) };
    let tr = decay_trace(&spec, &TimeGrid::new(0.05, 121).unwrap()).unwrap();
    assert!(tr.cross_check < 1e-6);
}

#[test]
fn markov_population() {
    let spec = ReservoirSpec { coupling: 0.0, ..ReservoirSpec::minimum(0.3, 1.0) };
    let g = TimeGrid::new(0.05, 121).unwrap();
    let tr = decay_trace(&spec, &g).unwrap();
    for (i, p) in tr.population.iter().enumerate() {
        assert!((p - (-g.t(i)).exp()).abs() < 1e-9);
    }
}

#[test]
fn short_grids_are_rejected() {
    let r = decay_trace(&ReservoirSpec::minimum(0.2, 0.1), &TimeGrid::new(0.1, 21).unwrap());
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn initial_value_normalization(delta in -2.0f64..2.0, gamma in 0.0f64..1.0, c in 0.0f64..3.0, im in -5.0f64..5.0) {
        let spec = ReservoirSpec { coupling: c, ..ReservoirSpec::minimum(delta, gamma) };
        let z = Complex64::new(1e10, im);
        prop_assert!((z * amplitude_transform(&spec, z).unwrap() - 1.0).norm() < 1e-4);
    }

    #[test]
    fn poles_lie_in_the_closed_left_half_plane(delta in -2.0f64..2.0, gamma in 0.0f64..1.0, c in 0.01f64..3.0) {
        for kind in [ExtremumKind::Minimum, ExtremumKind::Maximum] {
            let spec = ReservoirSpec { coupling: c, kind, ..ReservoirSpec::minimum(delta, gamma) };
            for p in transform_poles(&spec) {
                prop_assert!(p.re <= 1e-12, "{:?}", p);
            }
        }
    }
}
