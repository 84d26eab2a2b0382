use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use semimarkov_core::quantum::{
    apply_cpt, choi, is_cp_map, is_positive_map, trace_distance, trace_distance_derivative, MapVariant,
    Mat2, ModelSpec, QubitState, StateDifference, TransferMatrix, MAP_TOL,
};
use semimarkov_core::renewal::WaitingTime;
use semimarkov_core::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn states_close(a: &QubitState, b: &QubitState, tol: f64) -> bool {
    let (x, y) = (a.matrix(), b.matrix());
    (0..2).all(|i| (0..2).all(|j| (x[i][j] - y[i][j]).norm() <= tol))
}

fn erlang() -> WaitingTime {
    WaitingTime::erlang_two(1.0).unwrap()
}

fn hypo012() -> WaitingTime {
    WaitingTime::hypoexponential_from_ratio(1.0, 0.12).unwrap()
}

fn families() -> Vec<WaitingTime> {
    vec![
        WaitingTime::exponential(1.0).unwrap(),
        erlang(),
        hypo012(),
        WaitingTime::hypoexponential(1.0, 0.6).unwrap(),
        WaitingTime::mixture(0.1, 0.2, 0.3).unwrap(),
        WaitingTime::mixture(1.0, 6.0, 0.6).unwrap(),
    ]
}

fn sample_states() -> Vec<QubitState> {
    vec![
        QubitState::excited(),
        QubitState::ground(),
        QubitState::plus(),
        QubitState::from_bloch([0.3, -0.4, 0.5]).unwrap(),
        QubitState::pure(1.1, 2.3),
        QubitState::maximally_mixed(),
    ]
}

fn jump_map_oracle(variant: MapVariant, r: &QubitState) -> Mat2 {
    literal_map(variant, r.matrix())
}

/// Literal entrywise form of the three jump maps.
fn literal_map(variant: MapVariant, m: &Mat2) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    match variant {
        MapVariant::Dephasing => [[m[0][0], -m[0][1]], [-m[1][0], m[1][1]]],
        MapVariant::Projection => [[m[0][0], z], [z, m[1][1]]],
        MapVariant::Dissipative => [[m[1][1], z], [z, m[0][0]]],
    }
}

#[test]
fn state_validation() {
    let bad_trace = [[Complex64::new(0.7, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(0.7, 0.0)]];
    assert!(matches!(QubitState::new(bad_trace), Err(Error::InvalidInput(_))));
    let negative = [[Complex64::new(1.2, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(-0.2, 0.0)]];
    assert!(QubitState::new(negative).is_err());
    assert!(QubitState::from_bloch([0.9, 0.9, 0.0]).is_err());
    let s = QubitState::from_bloch([0.3, -0.4, 0.5]).unwrap();
    assert!(QubitState::new(*s.matrix()).is_ok());
    let b = s.bloch();
    assert!(close(b[0], 0.3, 1e-15) && close(b[1], -0.4, 1e-15) && close(b[2], 0.5, 1e-15));
}

#[test]
fn jump_maps() {
    for variant in MapVariant::ALL {
        for s in sample_states() {
            let out = apply_cpt(variant, &s);
            let expected = jump_map_oracle(variant, &s);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((out.matrix()[i][j] - expected[i][j]).norm() < 1e-15);
                }
            }
            assert!(states_close(&apply_cpt(variant, &QubitState::maximally_mixed()), &QubitState::maximally_mixed(), 0.0));
        }
    }
    let diag = QubitState::from_bloch([0.0, 0.0, 0.4]).unwrap();
    assert_eq!(apply_cpt(MapVariant::Dephasing, &diag), diag);
    let swapped = apply_cpt(MapVariant::Dissipative, &diag);
    assert!(close(swapped.excited_population(), 0.3, 1e-15));
    let s = QubitState::pure(0.7, 0.2);
    let once = apply_cpt(MapVariant::Projection, &s);
    assert_eq!(apply_cpt(MapVariant::Projection, &once), once);
}

#[test]
fn jump_map_transfer_matrices() {
    let expect = [
        (MapVariant::Dephasing, [1.0, -1.0, -1.0, 1.0]),
        (MapVariant::Projection, [1.0, 0.0, 0.0, 1.0]),
        (MapVariant::Dissipative, [1.0, 0.0, 0.0, -1.0]),
    ];
    for (variant, d) in expect {
        let f = TransferMatrix::from_map(|m| literal_map(variant, m));
        assert_eq!(f.diagonal_entries().map(|x| x.map(|v| (v * 1e12).round() / 1e12)), Some(d));
    }
}

#[test]
fn transfer_matrix_values() {
    for variant in MapVariant::ALL {
        let m = ModelSpec::new(variant, erlang());
        assert_eq!(m.transfer_matrix(0.0).unwrap(), TransferMatrix::identity());
        assert!(m.transfer_matrix(-1.0).is_err());
    }
    let q1 = (-1.0f64).exp() * (1.0f64.cos() + 1.0f64.sin());
    let g1 = 2.0 * (-1.0f64).exp();
    let d = ModelSpec::new(MapVariant::Dephasing, erlang()).transfer_matrix(1.0).unwrap();
    let d = d.diagonal_entries().unwrap();
    assert!(close(d[1], 0.508326, 1e-6) && close(d[2], q1, 1e-14) && d[3] == 1.0);
    let d = ModelSpec::new(MapVariant::Dissipative, erlang()).transfer_matrix(1.0).unwrap();
    let d = d.diagonal_entries().unwrap();
    assert!(close(d[1], 0.735759, 1e-6) && close(d[2], g1, 1e-14) && close(d[3], q1, 1e-14));
    let d = ModelSpec::new(MapVariant::Projection, erlang()).transfer_matrix(1.0).unwrap();
    assert!(close(d.diagonal_entries().unwrap()[1], g1, 1e-14));
}

#[test]
fn intermediate_transfer_values() {
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    assert_eq!(m.intermediate_transfer(1.3, 1.3).unwrap(), TransferMatrix::identity());
    let f = m.intermediate_transfer(1.0, 2.0).unwrap().diagonal_entries().unwrap();
    let q = |t: f64| (-t).exp() * (t.cos() + t.sin());
    assert!(close(f[1], q(2.0) / q(1.0), 1e-13));
    assert!(close(f[1], 0.131296, 1e-5));
    let m = ModelSpec::new(MapVariant::Dissipative, erlang());
    let f = m.intermediate_transfer(0.5, 2.0).unwrap().diagonal_entries().unwrap();
    let g = |t: f64| (1.0 + t) * (-t).exp();
    assert!(close(f[1], g(2.0) / g(0.5), 1e-13) && close(f[3], q(2.0) / q(0.5), 1e-13));
    for variant in [MapVariant::Dephasing, MapVariant::Dissipative] {
        match ModelSpec::new(variant, erlang()).intermediate_transfer(3.0 * PI / 4.0, 3.0) {
            Err(Error::UndefinedPropagator { time }) => assert_eq!(time, 3.0 * PI / 4.0),
            other => panic!("{other:?}"),
        }
    }
    assert!(ModelSpec::new(MapVariant::Projection, erlang()).intermediate_transfer(3.0 * PI / 4.0, 3.0).is_ok());
}

#[test]
fn composition_of_intermediate_maps() {
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            let (s, t) = (0.7, 1.9);
            let Ok(fts) = m.intermediate_transfer(s, t) else { continue };
            let prod = fts.compose(&m.transfer_matrix(s).unwrap());
            let direct = m.transfer_matrix(t).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((prod.entries()[i][j] - direct.entries()[i][j]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn closed_form_matches_explicit_elements() {
    let q = |t: f64| (-t).exp() * (t.cos() + t.sin());
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    for s in sample_states() {
        assert!(states_close(&m.evolve_closed_form(&s, 0.0).unwrap(), &s, 1e-15));
    }
    let out = m.evolve_closed_form(&QubitState::plus(), 1.0).unwrap();
    assert!(close(out.coherence().re, 0.254163, 1e-6) && close(out.coherence().re, 0.5 * q(1.0), 1e-14));
    assert!(close(out.excited_population(), 0.5, 1e-15));

    let m = ModelSpec::new(MapVariant::Dissipative, erlang());
    for t in [0.3, 1.0, 4.0] {
        let counts = erlang().jump_counts(20, t).unwrap();
        let p_even: f64 = counts.probabilities.iter().step_by(2).sum::<f64>() + counts.tail_even;
        let out = m.evolve_closed_form(&QubitState::excited(), t).unwrap();
        assert!((out.excited_population() - p_even).abs() < 1e-12);
        let s = QubitState::from_bloch([0.3, -0.4, 0.5]).unwrap();
        let out = m.evolve_closed_form(&s, t).unwrap();
        let g = (1.0 + t) * (-t).exp();
        assert!((out.coherence() - s.coherence() * g).norm() < 1e-14);
        let expected = p_even * s.excited_population() + (1.0 - p_even) * (1.0 - s.excited_population());
        assert!((out.excited_population() - expected).abs() < 1e-12);
    }
}

#[test]
fn unital_and_trace_preserving() {
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            for t in [0.0, 0.5, 3.0, 25.0] {
                let mixed = m.evolve_closed_form(&QubitState::maximally_mixed(), t).unwrap();
                assert!(states_close(&mixed, &QubitState::maximally_mixed(), 1e-15));
                for s in sample_states() {
                    let out = m.evolve_closed_form(&s, t).unwrap();
                    let tr = out.matrix()[0][0] + out.matrix()[1][1];
                    assert!((tr - 1.0).norm() < 1e-12);
                    assert!(QubitState::new(*out.matrix()).is_ok());
                }
            }
        }
    }
}

#[test]
fn series_matches_closed_form() {
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            for t in [0.0, 0.4, 1.0, 5.0 / w.max_rate()] {
                for s in sample_states() {
                    let series = m.series_solution(&s, t, 20).unwrap();
                    let closed = m.evolve_closed_form(&s, t).unwrap();
                    assert!(states_close(&series.state, &closed, 1e-10), "{variant:?} {w:?} t={t}");
                    assert!(series.tail_mass >= 0.0);
                }
            }
        }
    }
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    let s = QubitState::pure(0.4, 1.0);
    assert_eq!(m.series_solution(&s, 0.0, 5).unwrap().state, s);
    assert!(matches!(m.series_solution(&s, 1.0, 21), Err(Error::Unsupported(_))));
}

#[test]
fn dephasing_series_resums_by_parity() {
    let w = erlang();
    let m = ModelSpec::new(MapVariant::Dephasing, w);
    let s = QubitState::from_bloch([0.6, 0.2, -0.3]).unwrap();
    let t = 1.3;
    let c = w.jump_counts(20, t).unwrap();
    let p_even: f64 = c.probabilities.iter().step_by(2).sum::<f64>() + c.tail_even;
    let p_odd: f64 = c.probabilities.iter().skip(1).step_by(2).sum::<f64>() + c.tail_odd;
    let flipped = apply_cpt(MapVariant::Dephasing, &s);
    let series = m.series_solution(&s, t, 20).unwrap().state;
    for i in 0..2 {
        for j in 0..2 {
            let expected = s.matrix()[i][j] * p_even + flipped.matrix()[i][j] * p_odd;
            assert!((series.matrix()[i][j] - expected).norm() < 1e-13);
        }
    }
    // Coherence factor p_even - p_odd is q; the series with few orders keeps
    // only the low-order terms plus the parity-resolved tail.
    let low = m.series_solution(&s, t, 2).unwrap();
    assert!(low.tail_mass > 0.0);
    assert!(states_close(&low.state, &series, 1e-13));
}

#[test]
fn time_local_matches_closed_form() {
    let grid: Vec<f64> = (1..=20).map(|k| 0.1 * k as f64).collect();
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            if let Some(z) = w.classify_parity().first_zero() {
                if variant != MapVariant::Projection && z <= 2.0 {
                    continue;
                }
            }
            for s in sample_states() {
                let ode = m.evolve_time_local(&s, &grid).unwrap();
                for (t, r) in grid.iter().zip(&ode) {
                    let closed = m.evolve_closed_form(&s, *t).unwrap();
                    assert!(states_close(r, &closed, 1e-6), "{variant:?} {w:?} t={t}");
                }
            }
        }
    }
}

#[test]
fn time_local_erlang_before_first_zero() {
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    let grid: Vec<f64> = (0..=20).map(|k| 0.1 * k as f64).collect();
    let ode = m.evolve_time_local(&QubitState::plus(), &grid).unwrap();
    for (t, r) in grid.iter().zip(&ode) {
        let q = (-t).exp() * (t.cos() + t.sin());
        assert!((r.coherence().re - 0.5 * q).abs() < 1e-6);
    }
    match m.evolve_time_local(&QubitState::plus(), &[1.0, 3.0]) {
        Err(Error::Singularity { time }) => assert!(close(time, 3.0 * PI / 4.0, 1e-14)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn time_local_exponential_and_projection() {
    let m = ModelSpec::new(MapVariant::Dephasing, WaitingTime::exponential(1.0).unwrap());
    let out = m.evolve_time_local(&QubitState::plus(), &[0.5, 1.0]).unwrap();
    assert!((out[1].coherence().re - 0.5 * (-2.0f64).exp()).abs() < 1e-9);
    assert!((out[0].coherence().re - 0.5 * 0.367879).abs() < 1e-6);
    for w in families() {
        let m = ModelSpec::new(MapVariant::Projection, w);
        let s = QubitState::pure(0.9, 0.3);
        for r in m.evolve_time_local(&s, &[0.5, 2.0, 6.0]).unwrap() {
            assert!((r.excited_population() - s.excited_population()).abs() < 1e-12);
        }
    }
}

#[test]
fn choi_examples() {
    let id = choi(&TransferMatrix::identity()).unwrap();
    let e = id.eigenvalues().unwrap();
    assert!(e[..3].iter().all(|x| x.abs() < 1e-14) && (e[3] - 1.0).abs() < 1e-14);
    assert!((id.trace() - 1.0).abs() < 1e-15);
    let f = TransferMatrix::diagonal([1.0, 0.9, 0.9, 0.7]);
    assert!((choi(&f).unwrap().eigenvalues().unwrap()[0] + 0.025).abs() < 1e-14);
    assert!(!is_cp_map(&f, MAP_TOL).unwrap());
    assert!(is_positive_map(&f, MAP_TOL));
    let f = TransferMatrix::diagonal([1.0, 0.9, 0.9, 0.9]);
    assert!((choi(&f).unwrap().eigenvalues().unwrap()[0] - 0.025).abs() < 1e-14);
    assert!(is_cp_map(&f, MAP_TOL).unwrap());
    assert!(is_positive_map(&TransferMatrix::identity(), MAP_TOL));
    assert!(is_cp_map(&TransferMatrix::identity(), MAP_TOL).unwrap());
    assert!(matches!(choi(&TransferMatrix::diagonal([0.5, 1.0, 1.0, 1.0])), Err(Error::InvalidInput(_))));
}

#[test]
fn transpose_is_positive_but_not_cp() {
    // Transposition flips σy: positive, not completely positive.
    let f = TransferMatrix::diagonal([1.0, 1.0, -1.0, 1.0]);
    assert!(is_positive_map(&f, MAP_TOL));
    assert!(!is_cp_map(&f, MAP_TOL).unwrap());
    assert!(!is_positive_map(&TransferMatrix::diagonal([1.0, 1.1, 0.0, 0.0]), MAP_TOL));
}

#[test]
fn positivity_fallback_for_non_diagonal_maps() {
    // Rotation about z: unitary, hence completely positive.
    let (c, s) = (0.6, 0.8);
    let rot = TransferMatrix::new([[1.0, 0.0, 0.0, 0.0], [0.0, c, -s, 0.0], [0.0, s, c, 0.0], [0.0, 0.0, 0.0, 1.0]]).unwrap();
    assert!(rot.diagonal_entries().is_none());
    assert!(is_positive_map(&rot, MAP_TOL));
    assert!(is_cp_map(&rot, MAP_TOL).unwrap());
    // A shear that pushes the Bloch ball outside itself.
    let shear = TransferMatrix::new([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.3, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]).unwrap();
    assert!(!is_positive_map(&shear, MAP_TOL));
    // Non-unital but positive: amplitude damping with strength 0.3.
    let k = 0.3f64;
    let ad = TransferMatrix::new([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, (1.0 - k).sqrt(), 0.0, 0.0],
        [0.0, 0.0, (1.0 - k).sqrt(), 0.0],
        [-k, 0.0, 0.0, 1.0 - k],
    ])
    .unwrap();
    assert!(is_positive_map(&ad, MAP_TOL));
    assert!(is_cp_map(&ad, MAP_TOL).unwrap());
}

/// Eigenvalues of the Choi matrix of `diag(1, a, b, c)`.
fn choi_formula(a: f64, b: f64, c: f64) -> [f64; 4] {
    let mut v = [
        (1.0 + a + b + c) / 4.0,
        (1.0 + a - b - c) / 4.0,
        (1.0 - a + b - c) / 4.0,
        (1.0 - a - b + c) / 4.0,
    ];
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn dephasing_p_and_cp_coincide() {
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    for s in [0.2, 1.0, 2.0, 2.5, 3.0] {
        for dt in [0.1, 0.5, 1.0, 2.0] {
            let Ok(f) = m.intermediate_transfer(s, s + dt) else { continue };
            assert_eq!(is_positive_map(&f, MAP_TOL), is_cp_map(&f, MAP_TOL).unwrap(), "s={s} dt={dt}");
        }
    }
}

#[test]
fn dissipative_cp_condition() {
    for w in [erlang(), hypo012(), WaitingTime::mixture(1.0, 6.0, 0.6).unwrap()] {
        let m = ModelSpec::new(MapVariant::Dissipative, w);
        for s in [0.3, 1.0, 2.0, 4.0] {
            for dt in [0.2, 0.7, 1.5] {
                let t = s + dt;
                let Ok(f) = m.intermediate_transfer(s, t) else { continue };
                let gr = w.survival(t).unwrap() / w.survival(s).unwrap();
                let qr = w.parity(t) / w.parity(s);
                let expected = gr <= 0.5 * (1.0 + qr) + 1e-12 && qr.abs() <= 1.0 + 1e-12;
                assert_eq!(is_cp_map(&f, MAP_TOL).unwrap(), expected, "{w:?} s={s} t={t}");
            }
        }
    }
}

#[test]
fn hypoexponential_dissipative_p_but_not_cp() {
    let m = ModelSpec::new(MapVariant::Dissipative, hypo012());
    let mut cp_failed = false;
    for i in 0..40 {
        let s = 0.5 * i as f64;
        for dt in [0.5, 2.0, 5.0] {
            let f = m.intermediate_transfer(s, s + dt).unwrap();
            assert!(is_positive_map(&f, MAP_TOL));
            cp_failed |= !is_cp_map(&f, MAP_TOL).unwrap();
        }
    }
    assert!(cp_failed);
}

#[test]
fn projection_always_cp_divisible() {
    for w in families() {
        let m = ModelSpec::new(MapVariant::Projection, w);
        for s in [0.0, 0.5, 2.0, 7.0] {
            for dt in [0.1, 1.0, 5.0] {
                assert!(is_cp_map(&m.intermediate_transfer(s, s + dt).unwrap(), MAP_TOL).unwrap());
            }
        }
    }
}

#[test]
fn origin_maps_are_cp() {
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            for t in [0.0, 0.5, 2.4, 3.0, 10.0] {
                assert!(is_cp_map(&m.transfer_matrix(t).unwrap(), MAP_TOL).unwrap());
            }
        }
    }
}

#[test]
fn trace_distance_examples() {
    assert!((trace_distance(&QubitState::excited(), &QubitState::ground()) - 1.0).abs() < 1e-15);
    assert!((trace_distance(&QubitState::plus(), &QubitState::minus()) - 1.0).abs() < 1e-15);
    for t in [0.5, 2.0, 3.0] {
        let q = erlang().parity(t);
        let m = ModelSpec::new(MapVariant::Dephasing, erlang());
        let d = trace_distance(&m.evolve_closed_form(&QubitState::plus(), t).unwrap(), &m.evolve_closed_form(&QubitState::minus(), t).unwrap());
        assert!((d - q.abs()).abs() < 1e-10);
        let m = ModelSpec::new(MapVariant::Dissipative, erlang());
        let d = trace_distance(&m.evolve_closed_form(&QubitState::excited(), t).unwrap(), &m.evolve_closed_form(&QubitState::ground(), t).unwrap());
        assert!((d - q.abs()).abs() < 1e-10);
    }
    let a = QubitState::from_bloch([0.3, -0.4, 0.5]).unwrap();
    let b = QubitState::pure(2.0, 0.3);
    assert!((trace_distance(&a, &b) - StateDifference::between(&a, &b).distance()).abs() < 1e-14);
}

#[test]
fn trace_distance_derivative_matches_finite_difference() {
    let pairs = [
        (QubitState::plus(), QubitState::minus()),
        (QubitState::excited(), QubitState::ground()),
        (QubitState::from_bloch([0.3, -0.4, 0.5]).unwrap(), QubitState::pure(2.0, 0.3)),
    ];
    for variant in MapVariant::ALL {
        for w in families() {
            let m = ModelSpec::new(variant, w);
            for (a, b) in &pairs {
                for t in [0.4, 1.3, 2.6] {
                    let d = |t: f64| trace_distance(&m.evolve_closed_form(a, t).unwrap(), &m.evolve_closed_form(b, t).unwrap());
                    if d(t) < 1e-3 {
                        continue;
                    }
                    let h = 1e-6;
                    let fd = (d(t + h) - d(t - h)) / (2.0 * h);
                    let sigma = trace_distance_derivative(&m, a, b, t).unwrap();
                    assert!((sigma - fd).abs() < 1e-6, "{variant:?} {w:?} t={t}: {sigma} vs {fd}");
                }
            }
        }
    }
}

#[test]
fn trace_distance_derivative_signs() {
    let e = WaitingTime::exponential(1.0).unwrap();
    for variant in MapVariant::ALL {
        let m = ModelSpec::new(variant, e);
        for t in [0.1, 1.0, 5.0] {
            assert!(trace_distance_derivative(&m, &QubitState::plus(), &QubitState::pure(2.0, 1.0), t).unwrap() <= 0.0);
        }
    }
    let m = ModelSpec::new(MapVariant::Dephasing, erlang());
    for t in [2.4, 2.8, 3.1] {
        assert!(trace_distance_derivative(&m, &QubitState::plus(), &QubitState::minus(), t).unwrap() > 0.0);
    }
    let m = ModelSpec::new(MapVariant::Dissipative, erlang());
    for t in [0.5, 2.5, 4.0] {
        let s = trace_distance_derivative(&m, &QubitState::excited(), &QubitState::ground(), t).unwrap();
        let (q, dq) = (erlang().parity(t), erlang().parity_derivative(t));
        assert!((s - (q * dq).signum() * dq.abs()).abs() < 1e-14);
    }
    assert!(trace_distance_derivative(&ModelSpec::new(MapVariant::Dephasing, erlang()), &QubitState::plus(), &QubitState::minus(), 3.0 * PI / 4.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn choi_eigenvalue_formula(a in -1.2f64..1.2, b in -1.2f64..1.2, c in -1.2f64..1.2) {
        let numeric = choi(&TransferMatrix::diagonal([1.0, a, b, c])).unwrap().eigenvalues().unwrap();
        let formula = choi_formula(a, b, c);
        for k in 0..4 {
            prop_assert!((numeric[k] - formula[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn jump_maps_are_cp_and_unital(x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57) {
        let s = QubitState::from_bloch([x, y, z]).unwrap();
        for variant in MapVariant::ALL {
            let f = TransferMatrix::from_map(|m| literal_map(variant, m));
            prop_assert!(is_cp_map(&f, MAP_TOL).unwrap());
            prop_assert!(states_close(&f.apply(&s), &apply_cpt(variant, &s), 1e-14));
        }
    }
}
