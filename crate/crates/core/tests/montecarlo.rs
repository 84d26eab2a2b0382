use semimarkov_core::classical::SemiMarkovSpec;
use semimarkov_core::montecarlo::{
    chapman_kolmogorov_residual, estimate_conditional, estimate_jump_counts, estimate_occupation,
    estimate_parity, propagator_ck_residual, sample_trajectory, sample_trajectory_from, ChunkExecutor,
    EstimateWithError, RngStream, Sequential, CHUNK_SIZE,
};
use semimarkov_core::renewal::WaitingTime;
use semimarkov_core::Error;

fn spec(pi: f64, w: WaitingTime) -> SemiMarkovSpec {
    SemiMarkovSpec::new(pi, w).unwrap()
}

fn exp1() -> WaitingTime {
    WaitingTime::exponential(1.0).unwrap()
}

fn erlang1() -> WaitingTime {
    WaitingTime::erlang_two(1.0).unwrap()
}

fn families() -> Vec<WaitingTime> {
    vec![
        exp1(),
        erlang1(),
        WaitingTime::hypoexponential_from_ratio(1.0, 0.12).unwrap(),
        WaitingTime::mixture(1.0, 6.0, 0.6).unwrap(),
    ]
}

/// Runs chunks in reverse order, then restores chunk order.
struct Reversed;

impl ChunkExecutor for Reversed {
    fn map_chunks<T, F>(&self, chunks: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let mut out: Vec<T> = (0..chunks).rev().map(f).collect();
        out.reverse();
        out
    }
}

#[test]
fn rng_uniform_range_and_reproducibility() {
    let mut a = RngStream::new(7, 3);
    let mut b = RngStream::new(7, 3);
    let mut c = RngStream::new(7, 4);
    let mut differs = false;
    for _ in 0..1000 {
        let (x, y, z) = (a.uniform(), b.uniform(), c.uniform());
        assert!((0.0..1.0).contains(&x));
        assert_eq!(x, y);
        differs |= x != z;
    }
    assert!(differs);
}

#[test]
fn trajectories_are_replayable_and_well_formed() {
    let s = spec(1.0, exp1());
    let a = sample_trajectory(&s, 10.0, 42, 0).unwrap();
    let b = sample_trajectory(&s, 10.0, 42, 0).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_trajectory(&s, 10.0, 43, 0).unwrap());
    assert!(a.jump_times.windows(2).all(|w| w[0] < w[1]));
    assert!(a.jump_times.iter().all(|&t| t <= 10.0));
    assert_eq!(a.states.len(), a.jump_times.len() + 1);
    assert!(a.states.windows(2).all(|w| w[0] != w[1]), "π = 1 flips at every jump");
    assert_eq!(a.state_at(0.0), a.states[0]);
    let s = spec(0.0, exp1());
    let frozen = sample_trajectory_from(&s, 1, 20.0, 1, 0).unwrap();
    assert!(frozen.states.iter().all(|&x| x == 1));
    assert!(sample_trajectory(&s, 0.0, 1, 0).is_err());
    assert!(sample_trajectory_from(&s, 2, 1.0, 1, 0).is_err());
}

#[test]
fn exponential_mean_jump_count() {
    let lambda = 1.7;
    let horizon = 3.0;
    let s = spec(1.0, WaitingTime::exponential(lambda).unwrap());
    let n = 100_000u64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for k in 0..n {
        let c = sample_trajectory(&s, horizon, 11, k).unwrap().jump_times.len() as f64;
        sum += c;
        sq += c * c;
    }
    let mean = sum / n as f64;
    let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - lambda * horizon).abs() <= 3.0 * se, "{mean} vs {}", lambda * horizon);
}

#[test]
fn erlang_mean_first_jump() {
    let lambda = 2.0;
    let s = spec(1.0, WaitingTime::erlang_two(lambda).unwrap());
    let n = 100_000u64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for k in 0..n {
        let tr = sample_trajectory(&s, 100.0, 5, k).unwrap();
        let t = tr.jump_times[0];
        sum += t;
        sq += t * t;
    }
    let mean = sum / n as f64;
    let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
    assert!((mean - 2.0 / lambda).abs() <= 3.0 * se);
}

#[test]
fn parity_estimates() {
    let e = estimate_parity(&spec(1.0, exp1()), 0.5, 100_000, 1, &Sequential).unwrap();
    assert!(e.within((-1.0f64).exp(), 3.0), "{e:?}");
    assert!((e.value - 0.3679).abs() < 0.01);
    let e = estimate_parity(&spec(1.0, erlang1()), 1.0, 100_000, 2, &Sequential).unwrap();
    assert!(e.within(erlang1().parity(1.0), 3.0), "{e:?}");
    for w in families() {
        let e = estimate_parity(&spec(1.0, w), 0.0, 1000, 3, &Sequential).unwrap();
        assert_eq!(e.value, 1.0);
    }
    assert!(matches!(
        estimate_parity(&spec(1.0, exp1()), 1.0, 999, 1, &Sequential),
        Err(Error::InsufficientSamples { observed: 999, required: 1000 })
    ));
}

#[test]
fn estimates_independent_of_chunk_schedule() {
    let s = spec(1.0, erlang1());
    let n = 5 * CHUNK_SIZE + 123;
    let a = estimate_parity(&s, 1.5, n, 9, &Sequential).unwrap();
    let b = estimate_parity(&s, 1.5, n, 9, &Reversed).unwrap();
    assert_eq!(a, b);
    let a = estimate_conditional(&s, [0.0, 1.0, 2.0], [0, 0, 0], n, 9, &Sequential).unwrap();
    let b = estimate_conditional(&s, [0.0, 1.0, 2.0], [0, 0, 0], n, 9, &Reversed).unwrap();
    assert_eq!(a, b);
}

#[test]
fn one_point_estimates_match_classical_trajectories() {
    let times = [0.15, 0.4, 0.8, 1.1, 1.7, 2.3, 3.0, 3.6, 4.4, 5.5];
    let mut seed = 100;
    for w in families() {
        for pi in [0.5, 1.0] {
            let s = spec(pi, w);
            for &t in &times {
                seed += 1;
                let e = estimate_occupation(&s, 0.9, t, 20_000, seed, &Sequential).unwrap();
                let exact = s.trajectory(0.9, &[t]).unwrap()[0];
                assert!(e.within(exact, 3.0), "{w:?} π={pi} t={t}: {e:?} vs {exact}");
            }
        }
    }
}

#[test]
fn jump_count_histogram_matches_renewal() {
    let mut seed = 600;
    for w in families() {
        let s = spec(1.0, w);
        let t = 2.0;
        seed += 1;
        let bins = estimate_jump_counts(&s, t, 10, 100_000, seed, &Sequential).unwrap();
        for (k, e) in bins.iter().enumerate() {
            let exact = w.jump_count_probability(k, t).unwrap();
            // Empty bins have zero standard error; the exact mass must then be tiny.
            if e.std_error == 0.0 {
                assert!(exact < 1e-4, "{w:?} k={k}");
            } else {
                assert!(e.within(exact, 3.0), "{w:?} k={k}: {e:?} vs {exact}");
            }
        }
    }
}

#[test]
fn exponential_process_is_markov() {
    let s = spec(1.0, exp1());
    let c = estimate_conditional(&s, [0.0, 1.0, 2.0], [0, 0, 0], 400_000, 21, &Sequential).unwrap();
    assert!(c.z_score().abs() <= 3.0, "{c:?}");
    let r = chapman_kolmogorov_residual(&s, 0.5, 1.0, 2.0, 400_000, 23, &Sequential).unwrap();
    assert!(r.residual <= 3.0 * r.std_error, "{r:?}");
}

#[test]
fn erlang_process_is_not_markov() {
    let s = spec(1.0, erlang1());
    let c = estimate_conditional(&s, [0.0, 1.0, 2.0], [0, 0, 0], 1_000_000, 31, &Sequential).unwrap();
    assert!(c.z_score().abs() >= 5.0, "{c:?}");
    let r = chapman_kolmogorov_residual(&s, 0.0, 1.0, 2.0, 1_000_000, 32, &Sequential).unwrap();
    assert!(r.z_score() >= 5.0, "{r:?}");
}

#[test]
fn one_point_propagators_always_compose() {
    let s = spec(0.5, erlang1());
    assert!(propagator_ck_residual(&s, 0.0, 1.0, 2.0).unwrap() < 1e-15);
    let s = spec(1.0, erlang1());
    assert!(propagator_ck_residual(&s, 0.5, 1.5, 2.2).unwrap() < 1e-12);
}

#[test]
fn degenerate_conditioning_time() {
    let s = spec(1.0, erlang1());
    let c = estimate_conditional(&s, [0.0, 1.0, 1.0], [0, 1, 1], 20_000, 3, &Sequential).unwrap();
    assert_eq!(c.two_point.value, 1.0);
    assert_eq!(c.three_point.value, 1.0);
    let c = estimate_conditional(&s, [0.0, 1.0, 1.0], [0, 1, 0], 20_000, 3, &Sequential).unwrap();
    assert_eq!(c.two_point.value, 0.0);
}

#[test]
fn rare_conditioning_event_is_reported() {
    // With π = 0 the state never changes, so (x0, x1) = (0, 1) never occurs.
    let s = spec(0.0, exp1());
    assert!(matches!(
        estimate_conditional(&s, [0.0, 1.0, 2.0], [0, 1, 1], 10_000, 1, &Sequential),
        Err(Error::InsufficientSamples { observed: 0, .. })
    ));
    assert!(estimate_conditional(&s, [1.0, 1.0, 2.0], [0, 0, 0], 10_000, 1, &Sequential).is_err());
}

#[test]
fn z_score_of_estimates() {
    let a = EstimateWithError { value: 1.0, std_error: 0.3, samples: 10 };
    let b = EstimateWithError { value: 0.5, std_error: 0.4, samples: 10 };
    assert!((a.z_score(&b) - 1.0).abs() < 1e-15);
}
