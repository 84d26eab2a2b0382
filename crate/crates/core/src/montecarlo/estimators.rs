use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::sampling::observe;
use super::{chunk_count, chunk_len, stream_id, ChunkExecutor, EstimateWithError, RngStream};
use crate::classical::SemiMarkovSpec;
use crate::math;
use crate::{Error, Result};

/// Smallest sample count accepted by [`estimate_parity`].
pub const MIN_PARITY_SAMPLES: u64 = 1000;

/// Smallest number of conditioning events accepted for a conditional estimate.
pub const MIN_CONDITIONING_EVENTS: u64 = 100;

// Independent sample families; each gets its own range of RNG streams.
const FAMILY_ONE_POINT: u64 = 0;
const FAMILY_THREE_POINT: u64 = 1;
const FAMILY_TWO_POINT: u64 = 2;
const FAMILY_CK_OUTER: u64 = 3;
const FAMILY_CK_LATE: u64 = 4;
const FAMILY_CK_EARLY: u64 = 5;

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be finite and >= 0, got {t}")))
    }
}

fn check_state(x: u8) -> Result<()> {
    if x <= 1 {
        Ok(())
    } else {
        Err(Error::invalid(format!("state must be 0 or 1, got {x}")))
    }
}

/// Estimate of `p_even(t) - p_odd(t)` from the jump count parity.
pub fn estimate_parity<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    t: f64,
    n: u64,
    seed: u64,
    exec: &E,
) -> Result<EstimateWithError> {
    check_time(t)?;
    if n < MIN_PARITY_SAMPLES {
        return Err(Error::InsufficientSamples {
            observed: n,
            required: MIN_PARITY_SAMPLES,
        });
    }
    let sums = exec.map_chunks(chunk_count(n), |k| {
        let mut rng = RngStream::new(seed, stream_id(FAMILY_ONE_POINT, k));
        let (mut states, mut counts) = ([0u8], [0u32]);
        let mut sum = 0i64;
        for _ in 0..chunk_len(n, k) {
            observe(spec, &mut rng, 0, &[t], &mut states, &mut counts);
            sum += if counts[0] % 2 == 0 { 1 } else { -1 };
        }
        sum
    });
    let total: i64 = sums.iter().sum();
    Ok(EstimateWithError::from_sums(n, total as f64, n as f64))
}

/// Probability of being in state 0 at `t` when starting there with
/// probability `w0`.
pub fn estimate_occupation<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    w0: f64,
    t: f64,
    n: u64,
    seed: u64,
    exec: &E,
) -> Result<EstimateWithError> {
    check_time(t)?;
    if !(0.0..=1.0).contains(&w0) {
        return Err(Error::invalid(format!("initial probability must lie in [0, 1], got {w0}")));
    }
    if n == 0 {
        return Err(Error::InsufficientSamples { observed: 0, required: 1 });
    }
    let hits = exec.map_chunks(chunk_count(n), |k| {
        let mut rng = RngStream::new(seed, stream_id(FAMILY_ONE_POINT, k));
        let (mut states, mut counts) = ([0u8], [0u32]);
        let mut hits = 0u64;
        for _ in 0..chunk_len(n, k) {
            let initial = u8::from(!rng.bernoulli(w0));
            observe(spec, &mut rng, initial, &[t], &mut states, &mut counts);
            hits += u64::from(states[0] == 0);
        }
        hits
    });
    Ok(EstimateWithError::proportion(hits.iter().sum(), n))
}

/// Empirical jump-count distribution `P(N(t) = k)` for `k = 0..=n_max`.
pub fn estimate_jump_counts<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    t: f64,
    n_max: usize,
    n: u64,
    seed: u64,
    exec: &E,
) -> Result<Vec<EstimateWithError>> {
    check_time(t)?;
    if n == 0 {
        return Err(Error::InsufficientSamples { observed: 0, required: 1 });
    }
    let bins = exec.map_chunks(chunk_count(n), |k| {
        let mut rng = RngStream::new(seed, stream_id(FAMILY_ONE_POINT, k));
        let (mut states, mut counts) = ([0u8], [0u32]);
        let mut bins = vec![0u64; n_max + 1];
        for _ in 0..chunk_len(n, k) {
            observe(spec, &mut rng, 0, &[t], &mut states, &mut counts);
            if let Some(b) = bins.get_mut(counts[0] as usize) {
                *b += 1;
            }
        }
        bins
    });
    let mut total = vec![0u64; n_max + 1];
    for b in &bins {
        for (acc, v) in total.iter_mut().zip(b) {
            *acc += v;
        }
    }
    Ok(total.into_iter().map(|h| EstimateWithError::proportion(h, n)).collect())
}

/// Joint counts `c[a][b]` of (state at `ta`, state at `tb`) over `n`
/// trajectories with a uniformly drawn initial state.
fn pair_counts<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    ta: f64,
    tb: f64,
    n: u64,
    seed: u64,
    family: u64,
    exec: &E,
) -> [[u64; 2]; 2] {
    let parts = exec.map_chunks(chunk_count(n), |k| {
        let mut rng = RngStream::new(seed, stream_id(family, k));
        let (mut states, mut counts) = ([0u8; 2], [0u32; 2]);
        let mut c = [[0u64; 2]; 2];
        for _ in 0..chunk_len(n, k) {
            let initial = u8::from(rng.bernoulli(0.5));
            observe(spec, &mut rng, initial, &[ta, tb], &mut states, &mut counts);
            c[states[0] as usize][states[1] as usize] += 1;
        }
        c
    });
    let mut c = [[0u64; 2]; 2];
    for p in &parts {
        for a in 0..2 {
            for b in 0..2 {
                c[a][b] += p[a][b];
            }
        }
    }
    c
}

fn conditional(hits: u64, events: u64) -> Result<EstimateWithError> {
    if events < MIN_CONDITIONING_EVENTS {
        return Err(Error::InsufficientSamples {
            observed: events,
            required: MIN_CONDITIONING_EVENTS,
        });
    }
    Ok(EstimateWithError::proportion(hits, events))
}

/// Three-point and two-point conditional probabilities, estimated from
/// independent sample families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalEstimate {
    /// `p(x2, t2 | x1, t1; x0, t0)`
    pub three_point: EstimateWithError,
    /// `p(x2, t2 | x1, t1)`
    pub two_point: EstimateWithError,
}

impl ConditionalEstimate {
    pub fn difference(&self) -> f64 {
        self.three_point.value - self.two_point.value
    }

    /// Two-sample z statistic of the difference.
    pub fn z_score(&self) -> f64 {
        self.three_point.z_score(&self.two_point)
    }
}

/// Estimates the conditional probabilities whose equality expresses the
/// Markov property at `times = (t0, t1, t2)` for `states = (x0, x1, x2)`.
/// The initial state is drawn uniformly.
pub fn estimate_conditional<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    times: [f64; 3],
    states: [u8; 3],
    n: u64,
    seed: u64,
    exec: &E,
) -> Result<ConditionalEstimate> {
    let [t0, t1, t2] = times;
    for t in times {
        check_time(t)?;
    }
    for x in states {
        check_state(x)?;
    }
    if !(t0 < t1 && t1 <= t2) {
        return Err(Error::invalid(format!("need t0 < t1 <= t2, got {times:?}")));
    }
    let [x0, x1, x2] = states;
    let parts = exec.map_chunks(chunk_count(n), |k| {
        let mut rng = RngStream::new(seed, stream_id(FAMILY_THREE_POINT, k));
        let (mut s, mut c) = ([0u8; 3], [0u32; 3]);
        let (mut events, mut hits) = (0u64, 0u64);
        for _ in 0..chunk_len(n, k) {
            let initial = u8::from(rng.bernoulli(0.5));
            observe(spec, &mut rng, initial, &times, &mut s, &mut c);
            if s[0] == x0 && s[1] == x1 {
                events += 1;
                hits += u64::from(s[2] == x2);
            }
        }
        (events, hits)
    });
    let events = parts.iter().map(|p| p.0).sum();
    let hits = parts.iter().map(|p| p.1).sum();
    let three_point = conditional(hits, events)?;

    let two_point = if t1 == t2 {
        EstimateWithError {
            value: if x1 == x2 { 1.0 } else { 0.0 },
            std_error: 0.0,
            samples: n,
        }
    } else {
        let c = pair_counts(spec, t1, t2, n, seed, FAMILY_TWO_POINT, exec);
        let row = c[x1 as usize];
        conditional(row[x2 as usize], row[0] + row[1])?
    };
    Ok(ConditionalEstimate { three_point, two_point })
}

/// Largest violation of the Chapman–Kolmogorov equation for the estimated
/// two-time conditionals, with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CkResidual {
    pub residual: f64,
    pub std_error: f64,
    /// `(x_s, x_t)` where the largest violation occurs.
    pub states: (u8, u8),
}

impl CkResidual {
    /// Residual in units of its standard error.
    pub fn z_score(&self) -> f64 {
        if self.std_error == 0.0 {
            if self.residual == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            self.residual / self.std_error
        }
    }
}

/// Row-normalised conditional matrix `P[a][b] = p(b, later | a, earlier)`
/// and the conditioning counts.
fn conditional_matrix(c: [[u64; 2]; 2]) -> Result<([[f64; 2]; 2], [u64; 2])> {
    let mut p = [[0.0; 2]; 2];
    let mut rows = [0u64; 2];
    for a in 0..2 {
        rows[a] = c[a][0] + c[a][1];
        if rows[a] < MIN_CONDITIONING_EVENTS {
            return Err(Error::InsufficientSamples {
                observed: rows[a],
                required: MIN_CONDITIONING_EVENTS,
            });
        }
        for b in 0..2 {
            p[a][b] = c[a][b] as f64 / rows[a] as f64;
        }
    }
    Ok((p, rows))
}

/// Compares `p(x_t, t | x_s, s)` with `Σ_y p(x_t, t | y, τ) p(y, τ | x_s, s)`,
/// each conditional estimated from an independent sample family of size `n`.
pub fn chapman_kolmogorov_residual<E: ChunkExecutor>(
    spec: &SemiMarkovSpec,
    s: f64,
    tau: f64,
    t: f64,
    n: u64,
    seed: u64,
    exec: &E,
) -> Result<CkResidual> {
    for x in [s, tau, t] {
        check_time(x)?;
    }
    if !(s < tau && tau < t) {
        return Err(Error::invalid(format!("need s < tau < t, got ({s}, {tau}, {t})")));
    }
    let (outer, n_outer) = conditional_matrix(pair_counts(spec, s, t, n, seed, FAMILY_CK_OUTER, exec))?;
    let (late, n_late) = conditional_matrix(pair_counts(spec, tau, t, n, seed, FAMILY_CK_LATE, exec))?;
    let (early, n_early) = conditional_matrix(pair_counts(spec, s, tau, n, seed, FAMILY_CK_EARLY, exec))?;
    let var = |p: f64, m: u64| p * (1.0 - p) / m as f64;

    let mut best = CkResidual {
        residual: -1.0,
        std_error: 0.0,
        states: (0, 0),
    };
    for a in 0..2 {
        for b in 0..2 {
            let lhs = outer[a][b];
            let c = early[a][0];
            let (a0, a1) = (late[0][b], late[1][b]);
            let rhs = a0 * c + a1 * (1.0 - c);
            let v = var(lhs, n_outer[a])
                + c * c * var(a0, n_late[0])
                + (1.0 - c) * (1.0 - c) * var(a1, n_late[1])
                + (a0 - a1) * (a0 - a1) * var(c, n_early[a]);
            let r = (lhs - rhs).abs();
            if r > best.residual {
                best = CkResidual {
                    residual: r,
                    std_error: math::sqrt(v),
                    states: (a as u8, b as u8),
                };
            }
        }
    }
    Ok(best)
}

/// Chapman–Kolmogorov residual `max |T(t,s) - T(t,τ) T(τ,s)|` of the one-point
/// propagators; vanishes up to rounding whenever they exist.
pub fn propagator_ck_residual(spec: &SemiMarkovSpec, s: f64, tau: f64, t: f64) -> Result<f64> {
    let direct = spec.intermediate_propagator(s, t)?;
    let late = spec.intermediate_propagator(tau, t)?;
    let early = spec.intermediate_propagator(s, tau)?;
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let composed = late[i][0] * early[0][j] + late[i][1] * early[1][j];
            worst = worst.max((direct[i][j] - composed).abs());
        }
    }
    Ok(worst)
}
