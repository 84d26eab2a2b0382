use alloc::vec::Vec;

use super::RngStream;
use crate::classical::SemiMarkovSpec;
use crate::renewal::Family;
use crate::{Error, Result};

/// One realisation of the process on `[0, horizon]`.
///
/// `states[0]` is the initial state; `states[k]` is the state entered at
/// `jump_times[k - 1]`. A jump may leave the state unchanged when the jump
/// probability is below one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub jump_times: Vec<f64>,
    pub states: Vec<u8>,
    pub horizon: f64,
    pub seed: u64,
    pub stream: u64,
}

impl TrajectorySample {
    /// Number of jumps in `[0, t]`.
    pub fn jumps_by(&self, t: f64) -> usize {
        self.jump_times.partition_point(|&s| s <= t)
    }

    /// State at `t`: the last state entered at or before `t`.
    pub fn state_at(&self, t: f64) -> u8 {
        self.states[self.jumps_by(t)]
    }
}

pub(crate) fn waiting_time(spec: &SemiMarkovSpec, rng: &mut RngStream) -> f64 {
    match *spec.waiting_time().family() {
        Family::Exponential { rate } => rng.exponential(rate),
        Family::ErlangTwo { rate } => rng.exponential(rate) + rng.exponential(rate),
        Family::Hypoexponential { rate1, rate2 } => rng.exponential(rate1) + rng.exponential(rate2),
        Family::Mixture { rate1, rate2, weight } => {
            let rate = if rng.bernoulli(weight) { rate1 } else { rate2 };
            rng.exponential(rate)
        }
    }
}

/// Walks one trajectory and records state and jump count at each of the
/// sorted `queries`.
pub(crate) fn observe(
    spec: &SemiMarkovSpec,
    rng: &mut RngStream,
    initial: u8,
    queries: &[f64],
    states: &mut [u8],
    counts: &mut [u32],
) {
    let pi = spec.jump_probability();
    let mut state = initial;
    let mut jumps = 0u32;
    let mut next = waiting_time(spec, rng);
    for (k, &t) in queries.iter().enumerate() {
        while next <= t {
            jumps += 1;
            if rng.bernoulli(pi) {
                state ^= 1;
            }
            next += waiting_time(spec, rng);
        }
        states[k] = state;
        counts[k] = jumps;
    }
}

/// Samples a trajectory with the initial state drawn uniformly.
pub fn sample_trajectory(spec: &SemiMarkovSpec, horizon: f64, seed: u64, stream: u64) -> Result<TrajectorySample> {
    let mut rng = RngStream::new(seed, stream);
    let initial = u8::from(rng.bernoulli(0.5));
    walk(spec, horizon, seed, stream, initial, rng)
}

/// Samples a trajectory from the given initial state (0 or 1).
pub fn sample_trajectory_from(
    spec: &SemiMarkovSpec,
    initial: u8,
    horizon: f64,
    seed: u64,
    stream: u64,
) -> Result<TrajectorySample> {
    if initial > 1 {
        return Err(Error::invalid("state must be 0 or 1"));
    }
    walk(spec, horizon, seed, stream, initial, RngStream::new(seed, stream))
}

fn walk(
    spec: &SemiMarkovSpec,
    horizon: f64,
    seed: u64,
    stream: u64,
    initial: u8,
    mut rng: RngStream,
) -> Result<TrajectorySample> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(alloc::format!("horizon must be positive, got {horizon}")));
    }
    let pi = spec.jump_probability();
    let mut jump_times = Vec::new();
    let mut states = alloc::vec![initial];
    let mut state = initial;
    let mut t = waiting_time(spec, &mut rng);
    while t <= horizon {
        if rng.bernoulli(pi) {
            state ^= 1;
        }
        jump_times.push(t);
        states.push(state);
        t += waiting_time(spec, &mut rng);
    }
    Ok(TrajectorySample {
        jump_times,
        states,
        horizon,
        seed,
        stream,
    })
}
