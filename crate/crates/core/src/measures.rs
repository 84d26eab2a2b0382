//! Non-Markovianity measures for the qubit models.
//!
//! The trace-distance measure sums the growth of the distance between a pair
//! of evolved states; the divisibility measure integrates the departure of
//! the intermediate maps from complete positivity. Both reduce to sums of
//! logarithmic or absolute increments of `q` and `g` over the regions where
//! those functions grow in modulus, so the regions are located from the
//! closed-form zeros of the damped modes rather than by sampling.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::math;
use crate::montecarlo::ChunkExecutor;
use crate::numerics::{find_roots, IntervalSet};
use crate::quantum::{
    choi, is_cp_map, is_positive_map, MapVariant, ModelSpec, QubitState, StateDifference, MAP_TOL,
    MIN_INVERTIBLE,
};
use crate::renewal::{DampedMode, Family, WaitingTime};
use crate::{Error, Result};

/// Rounds of local coordinate refinement after the coarse pair grid.
pub const SEARCH_ROUNDS: usize = 3;

/// Step reduction between refinement rounds.
pub const SEARCH_SHRINK: f64 = 4.0;

/// Smallest accepted pair-grid density.
pub const MIN_GRID_DENSITY: usize = 8;

/// Smallest accepted time grid for [`classify`].
pub const MIN_CLASSIFY_GRID: usize = 100;

/// Default horizon `40 / λ_min`.
pub fn default_horizon(w: &WaitingTime) -> f64 {
    40.0 / w.min_rate()
}

/// One term of a measure: the increment collected on `(start, end)`.
///
/// The analytic remainder beyond the horizon is reported with
/// `end = f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

impl Contribution {
    pub fn is_tail(&self) -> bool {
        self.end.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Finite(f64),
    Infinite,
}

/// Value of a measure together with how it was assembled.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureValue {
    pub measure: Measure,
    /// Times where `q` vanishes; nonempty exactly when the measure is infinite.
    pub witnesses: Vec<f64>,
    pub breakdown: Vec<Contribution>,
}

impl MeasureValue {
    /// Finite value equal to the sum of `breakdown`.
    pub fn finite(breakdown: Vec<Contribution>) -> Self {
        let total = breakdown.iter().fold(0.0, |acc, c| acc + c.value);
        MeasureValue {
            measure: Measure::Finite(total),
            witnesses: Vec::new(),
            breakdown,
        }
    }

    pub fn infinite(witnesses: Vec<f64>) -> Result<Self> {
        if witnesses.is_empty() {
            return Err(Error::Consistency("an infinite measure needs a witness time".into()));
        }
        Ok(MeasureValue {
            measure: Measure::Infinite,
            witnesses,
            breakdown: Vec::new(),
        })
    }

    pub fn zero() -> Self {
        MeasureValue::finite(Vec::new())
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self.measure {
            Measure::Finite(v) => Some(v),
            Measure::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.measure == Measure::Infinite
    }
}

/// Zeros in `(0, t_end)` of `exp(-a t) (c C(t) + s S(t))`, where `C` and `S`
/// are the cosh and sinhc parts of `mode`.
fn bracket_zeros(mode: &DampedMode, c: f64, s: f64, t_end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if c == 0.0 && s == 0.0 {
        return out;
    }
    if let Some(w) = mode.frequency() {
        // c cos(wt) + (s/w) sin(wt) = R cos(wt - φ)
        let mut phase = math::atan2(s / w, c) + FRAC_PI_2;
        if phase >= PI {
            phase -= PI;
        } else if phase < 0.0 {
            phase += PI;
        }
        let mut k = 0usize;
        loop {
            let t = (phase + k as f64 * PI) / w;
            k += 1;
            if t <= 1e-12 / w {
                continue;
            }
            if t >= t_end {
                break;
            }
            out.push(t);
        }
    } else if mode.beta_sq == 0.0 {
        if s != 0.0 {
            let t = -c / s;
            if t > 0.0 && t < t_end {
                out.push(t);
            }
        }
    } else {
        let b = math::sqrt(mode.beta_sq);
        let (grow, fall) = (c + s / b, c - s / b);
        if grow != 0.0 {
            let r = -fall / grow;
            if r > 1.0 {
                let t = math::ln(r) / (2.0 * b);
                if t < t_end {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn mode_zeros(mode: &DampedMode, t_end: f64) -> Vec<f64> {
    bracket_zeros(mode, 1.0, mode.kappa, t_end)
}

fn mode_derivative_zeros(mode: &DampedMode, t_end: f64) -> Vec<f64> {
    bracket_zeros(
        mode,
        mode.kappa - mode.decay,
        mode.beta_sq - mode.decay * mode.kappa,
        t_end,
    )
}

/// Intervals of `(0, t_end)` where `|mode|` strictly increases.
fn growth_region(mode: &DampedMode, t_end: f64) -> IntervalSet {
    let mut breaks = mode_zeros(mode, t_end);
    breaks.extend(mode_derivative_zeros(mode, t_end));
    breaks.sort_by(f64::total_cmp);
    IntervalSet::from_breakpoints(&breaks, t_end, |t| mode.value(t) * mode.derivative(t) > 0.0)
}

/// Ω₊: maximal intervals of `(0, t_max)` on which `|q|` strictly increases.
pub fn omega_plus(w: &WaitingTime, t_max: f64) -> IntervalSet {
    if !(t_max > 0.0) {
        return IntervalSet::empty();
    }
    growth_region(&w.parity_mode(), t_max)
}

/// Zeros of `q` in `(0, t_max)`.
pub fn parity_zeros(w: &WaitingTime, t_max: f64) -> Vec<f64> {
    mode_zeros(&w.parity_mode(), t_max)
}

fn check_horizon(t_max: f64) -> Result<()> {
    if t_max > 0.0 && t_max.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("horizon must be positive and finite, got {t_max}")))
    }
}

/// Trace-distance measure with the pair of initial states attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpMeasure {
    pub value: MeasureValue,
    pub pair: (QubitState, QubitState),
}

/// Pair maximizing the distance growth: antipodal equatorial states when the
/// coherences carry `q`, the two poles when the populations do.
pub fn optimal_pair(variant: MapVariant) -> (QubitState, QubitState) {
    match variant {
        MapVariant::Dephasing => (QubitState::plus(), QubitState::minus()),
        MapVariant::Projection | MapVariant::Dissipative => (QubitState::excited(), QubitState::ground()),
    }
}

/// Trace-distance measure `N(Φ) = Σ_{Ω₊} (|q(b)| - |q(a)|)`.
///
/// The sum runs over Ω₊ up to the first extremum of `q` past `t_max`; for an
/// oscillating `q` the remaining intervals, whose gains shrink by
/// `exp(-aπ/ω)` per half period, are added as a geometric series.
pub fn blp_measure(model: &ModelSpec, t_max: f64) -> Result<BlpMeasure> {
    check_horizon(t_max)?;
    let pair = optimal_pair(model.variant);
    if model.variant == MapVariant::Projection {
        return Ok(BlpMeasure { value: MeasureValue::zero(), pair });
    }
    let mode = model.waiting.parity_mode();
    let mut t_end = t_max;
    let mut tail = None;
    if let Some(w) = mode.frequency() {
        let half = PI / w;
        let extrema = mode_derivative_zeros(&mode, t_max + 2.0 * half);
        if let Some(&t_ext) = extrema.iter().find(|&&t| t >= t_max) {
            t_end = t_ext;
            let r = math::exp(-mode.decay * half);
            tail = Some(Contribution {
                start: t_ext,
                end: f64::INFINITY,
                value: mode.value(t_ext).abs() * r / (1.0 - r),
            });
        }
    } else {
        let mut breaks = mode_zeros(&mode, f64::INFINITY);
        breaks.extend(mode_derivative_zeros(&mode, f64::INFINITY));
        if let Some(last) = breaks.into_iter().reduce(f64::max) {
            t_end = t_end.max(last);
        }
    }
    let mut breakdown: Vec<Contribution> = growth_region(&mode, t_end)
        .iter()
        .map(|(a, b)| Contribution {
            start: a,
            end: b,
            value: mode.value(b).abs() - mode.value(a).abs(),
        })
        .collect();
    breakdown.extend(tail);
    Ok(BlpMeasure {
        value: MeasureValue::finite(breakdown),
        pair,
    })
}

/// Bloch angles `(θ₁, φ₁, θ₂, φ₂)` of a pure-state pair.
pub type PairAngles = [f64; 4];

/// Result of the explicit maximization over pure-state pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlpSearch {
    pub value: f64,
    pub angles: PairAngles,
    pub pair: (QubitState, QubitState),
}

/// Axis factors `(x, ẋ, z, ż)`: the coherences scale with `x`, the
/// population difference with `z`.
fn axis_factors(model: &ModelSpec, t: f64) -> [f64; 4] {
    let w = &model.waiting;
    let q = w.parity_mode();
    let g = w.survival_mode();
    match model.variant {
        MapVariant::Dephasing => [q.value(t), q.derivative(t), 1.0, 0.0],
        MapVariant::Projection => [g.value(t), g.derivative(t), 1.0, 0.0],
        MapVariant::Dissipative => [g.value(t), g.derivative(t), q.value(t), q.derivative(t)],
    }
}

fn search_step(w: &WaitingTime) -> f64 {
    let mut step = 0.02 / w.max_rate();
    if let Some(om) = w.parity_mode().frequency() {
        step = step.min(2.0 * PI / om / 40.0);
    }
    step
}

/// `∫_{σ>0} σ dt` on `[0, t_max]` for the pair with population difference
/// `Δp` and coherence modulus `|Δc|`: positive increments of the trace
/// distance between the zeros of its derivative.
fn pair_growth(model: &ModelSpec, dp: f64, dc: f64, t_max: f64, step: f64) -> f64 {
    let (p2, c2) = (dp * dp, dc * dc);
    if p2 + c2 == 0.0 {
        return 0.0;
    }
    let distance = |t: f64| {
        let [x, _, z, _] = axis_factors(model, t);
        math::sqrt(p2 * z * z + c2 * x * x)
    };
    let slope = |t: f64| {
        let [x, dx, z, dz] = axis_factors(model, t);
        p2 * z * dz + c2 * x * dx
    };
    let mut edges = find_roots(slope, t_max, step).unwrap_or_default();
    edges.insert(0, 0.0);
    edges.push(t_max);
    edges
        .windows(2)
        .map(|w| (distance(w[1]) - distance(w[0])).max(0.0))
        .sum()
}

fn angle_objective(model: &ModelSpec, a: &PairAngles, t_max: f64, step: f64) -> f64 {
    let d = StateDifference::between(&QubitState::pure(a[0], a[1]), &QubitState::pure(a[2], a[3]));
    pair_growth(model, d.population, d.coherence.norm(), t_max, step)
}

/// Trace-distance measure by direct maximization over pairs of pure states.
///
/// A grid of `grid_density + 1` polar and `grid_density` azimuthal angles per
/// state is scanned (one chunk per first polar angle, reduced in order), then
/// the best point is refined coordinate-wise for [`SEARCH_ROUNDS`] rounds with
/// the step divided by [`SEARCH_SHRINK`] each round. The growth is integrated
/// up to `t_max` without a tail.
pub fn blp_measure_search<E: ChunkExecutor>(
    model: &ModelSpec,
    t_max: f64,
    grid_density: usize,
    executor: &E,
) -> Result<BlpSearch> {
    check_horizon(t_max)?;
    if grid_density < MIN_GRID_DENSITY {
        return Err(Error::invalid(format!(
            "grid density must be at least {MIN_GRID_DENSITY}, got {grid_density}"
        )));
    }
    let g = grid_density;
    let step = search_step(&model.waiting);
    let theta = |i: usize| PI * i as f64 / g as f64;
    let phi = |j: usize| 2.0 * PI * j as f64 / g as f64;

    let partial = executor.map_chunks((g + 1) as u64, |i1| {
        let mut best = (f64::NEG_INFINITY, [0.0; 4]);
        for j1 in 0..g {
            for i2 in 0..=g {
                for j2 in 0..g {
                    let a = [theta(i1 as usize), phi(j1), theta(i2), phi(j2)];
                    let v = angle_objective(model, &a, t_max, step);
                    if v > best.0 {
                        best = (v, a);
                    }
                }
            }
        }
        best
    });
    let (mut value, mut angles) = partial
        .into_iter()
        .reduce(|acc, x| if x.0 > acc.0 { x } else { acc })
        .expect("at least one chunk");

    let mut delta = [PI / g as f64, 2.0 * PI / g as f64, PI / g as f64, 2.0 * PI / g as f64];
    for _ in 0..SEARCH_ROUNDS {
        loop {
            let mut moved = false;
            for k in 0..4 {
                for sign in [1.0, -1.0] {
                    let mut trial = angles;
                    trial[k] += sign * delta[k];
                    let v = angle_objective(model, &trial, t_max, step);
                    if v > value {
                        value = v;
                        angles = trial;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        for d in &mut delta {
            *d /= SEARCH_SHRINK;
        }
    }
    Ok(BlpSearch {
        value,
        angles,
        pair: (QubitState::pure(angles[0], angles[1]), QubitState::pure(angles[2], angles[3])),
    })
}

fn log_increments(region: &IntervalSet, f: impl Fn(f64) -> f64) -> Vec<Contribution> {
    region
        .iter()
        .map(|(a, b)| Contribution {
            start: a,
            end: b,
            value: f(b) - f(a),
        })
        .collect()
}

/// Divisibility measure `I(Φ) = ∫ 𝔤(t) dt` on `(0, t_max)`.
///
/// A zero of `q` inside the window makes the intermediate maps undefined
/// there and the measure infinite. Otherwise each negative stretch of a
/// time-local rate contributes a logarithmic increment: `ln|q|` where
/// `γ < 0`, `ln g - ½ ln|q|` where `δ < 0` (dissipative model only). The two
/// stretches must be disjoint; overlap is reported as a consistency error.
/// When `δ` stays negative the value grows with `t_max`.
pub fn rhp_measure(model: &ModelSpec, t_max: f64) -> Result<MeasureValue> {
    check_horizon(t_max)?;
    let w = &model.waiting;
    if model.variant == MapVariant::Projection {
        let region = growth_region(&w.survival_mode(), t_max);
        return Ok(MeasureValue::finite(log_increments(&region, |t| {
            math::ln(w.survival_mode().value(t))
        })));
    }
    let zeros = parity_zeros(w, t_max);
    if !zeros.is_empty() {
        return MeasureValue::infinite(zeros);
    }
    let q = w.parity_mode();
    let ln_q = |t: f64| math::ln(q.value(t).abs());
    let gamma_region = omega_plus(w, t_max);
    let mut breakdown = log_increments(&gamma_region, ln_q);
    if model.variant == MapVariant::Dissipative {
        let delta_region = negative_delta_region(w, t_max)?;
        for (a, b) in delta_region.iter() {
            if gamma_region.iter().any(|(c, d)| a < d && c < b) {
                return Err(Error::Consistency(format!(
                    "γ and δ are both negative on part of ({a}, {b})"
                )));
            }
        }
        let g = w.survival_mode();
        breakdown.extend(log_increments(&delta_region, |t| math::ln(g.value(t)) - 0.5 * ln_q(t)));
        breakdown.sort_by(|x, y| x.start.total_cmp(&y.start));
    }
    Ok(MeasureValue::finite(breakdown))
}

/// `{δ < 0}` on `(0, t_max)` for a `q` without zeros there, from the sign of
/// `4 q g δ = 2 q f + q̇ g`.
fn negative_delta_region(w: &WaitingTime, t_max: f64) -> Result<IntervalSet> {
    if let Family::Exponential { .. } = w.family() {
        return Ok(IntervalSet::empty());
    }
    let q = w.parity_mode();
    let g = w.survival_mode();
    let sign_q = q.value(0.5 * t_max).signum();
    let scaled = |t: f64| sign_q * (2.0 * q.value(t) * w.density_unchecked(t) + q.derivative(t) * g.value(t));
    let breaks = find_roots(scaled, t_max, search_step(w))?;
    Ok(IntervalSet::from_breakpoints(&breaks, t_max, |t| scaled(t) < 0.0))
}

/// Analytic rate `𝔤(t) = lim (‖Choi(Φ(t+ε, t))‖₁ - 1)/ε`.
pub fn rhp_rate(model: &ModelSpec, t: f64) -> Result<f64> {
    let w = &model.waiting;
    match model.variant {
        MapVariant::Projection => Ok(0.0),
        MapVariant::Dephasing => Ok((-2.0 * w.gamma_rate(t)?).max(0.0)),
        MapVariant::Dissipative => {
            let gamma = w.gamma_rate(t)?;
            let delta = w.delta_rate(t)?;
            Ok((-2.0 * gamma).max(0.0) + (-2.0 * delta).max(0.0))
        }
    }
}

/// Finite-difference estimate `(‖Choi(Φ(t+ε, t))‖₁ - 1)/ε` with the Choi
/// matrix normalized to unit trace.
pub fn rhp_g_numeric(model: &ModelSpec, t: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("ε must be positive, got {eps}")));
    }
    if model.variant != MapVariant::Projection {
        let q = model.waiting.parity_mode();
        let (qa, qb) = (q.value(t), q.value(t + eps));
        if qa.abs() < MIN_INVERTIBLE || qa.signum() != qb.signum() {
            let time = parity_zeros(&model.waiting, t + eps)
                .into_iter()
                .find(|&z| z >= t)
                .unwrap_or(t);
            return Err(Error::Singularity { time });
        }
    }
    let f = model
        .intermediate_transfer(t, t + eps)
        .map_err(|e| match e {
            Error::UndefinedPropagator { time } => Error::Singularity { time },
            other => other,
        })?;
    Ok((choi(&f)?.trace_norm()? - 1.0) / eps)
}

/// Three-way divisibility class; witnesses are `(s, t)` of a failing map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivisibilityClass {
    CpDivisible,
    PDivisibleOnly { not_cp: (f64, f64) },
    Indivisible { not_positive: (f64, f64), not_cp: (f64, f64) },
}

impl DivisibilityClass {
    pub fn name(&self) -> &'static str {
        match self {
            DivisibilityClass::CpDivisible => "cp-divisible",
            DivisibilityClass::PDivisibleOnly { .. } => "p-divisible-only",
            DivisibilityClass::Indivisible { .. } => "indivisible",
        }
    }
}

/// Checks every intermediate map `Φ(t_j, t_i)`, `i < j`, on a uniform grid of
/// `grid_n` points over `[0, t_max]`. Maps starting where the transfer
/// matrix is not invertible are skipped.
pub fn classify(model: &ModelSpec, t_max: f64, grid_n: usize) -> Result<DivisibilityClass> {
    check_horizon(t_max)?;
    if grid_n < MIN_CLASSIFY_GRID {
        return Err(Error::invalid(format!(
            "grid needs at least {MIN_CLASSIFY_GRID} points, got {grid_n}"
        )));
    }
    let grid: Vec<f64> = (0..grid_n)
        .map(|k| t_max * k as f64 / (grid_n - 1) as f64)
        .collect();
    let mut not_positive = None;
    let mut not_cp = None;
    for (i, &s) in grid.iter().enumerate() {
        for &t in &grid[i + 1..] {
            let f = match model.intermediate_transfer(s, t) {
                Ok(f) => f,
                Err(Error::UndefinedPropagator { .. }) => break,
                Err(e) => return Err(e),
            };
            if not_cp.is_none() && !is_cp_map(&f, MAP_TOL)? {
                not_cp = Some((s, t));
            }
            if not_positive.is_none() && !is_positive_map(&f, MAP_TOL) {
                not_positive = Some((s, t));
            }
            if not_positive.is_some() {
                break;
            }
        }
        if not_positive.is_some() {
            break;
        }
    }
    Ok(match (not_positive, not_cp) {
        (Some(p), Some(c)) => DivisibilityClass::Indivisible { not_positive: p, not_cp: c },
        (Some(_), None) => {
            return Err(Error::Consistency("a non-positive map passed the CP test".into()));
        }
        (None, Some(c)) => DivisibilityClass::PDivisibleOnly { not_cp: c },
        (None, None) => DivisibilityClass::CpDivisible,
    })
}
