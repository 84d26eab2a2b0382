//! Two-state classical semi-Markov dynamics of the one-point probabilities.
//!
//! States are column vectors `(w, 1 - w)` and maps act from the left, so a
//! stochastic matrix has nonnegative entries and unit column sums. Every
//! propagator of the two-state process with bistochastic jump matrix has the
//! form `½[[1 + m, 1 - m], [1 - m, 1 + m]]`; the scalar `m(t)` is called the
//! relaxation function here.

use alloc::format;
use alloc::vec::Vec;

use crate::numerics::{find_roots, InverseLaplace, IntervalSet};
use crate::renewal::WaitingTime;
use crate::{Error, Result};

/// Plain 2×2 real matrix, row-major.
pub type Matrix2 = [[f64; 2]; 2];

/// Default entrywise tolerance for stochasticity checks.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// `|m(s)|` below which `T(t, s)` is treated as undefined.
pub const MIN_RELAXATION: f64 = 1e-12;

/// A probability vector `(w, 1 - w)` on the two states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityVector {
    w: f64,
}

impl ProbabilityVector {
    pub fn new(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::invalid(format!("probability must lie in [0, 1], got {w}")));
        }
        Ok(ProbabilityVector { w })
    }

    /// From both entries; they must be nonnegative and sum to one.
    pub fn from_entries(p: [f64; 2]) -> Result<Self> {
        if p[0] < 0.0 || p[1] < 0.0 || (p[0] + p[1] - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("not a probability vector: {p:?}")));
        }
        Ok(ProbabilityVector { w: p[0] })
    }

    /// Probability of the first state.
    pub fn first(&self) -> f64 {
        self.w
    }

    pub fn entries(&self) -> [f64; 2] {
        [self.w, 1.0 - self.w]
    }
}

/// Kolmogorov (total variation) distance `½ Σ |p_i - q_i|`.
pub fn kolmogorov_distance(p1: &ProbabilityVector, p2: &ProbabilityVector) -> f64 {
    let (a, b) = (p1.entries(), p2.entries());
    0.5 * ((a[0] - b[0]).abs() + (a[1] - b[1]).abs())
}

/// True iff all entries are `>= -tol` and both column sums are within `tol` of 1.
pub fn is_stochastic(m: &Matrix2, tol: f64) -> bool {
    let entries_ok = m.iter().flatten().all(|&x| x >= -tol);
    let cols_ok = (0..2).all(|j| (m[0][j] + m[1][j] - 1.0).abs() <= tol);
    entries_ok && cols_ok
}

fn symmetric_propagator(m: f64) -> Matrix2 {
    [
        [0.5 * (1.0 + m), 0.5 * (1.0 - m)],
        [0.5 * (1.0 - m), 0.5 * (1.0 + m)],
    ]
}

/// A 2×2 column-stochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StochasticMatrix {
    m: Matrix2,
}

impl StochasticMatrix {
    pub fn new(m: Matrix2) -> Result<Self> {
        if !is_stochastic(&m, STOCHASTIC_TOL) {
            return Err(Error::invalid(format!("not column-stochastic: {m:?}")));
        }
        Ok(StochasticMatrix { m })
    }

    pub fn identity() -> Self {
        StochasticMatrix {
            m: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn apply(&self, p: &ProbabilityVector) -> ProbabilityVector {
        let v = p.entries();
        let w = self.m[0][0] * v[0] + self.m[0][1] * v[1];
        ProbabilityVector { w: w.clamp(0.0, 1.0) }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Relaxation {
    /// `π = 0`: the process never changes state.
    Constant,
    /// `π = 1/2`: `m = g`.
    Survival,
    /// `π = 1`: `m = q`.
    Parity,
    General(InverseLaplace),
}

/// A two-state semi-Markov process: jump matrix
/// `Π = [[1 - π, π], [π, 1 - π]]` and waiting-time law `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiMarkovSpec {
    jump_probability: f64,
    waiting: WaitingTime,
    relaxation: Relaxation,
}

/// Outcome of a P-divisibility scan.
#[derive(Debug, Clone, PartialEq)]
pub struct PDivisibility {
    pub divisible: bool,
    /// Open intervals on which `|m|` grows.
    pub violations: IntervalSet,
}

impl SemiMarkovSpec {
    pub fn new(jump_probability: f64, waiting: WaitingTime) -> Result<Self> {
        if !(0.0..=1.0).contains(&jump_probability) {
            return Err(Error::invalid(format!(
                "jump probability must lie in [0, 1], got {jump_probability}"
            )));
        }
        let relaxation = if jump_probability == 0.0 {
            Relaxation::Constant
        } else if jump_probability == 0.5 {
            Relaxation::Survival
        } else if jump_probability == 1.0 {
            Relaxation::Parity
        } else {
            Relaxation::General(waiting.laplace_propagator(jump_probability)?.inverse()?)
        };
        Ok(SemiMarkovSpec {
            jump_probability,
            waiting,
            relaxation,
        })
    }

    pub fn jump_probability(&self) -> f64 {
        self.jump_probability
    }

    pub fn waiting_time(&self) -> &WaitingTime {
        &self.waiting
    }

    /// The bistochastic jump matrix `Π`.
    pub fn jump_matrix(&self) -> Matrix2 {
        let p = self.jump_probability;
        [[1.0 - p, p], [p, 1.0 - p]]
    }

    /// Semi-Markov matrix `Q(τ) = Π f(τ)`.
    pub fn semi_markov_matrix(&self, tau: f64) -> Result<Matrix2> {
        let f = self.waiting.density(tau)?;
        let p = self.jump_matrix();
        Ok([[p[0][0] * f, p[0][1] * f], [p[1][0] * f, p[1][1] * f]])
    }

    /// Relaxation function `m(t)`, with `T(t, 0) = ½[[1 + m, 1 - m], [1 - m, 1 + m]]`.
    pub fn relaxation(&self, t: f64) -> f64 {
        match &self.relaxation {
            Relaxation::Constant => 1.0,
            Relaxation::Survival => self.waiting.survival_mode().value(t),
            Relaxation::Parity => self.waiting.parity(t),
            Relaxation::General(inv) => inv.eval(t),
        }
    }

    /// `dm/dt`
    pub fn relaxation_derivative(&self, t: f64) -> f64 {
        match &self.relaxation {
            Relaxation::Constant => 0.0,
            Relaxation::Survival => self.waiting.survival_mode().derivative(t),
            Relaxation::Parity => self.waiting.parity_derivative(t),
            Relaxation::General(inv) => inv.derivative(t),
        }
    }

    /// Largest angular frequency present in `m`, if it oscillates.
    fn oscillation_frequency(&self) -> Option<f64> {
        match &self.relaxation {
            Relaxation::Constant | Relaxation::Survival => None,
            Relaxation::Parity => self.waiting.parity_mode().frequency(),
            Relaxation::General(inv) => inv
                .poles()
                .map(|(p, _)| p.im.abs())
                .filter(|w| *w > 0.0)
                .reduce(f64::max),
        }
    }

    /// Grid step used to bracket zeros of `m` and `dm/dt`.
    pub fn scan_step(&self) -> f64 {
        let mut step = 0.01 / self.waiting.max_rate();
        if let Some(w) = self.oscillation_frequency() {
            step = step.min(2.0 * core::f64::consts::PI / w / 40.0);
        }
        step
    }

    /// `T(t, 0)`.
    pub fn propagator_from_origin(&self, t: f64) -> Result<StochasticMatrix> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
        }
        let m = self.relaxation(t).clamp(-1.0, 1.0);
        Ok(StochasticMatrix {
            m: symmetric_propagator(m),
        })
    }

    /// `T(t, s) = T(t, 0) T(s, 0)⁻¹`, entries `½(1 ± m(t)/m(s))`; not
    /// necessarily stochastic.
    pub fn intermediate_propagator(&self, s: f64, t: f64) -> Result<Matrix2> {
        if !(s >= 0.0 && t >= s && t.is_finite()) {
            return Err(Error::invalid(format!("need 0 <= s <= t, got s={s}, t={t}")));
        }
        if s == t {
            return Ok([[1.0, 0.0], [0.0, 1.0]]);
        }
        let ms = self.relaxation(s);
        if ms.abs() < MIN_RELAXATION {
            return Err(Error::UndefinedPropagator { time: s });
        }
        Ok(symmetric_propagator(self.relaxation(t) / ms))
    }

    /// Checks whether every `T(t, s)` with `s <= t <= t_max` is stochastic,
    /// i.e. whether `|m|` never grows; reports the intervals where it does.
    pub fn p_divisible(&self, t_max: f64, grid_n: usize) -> Result<PDivisibility> {
        if grid_n < 2 {
            return Err(Error::invalid("grid needs at least two points"));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::invalid(format!("t_max must be positive, got {t_max}")));
        }
        let step = self.scan_step().min(t_max / (grid_n - 1) as f64);
        let mut breaks = find_roots(|t| self.relaxation(t), t_max, step)?;
        breaks.extend(find_roots(|t| self.relaxation_derivative(t), t_max, step)?);
        breaks.sort_by(f64::total_cmp);
        let violations = IntervalSet::from_breakpoints(&breaks, t_max, |t| {
            self.relaxation(t) * self.relaxation_derivative(t) > 0.0
        });
        Ok(PDivisibility {
            divisible: violations.is_empty(),
            violations,
        })
    }

    /// `w(t) = ½[1 - m(t) + 2 m(t) w(0)]` on `grid`, evaluated as `½ + m(t)(w(0) - ½)`.
    pub fn trajectory(&self, w0: f64, grid: &[f64]) -> Result<Vec<f64>> {
        ProbabilityVector::new(w0)?;
        grid.iter()
            .map(|&t| {
                if !(t >= 0.0) {
                    return Err(Error::invalid(format!("time must be >= 0, got {t}")));
                }
                let m = self.relaxation(t);
                Ok(0.5 + m * (w0 - 0.5))
            })
            .collect()
    }
}
