//! Waiting-time families and the scalar functions derived from them.
//!
//! A waiting-time law `f` fixes the survival probability `g`, the hazard rate
//! `h = f/g`, the parity function `q = p_even - p_odd` (probability of an even
//! minus an odd number of jumps), the time-local rates `gamma = -q'/(2q)` and
//! `delta = (h - gamma)/2`, and the jump-count probabilities `p_n`.
//!
//! Every family here has a rational Laplace transform with at most two
//! distinct poles, so `g` and `q` share the shape
//! `exp(-a t) (cosh(b t) + k sinh(b t)/b)` with `b^2` of either sign; see
//! [`DampedMode`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::numerics::{Polynomial, RationalLaplace};
use crate::{Error, Result};

/// Largest jump count for which `p_n` is tabulated.
pub const MAX_JUMP_COUNT: usize = 20;

/// The waiting-time distribution family with its parameters (rates in 1/time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `f(t) = λ exp(-λ t)`
    Exponential { rate: f64 },
    /// Convolution of two exponentials with equal rate: `λ² t exp(-λ t)`.
    ErlangTwo { rate: f64 },
    /// Convolution of two exponentials with rates `λ₁ ≠ λ₂`.
    Hypoexponential { rate1: f64, rate2: f64 },
    /// Convex mixture `μ f₁ + (1 - μ) f₂` of two exponentials.
    Mixture { rate1: f64, rate2: f64, weight: f64 },
}

/// A validated waiting-time distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitingTime {
    family: Family,
}

fn check_rate(name: &str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be a positive finite rate, got {r}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be finite and >= 0, got {t}")))
    }
}

/// `exp(-a t) (cosh(b t) + k sinh(b t)/b)` with `b² = beta_sq` of either sign.
///
/// For `beta_sq < 0` the hyperbolic functions turn into `cos`/`sin` of
/// `t sqrt(-beta_sq)`; at `beta_sq = 0` the bracket is `1 + k t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedMode {
    pub decay: f64,
    pub beta_sq: f64,
    pub kappa: f64,
}

impl DampedMode {
    /// `(exp(-a t) cosh(b t), exp(-a t) sinh(b t)/b)`, overflow-safe.
    fn parts(&self, t: f64) -> (f64, f64) {
        let a = self.decay;
        if self.beta_sq > 0.0 {
            let b = math::sqrt(self.beta_sq);
            if b * t > 1.0 {
                let slow = math::exp(-(a - b) * t);
                let fast = math::exp(-(a + b) * t);
                return (0.5 * (slow + fast), (slow - fast) / (2.0 * b));
            }
        }
        let (c, s) = math::cosh_sinhc(t, self.beta_sq);
        let e = math::exp(-a * t);
        (e * c, e * s)
    }

    pub fn value(&self, t: f64) -> f64 {
        let (c, s) = self.parts(t);
        c + self.kappa * s
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (c, s) = self.parts(t);
        (self.kappa - self.decay) * c + (self.beta_sq - self.decay * self.kappa) * s
    }

    /// Angular frequency of the oscillation, if the mode oscillates.
    pub fn frequency(&self) -> Option<f64> {
        (self.beta_sq < 0.0).then(|| math::sqrt(-self.beta_sq))
    }

    /// Zeros of the mode, `k = 0, 1, ...`; only for oscillating modes.
    pub fn zero(&self, k: usize) -> Option<f64> {
        let w = self.frequency()?;
        Some((core::f64::consts::PI - math::atan2(w, self.kappa) + k as f64 * core::f64::consts::PI) / w)
    }
}

/// Whether the parity function oscillates through zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityClassification {
    Monotone,
    Oscillatory { first_zero: f64 },
}

impl ParityClassification {
    pub fn is_oscillatory(&self) -> bool {
        matches!(self, ParityClassification::Oscillatory { .. })
    }

    pub fn first_zero(&self) -> Option<f64> {
        match *self {
            ParityClassification::Oscillatory { first_zero } => Some(first_zero),
            ParityClassification::Monotone => None,
        }
    }
}

/// Jump-count probabilities `p_0 ..= p_n_max` plus the remaining mass split
/// by parity of the count.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpCounts {
    pub probabilities: Vec<f64>,
    pub tail_even: f64,
    pub tail_odd: f64,
}

impl JumpCounts {
    pub fn tail(&self) -> f64 {
        self.tail_even + self.tail_odd
    }

    /// `p_even - p_odd` including the tail.
    pub fn parity(&self) -> f64 {
        let body: f64 = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
            .sum();
        body + self.tail_even - self.tail_odd
    }
}

impl WaitingTime {
    pub fn exponential(rate: f64) -> Result<Self> {
        check_rate("rate", rate)?;
        Ok(WaitingTime {
            family: Family::Exponential { rate },
        })
    }

    pub fn erlang_two(rate: f64) -> Result<Self> {
        check_rate("rate", rate)?;
        Ok(WaitingTime {
            family: Family::ErlangTwo { rate },
        })
    }

    /// Equal rates are normalised to [`Family::ErlangTwo`].
    pub fn hypoexponential(rate1: f64, rate2: f64) -> Result<Self> {
        check_rate("rate1", rate1)?;
        check_rate("rate2", rate2)?;
        if rate1 == rate2 {
            return Self::erlang_two(rate1);
        }
        Ok(WaitingTime {
            family: Family::Hypoexponential { rate1, rate2 },
        })
    }

    /// Hypoexponential law fixed by `s = λ₁ + λ₂` and the ratio `p/s²` with
    /// `p = λ₁λ₂`; requires `0 < p/s² <= 1/4`.
    pub fn hypoexponential_from_ratio(sum: f64, p_over_s2: f64) -> Result<Self> {
        check_rate("sum", sum)?;
        if !(p_over_s2 > 0.0 && p_over_s2 <= 0.25) {
            return Err(Error::invalid(format!("p/s^2 must lie in (0, 1/4], got {p_over_s2}")));
        }
        let xi = math::sqrt(1.0 - 4.0 * p_over_s2);
        Self::hypoexponential(0.5 * sum * (1.0 + xi), 0.5 * sum * (1.0 - xi))
    }

    pub fn mixture(rate1: f64, rate2: f64, weight: f64) -> Result<Self> {
        check_rate("rate1", rate1)?;
        check_rate("rate2", rate2)?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::invalid(format!("mixing weight must lie in [0, 1], got {weight}")));
        }
        Ok(WaitingTime {
            family: Family::Mixture { rate1, rate2, weight },
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// The two rates `(λ₁, λ₂)`; single-rate families repeat the rate.
    pub fn rates(&self) -> (f64, f64) {
        match self.family {
            Family::Exponential { rate } | Family::ErlangTwo { rate } => (rate, rate),
            Family::Hypoexponential { rate1, rate2 } | Family::Mixture { rate1, rate2, .. } => (rate1, rate2),
        }
    }

    pub fn min_rate(&self) -> f64 {
        let (a, b) = self.rates();
        a.min(b)
    }

    pub fn max_rate(&self) -> f64 {
        let (a, b) = self.rates();
        a.max(b)
    }

    /// `s = λ₁ + λ₂`
    pub fn rate_sum(&self) -> f64 {
        let (a, b) = self.rates();
        a + b
    }

    /// `p = λ₁ λ₂`
    pub fn rate_product(&self) -> f64 {
        let (a, b) = self.rates();
        a * b
    }

    /// `ξ² = 1 - 4p/s²`
    pub fn xi_sq(&self) -> f64 {
        1.0 - 4.0 * self.rate_product() / (self.rate_sum() * self.rate_sum())
    }

    /// `χ² = 1 - 8p/s²`; negative values mean an oscillating parity function.
    pub fn chi_sq(&self) -> f64 {
        1.0 - 8.0 * self.rate_product() / (self.rate_sum() * self.rate_sum())
    }

    /// Mean rate `⟨λ⟩ = μλ₁ + (1 - μ)λ₂` of a mixture (the rate itself otherwise).
    pub fn mean_rate(&self) -> f64 {
        match self.family {
            Family::Mixture { rate1, rate2, weight } => weight * rate1 + (1.0 - weight) * rate2,
            Family::Exponential { rate } | Family::ErlangTwo { rate } => rate,
            Family::Hypoexponential { .. } => self.rate_product() / self.rate_sum(),
        }
    }

    /// `λ̄² = (λ₁ + λ₂ + ⟨λ⟩)² - 8λ₁λ₂` of a mixture; never negative.
    pub fn lambda_bar_sq(&self) -> f64 {
        let (a, b) = self.rates();
        let m = self.mean_rate();
        (a + b + m) * (a + b + m) - 8.0 * a * b
    }

    /// Mean waiting time.
    pub fn mean(&self) -> f64 {
        match self.family {
            Family::Exponential { rate } => 1.0 / rate,
            Family::ErlangTwo { rate } => 2.0 / rate,
            Family::Hypoexponential { rate1, rate2 } => 1.0 / rate1 + 1.0 / rate2,
            Family::Mixture { rate1, rate2, weight } => weight / rate1 + (1.0 - weight) / rate2,
        }
    }

    /// Survival probability as a [`DampedMode`].
    pub fn survival_mode(&self) -> DampedMode {
        match self.family {
            Family::Exponential { rate } => DampedMode { decay: rate, beta_sq: 0.0, kappa: 0.0 },
            Family::ErlangTwo { rate } => DampedMode { decay: rate, beta_sq: 0.0, kappa: rate },
            Family::Hypoexponential { .. } => {
                let s = self.rate_sum();
                DampedMode {
                    decay: 0.5 * s,
                    beta_sq: 0.25 * s * s * self.xi_sq(),
                    kappa: 0.5 * s,
                }
            }
            Family::Mixture { rate1, rate2, weight } => {
                let b = 0.5 * (rate2 - rate1);
                DampedMode {
                    decay: 0.5 * (rate1 + rate2),
                    beta_sq: b * b,
                    kappa: b * (2.0 * weight - 1.0),
                }
            }
        }
    }

    /// Parity function `q` as a [`DampedMode`].
    pub fn parity_mode(&self) -> DampedMode {
        match self.family {
            Family::Exponential { rate } => DampedMode { decay: 2.0 * rate, beta_sq: 0.0, kappa: 0.0 },
            Family::ErlangTwo { rate } => DampedMode {
                decay: rate,
                beta_sq: -rate * rate,
                kappa: rate,
            },
            Family::Hypoexponential { .. } => {
                let s = self.rate_sum();
                DampedMode {
                    decay: 0.5 * s,
                    beta_sq: 0.25 * s * s * self.chi_sq(),
                    kappa: 0.5 * s,
                }
            }
            Family::Mixture { rate1, rate2, .. } => {
                let m = self.mean_rate();
                DampedMode {
                    decay: 0.5 * (rate1 + rate2 + m),
                    beta_sq: 0.25 * self.lambda_bar_sq(),
                    kappa: 0.5 * (rate1 + rate2 - 3.0 * m),
                }
            }
        }
    }

    /// Waiting-time density `f(t)`.
    pub fn density(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.density_unchecked(t))
    }

    pub(crate) fn density_unchecked(&self, t: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => rate * math::exp(-rate * t),
            Family::ErlangTwo { rate } => rate * rate * t * math::exp(-rate * t),
            Family::Hypoexponential { .. } => {
                let (_, s) = self.survival_mode().parts(t);
                self.rate_product() * s
            }
            Family::Mixture { rate1, rate2, weight } => {
                weight * rate1 * math::exp(-rate1 * t) + (1.0 - weight) * rate2 * math::exp(-rate2 * t)
            }
        }
    }

    /// Survival probability `g(t) = 1 - ∫₀ᵗ f`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.survival_unchecked(t))
    }

    pub(crate) fn survival_unchecked(&self, t: f64) -> f64 {
        self.survival_mode().value(t)
    }

    /// Hazard rate `h = f/g`.
    pub fn hazard(&self, t: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => rate,
            Family::ErlangTwo { rate } => rate * rate * t / (1.0 + rate * t),
            _ => self.density_unchecked(t) / self.survival_unchecked(t),
        }
    }

    /// Parity function `q(t) = p_even(t) - p_odd(t)`.
    pub fn parity(&self, t: f64) -> f64 {
        self.parity_mode().value(t)
    }

    /// `dq/dt`
    pub fn parity_derivative(&self, t: f64) -> f64 {
        self.parity_mode().derivative(t)
    }

    /// Time-local rate `γ(t) = -q'(t) / (2 q(t))`.
    pub fn gamma_rate(&self, t: f64) -> Result<f64> {
        if let Family::Exponential { rate } = self.family {
            return Ok(rate);
        }
        let mode = self.parity_mode();
        let q = mode.value(t);
        let g = -0.5 * mode.derivative(t) / q;
        if q == 0.0 || !g.is_finite() {
            return Err(Error::Singularity { time: t });
        }
        Ok(g)
    }

    /// `δ(t) = (h(t) - γ(t)) / 2`, the coefficient of the pure dephasing
    /// channel in the dissipative time-local generator.
    pub fn delta_rate(&self, t: f64) -> Result<f64> {
        if let Family::Exponential { .. } = self.family {
            return Ok(0.0);
        }
        Ok(0.5 * (self.hazard(t) - self.gamma_rate(t)?))
    }

    pub fn classify_parity(&self) -> ParityClassification {
        let mode = self.parity_mode();
        match mode.zero(0) {
            Some(first_zero) => ParityClassification::Oscillatory { first_zero },
            None => ParityClassification::Monotone,
        }
    }

    /// Numerator and denominator of `f̂(u)`.
    fn density_transform_parts(&self) -> (Polynomial, Polynomial) {
        match self.family {
            Family::Exponential { rate } => (Polynomial::constant(rate), Polynomial::linear(rate)),
            Family::ErlangTwo { rate } => (
                Polynomial::constant(rate * rate),
                Polynomial::new(vec![rate * rate, 2.0 * rate, 1.0]),
            ),
            Family::Hypoexponential { .. } => (
                Polynomial::constant(self.rate_product()),
                Polynomial::new(vec![self.rate_product(), self.rate_sum(), 1.0]),
            ),
            Family::Mixture { .. } => (
                Polynomial::new(vec![self.rate_product(), self.mean_rate()]),
                Polynomial::new(vec![self.rate_product(), self.rate_sum(), 1.0]),
            ),
        }
    }

    /// `(D - N)/u`, the numerator shared by `ĝ`, `q̂` and the propagators.
    fn one_minus_density_over_u(&self) -> Polynomial {
        let (n, d) = self.density_transform_parts();
        d.sub(&n)
            .div_by_u(1e-12)
            .expect("f̂(0) = 1 for every family")
    }

    /// `f̂(u)`
    pub fn laplace_density(&self) -> RationalLaplace {
        let (n, d) = self.density_transform_parts();
        RationalLaplace::new(n, d).expect("family transforms are proper")
    }

    /// `ĝ(u) = (1 - f̂(u)) / u`
    pub fn laplace_survival(&self) -> RationalLaplace {
        let (_, d) = self.density_transform_parts();
        RationalLaplace::new(self.one_minus_density_over_u(), d).expect("proper")
    }

    /// `q̂(u) = (1/u) (1 - f̂(u)) / (1 + f̂(u))`
    pub fn laplace_parity(&self) -> RationalLaplace {
        self.laplace_propagator(1.0).expect("π = 1 is valid")
    }

    /// Memory kernel `k̂(u) = f̂(u) / ĝ(u)`.
    pub fn laplace_kernel(&self) -> RationalLaplace {
        let (n, _) = self.density_transform_parts();
        RationalLaplace::new(n, self.one_minus_density_over_u()).expect("proper")
    }

    /// `m̂(u) = ĝ(u) / (1 - (1 - 2π) f̂(u))`, whose inverse is the relaxation
    /// function of the two-state process with jump probability `π`.
    pub fn laplace_propagator(&self, jump_probability: f64) -> Result<RationalLaplace> {
        if !(0.0..=1.0).contains(&jump_probability) {
            return Err(Error::invalid(format!(
                "jump probability must lie in [0, 1], got {jump_probability}"
            )));
        }
        let (n, d) = self.density_transform_parts();
        let c = 1.0 - 2.0 * jump_probability;
        RationalLaplace::new(self.one_minus_density_over_u(), d.sub(&n.scale(c)))
    }

    /// Phase-type representation: `(rates, initial weights, series successor)`.
    fn phases(&self) -> (Vec<f64>, Vec<f64>, Vec<Option<usize>>) {
        match self.family {
            Family::Exponential { rate } => (vec![rate], vec![1.0], vec![None]),
            Family::ErlangTwo { rate } => (vec![rate, rate], vec![1.0, 0.0], vec![Some(1), None]),
            Family::Hypoexponential { rate1, rate2 } => {
                (vec![rate1, rate2], vec![1.0, 0.0], vec![Some(1), None])
            }
            Family::Mixture { rate1, rate2, weight } => {
                (vec![rate1, rate2], vec![weight, 1.0 - weight], vec![None, None])
            }
        }
    }

    /// Jump-count probabilities `p_0(t) ..= p_{n_max}(t)` with the tail split
    /// by parity.
    ///
    /// The counting process is a continuous-time Markov chain on
    /// (jump count, phase of the current waiting time); its transient law is
    /// computed by uniformization, which only sums nonnegative terms.
    pub fn jump_counts(&self, n_max: usize, t: f64) -> Result<JumpCounts> {
        check_time(t)?;
        if n_max > MAX_JUMP_COUNT {
            return Err(Error::Unsupported(format!(
                "jump counts above {MAX_JUMP_COUNT} (requested {n_max})"
            )));
        }
        let (rates, init, next) = self.phases();
        let phases = rates.len();
        // Counts 0..=n_max, then two overflow blocks (even, odd).
        let blocks = n_max + 3;
        let idx = |block: usize, phase: usize| block * phases + phase;
        let after_jump = |n: usize| -> usize {
            if n < n_max {
                n + 1
            } else if n == n_max {
                // n_max + 1 overflows; its parity decides the block.
                if (n_max + 1) % 2 == 0 { n_max + 1 } else { n_max + 2 }
            } else if n == n_max + 1 {
                n_max + 2
            } else {
                n_max + 1
            }
        };
        let uniform = rates.iter().fold(0.0_f64, |m, &r| m.max(r));
        let lt = uniform * t;

        let mut v = vec![0.0; blocks * phases];
        for (k, &w) in init.iter().enumerate() {
            v[idx(0, k)] = w;
        }
        let mut acc = vec![0.0; blocks * phases];
        let steps = (lt + 12.0 * math::sqrt(lt) + 40.0) as usize;
        let log_lt = if lt > 0.0 { math::ln(lt) } else { 0.0 };
        for m in 0..=steps {
            let weight = if lt == 0.0 {
                if m == 0 { 1.0 } else { 0.0 }
            } else {
                math::exp(-lt + m as f64 * log_lt - libm::lgamma(m as f64 + 1.0))
            };
            if weight > 0.0 {
                for (a, x) in acc.iter_mut().zip(&v) {
                    *a += weight * x;
                }
            }
            if m == steps || (lt == 0.0) {
                break;
            }
            let mut w = vec![0.0; blocks * phases];
            for block in 0..blocks {
                for k in 0..phases {
                    let mass = v[idx(block, k)];
                    if mass == 0.0 {
                        continue;
                    }
                    let leave = rates[k] / uniform;
                    w[idx(block, k)] += mass * (1.0 - leave);
                    match next[k] {
                        Some(j) => w[idx(block, j)] += mass * leave,
                        None => {
                            let nb = after_jump(block);
                            for (j, &p0) in init.iter().enumerate() {
                                w[idx(nb, j)] += mass * leave * p0;
                            }
                        }
                    }
                }
            }
            v = w;
        }
        let block_mass = |b: usize| (0..phases).map(|k| acc[idx(b, k)]).sum::<f64>();
        Ok(JumpCounts {
            probabilities: (0..=n_max).map(block_mass).collect(),
            tail_even: block_mass(n_max + 1),
            tail_odd: block_mass(n_max + 2),
        })
    }

    /// Probability `p_n(t)` of exactly `n` jumps in `[0, t]`, `n <= 20`.
    pub fn jump_count_probability(&self, n: usize, t: f64) -> Result<f64> {
        if n == 0 {
            return self.survival(t);
        }
        Ok(self.jump_counts(n, t)?.probabilities[n])
    }
}
