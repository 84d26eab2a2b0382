use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::state::{self, Mat2, QubitState, SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, ZERO};
use super::{apply_cpt_matrix, MapVariant, ModelSpec};
use crate::numerics::{ode_evolve, OdeOptions};
use crate::renewal::MAX_JUMP_COUNT;
use crate::{Error, Result};

/// Largest explicit order of the jump-count series.
pub const MAX_SERIES_ORDER: usize = MAX_JUMP_COUNT;

/// State from the jump-count series together with the probability mass of
/// the orders beyond `n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSolution {
    pub state: QubitState,
    /// `Σ_{n > n_max} p_n(t)`; these orders are resummed exactly by parity.
    pub tail_mass: f64,
}

/// `A ρ A† - ½{A†A, ρ}`
fn dissipator(a: &Mat2, rho: &Mat2) -> Mat2 {
    let ad = state::dagger(a);
    let ada = state::mul(&ad, a);
    let anti = state::add(&state::mul(&ada, rho), &state::mul(rho, &ada));
    state::sub(&state::sandwich(a, rho, &ad), &state::scale(&anti, Complex64::new(0.5, 0.0)))
}

fn pack(m: &Mat2) -> [f64; 8] {
    [
        m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im,
    ]
}

fn unpack(y: &[f64; 8]) -> Mat2 {
    [
        [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])],
        [Complex64::new(y[4], y[5]), Complex64::new(y[6], y[7])],
    ]
}

impl ModelSpec {
    /// Right-hand side of the time-local master equation at time `t`.
    fn time_local_rhs(&self, t: f64, rho: &Mat2) -> Mat2 {
        let w = &self.waiting;
        let nan = [[Complex64::new(f64::NAN, 0.0); 2]; 2];
        match self.variant {
            MapVariant::Dephasing => {
                let Ok(gamma) = w.gamma_rate(t) else { return nan };
                state::scale(&dissipator(&SIGMA_Z, rho), gamma.into())
            }
            MapVariant::Projection => {
                let up = state::mul(&SIGMA_PLUS, &SIGMA_MINUS);
                let down = state::mul(&SIGMA_MINUS, &SIGMA_PLUS);
                let l = state::add(&dissipator(&up, rho), &dissipator(&down, rho));
                state::scale(&l, w.hazard(t).into())
            }
            MapVariant::Dissipative => {
                let (Ok(gamma), Ok(delta)) = (w.gamma_rate(t), w.delta_rate(t)) else {
                    return nan;
                };
                let jumps = state::add(&dissipator(&SIGMA_PLUS, rho), &dissipator(&SIGMA_MINUS, rho));
                state::add(
                    &state::scale(&jumps, gamma.into()),
                    &state::scale(&dissipator(&SIGMA_Z, rho), delta.into()),
                )
            }
        }
    }

    /// Integrates the time-local master equation from `ρ(0) = rho0` and
    /// returns the state at each (strictly increasing, nonnegative) grid time.
    ///
    /// Fails with [`Error::Singularity`] at the first zero of `q` when the
    /// grid reaches it, since the rate `γ` diverges there.
    pub fn evolve_time_local(&self, rho0: &QubitState, grid: &[f64]) -> Result<Vec<QubitState>> {
        let Some(&last) = grid.last() else {
            return Ok(Vec::new());
        };
        if grid[0] < 0.0 {
            return Err(Error::invalid(format!("times must be >= 0, got {}", grid[0])));
        }
        if self.variant != MapVariant::Projection {
            if let Some(zero) = self.waiting.classify_parity().first_zero() {
                if last >= zero {
                    return Err(Error::Singularity { time: zero });
                }
            }
        }
        let prepend = grid[0] > 0.0;
        let mut times = Vec::with_capacity(grid.len() + 1);
        if prepend {
            times.push(0.0);
        }
        times.extend_from_slice(grid);
        let rhs = |t: f64, y: &[f64; 8]| pack(&self.time_local_rhs(t, &unpack(y)));
        let states = ode_evolve(rhs, pack(rho0.matrix()), &times, OdeOptions::default())?;
        Ok(states
            .iter()
            .skip(usize::from(prepend))
            .map(|y| QubitState::from_matrix_unchecked(unpack(y)))
            .collect())
    }

    /// `Σ_{n <= n_max} p_n(t) Eⁿ ρ(0)`, with the remaining orders added
    /// through `E^{n+2} = Eⁿ` for `n >= 1`, which holds for all three maps.
    pub fn series_solution(&self, rho0: &QubitState, t: f64, n_max: usize) -> Result<SeriesSolution> {
        if n_max > MAX_SERIES_ORDER {
            return Err(Error::Unsupported(format!(
                "series order above {MAX_SERIES_ORDER} (requested {n_max})"
            )));
        }
        let counts = self.waiting.jump_counts(n_max, t)?;
        let mut acc = [[ZERO; 2]; 2];
        let mut term = *rho0.matrix();
        let mut once = term;
        let mut twice = term;
        for (n, p) in counts.probabilities.iter().enumerate() {
            acc = state::add(&acc, &state::scale(&term, (*p).into()));
            term = apply_cpt_matrix(self.variant, &term);
            if n == 0 {
                once = term;
                twice = apply_cpt_matrix(self.variant, &once);
            }
        }
        acc = state::add(&acc, &state::scale(&once, counts.tail_odd.into()));
        acc = state::add(&acc, &state::scale(&twice, counts.tail_even.into()));
        Ok(SeriesSolution {
            state: QubitState::from_matrix_unchecked(acc),
            tail_mass: counts.tail(),
        })
    }
}
