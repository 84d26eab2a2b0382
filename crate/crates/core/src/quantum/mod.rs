//! Qubit dynamics obtained by applying a fixed CPT map at the jump times of
//! a renewal process: `ρ(t) = Σ_n p_n(t) Eⁿ ρ(0)`.
//!
//! Three bistochastic maps are covered. Each yields a transfer matrix that is
//! diagonal in the Pauli basis, with entries built from the survival
//! probability `g` and the parity function `q` of the waiting-time law.

mod distance;
mod evolution;
mod state;
mod transfer;

pub use distance::{trace_distance, trace_distance_derivative, StateDifference};
pub use evolution::{SeriesSolution, MAX_SERIES_ORDER};
pub use state::{Mat2, QubitState};
pub use transfer::{choi, is_cp_map, is_positive_map, ChoiMatrix, TransferMatrix, MAP_TOL};

use alloc::format;

use crate::renewal::WaitingTime;
use crate::{Error, Result};
use state::{SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z};

/// `|q(s)|` below which the intermediate map is treated as undefined.
pub const MIN_INVERTIBLE: f64 = 1e-12;

/// The CPT map applied at each jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapVariant {
    /// `σz ρ σz`
    Dephasing,
    /// `P₁ ρ P₁ + P₀ ρ P₀`, removing coherences.
    Projection,
    /// `σ- ρ σ+ + σ+ ρ σ-`, swapping populations and removing coherences.
    Dissipative,
}

impl MapVariant {
    pub const ALL: [MapVariant; 3] = [MapVariant::Dephasing, MapVariant::Projection, MapVariant::Dissipative];

    pub fn name(&self) -> &'static str {
        match self {
            MapVariant::Dephasing => "dephasing",
            MapVariant::Projection => "projection",
            MapVariant::Dissipative => "dissipative",
        }
    }
}

impl core::str::FromStr for MapVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dephasing" => Ok(MapVariant::Dephasing),
            "projection" => Ok(MapVariant::Projection),
            "dissipative" => Ok(MapVariant::Dissipative),
            _ => Err(Error::invalid(format!("unknown model {s:?}"))),
        }
    }
}

/// Apply the jump map once.
pub fn apply_cpt(variant: MapVariant, rho: &QubitState) -> QubitState {
    QubitState::from_matrix_unchecked(apply_cpt_matrix(variant, rho.matrix()))
}

pub(crate) fn apply_cpt_matrix(variant: MapVariant, m: &Mat2) -> Mat2 {
    match variant {
        MapVariant::Dephasing => state::sandwich(&SIGMA_Z, m, &SIGMA_Z),
        MapVariant::Projection => {
            let up = state::mul(&SIGMA_PLUS, &SIGMA_MINUS);
            let down = state::mul(&SIGMA_MINUS, &SIGMA_PLUS);
            state::add(&state::sandwich(&up, m, &up), &state::sandwich(&down, m, &down))
        }
        MapVariant::Dissipative => state::add(
            &state::sandwich(&SIGMA_MINUS, m, &SIGMA_PLUS),
            &state::sandwich(&SIGMA_PLUS, m, &SIGMA_MINUS),
        ),
    }
}

/// A jump map together with the waiting-time law of the jumps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub variant: MapVariant,
    pub waiting: WaitingTime,
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be finite and >= 0, got {t}")))
    }
}

impl ModelSpec {
    pub fn new(variant: MapVariant, waiting: WaitingTime) -> Self {
        ModelSpec { variant, waiting }
    }

    /// Diagonal of `F(t, 0)` in the basis `(𝟙, σx, σy, σz)/√2`.
    pub fn transfer_diagonal(&self, t: f64) -> [f64; 4] {
        let w = &self.waiting;
        match self.variant {
            MapVariant::Dephasing => {
                let q = w.parity(t);
                [1.0, q, q, 1.0]
            }
            MapVariant::Projection => {
                let g = w.survival_mode().value(t);
                [1.0, g, g, 1.0]
            }
            MapVariant::Dissipative => {
                let g = w.survival_mode().value(t);
                [1.0, g, g, w.parity(t)]
            }
        }
    }

    /// `F(t, 0)`
    pub fn transfer_matrix(&self, t: f64) -> Result<TransferMatrix> {
        check_time(t)?;
        Ok(TransferMatrix::diagonal(self.transfer_diagonal(t)))
    }

    /// `F(t, s) = F(t, 0) F(s, 0)⁻¹`; undefined where `q(s) = 0` for the
    /// models whose transfer matrix contains `q`.
    pub fn intermediate_transfer(&self, s: f64, t: f64) -> Result<TransferMatrix> {
        check_time(s)?;
        if !(t >= s && t.is_finite()) {
            return Err(Error::invalid(format!("need 0 <= s <= t, got s={s}, t={t}")));
        }
        if s == t {
            return Ok(TransferMatrix::identity());
        }
        let ds = self.transfer_diagonal(s);
        let dt = self.transfer_diagonal(t);
        let mut out = [1.0; 4];
        for k in 1..4 {
            if ds[k] == dt[k] && ds[k] == 1.0 {
                continue;
            }
            if ds[k].abs() < MIN_INVERTIBLE {
                return Err(Error::UndefinedPropagator { time: s });
            }
            out[k] = dt[k] / ds[k];
        }
        Ok(TransferMatrix::diagonal(out))
    }

    /// `ρ(t) = Φ(t, 0) ρ(0)` from the closed-form transfer matrix.
    pub fn evolve_closed_form(&self, rho0: &QubitState, t: f64) -> Result<QubitState> {
        Ok(self.transfer_matrix(t)?.apply(rho0))
    }
}
