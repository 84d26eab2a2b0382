use num_complex::Complex64;

use super::state::{self, QubitState};
use super::{MapVariant, ModelSpec};
use crate::math;
use crate::numerics::hermitian_eigenvalues;
use crate::{Error, Result};

/// Population and coherence differences `Δp = ρ¹₁₁ - ρ²₁₁`, `Δc = ρ¹₁₀ - ρ²₁₀`
/// of a pair of qubit states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDifference {
    pub population: f64,
    pub coherence: Complex64,
}

impl StateDifference {
    pub fn between(rho1: &QubitState, rho2: &QubitState) -> Self {
        StateDifference {
            population: rho1.excited_population() - rho2.excited_population(),
            coherence: rho1.coherence() - rho2.coherence(),
        }
    }

    /// Trace distance `√(Δp² + |Δc|²)` of the pair.
    pub fn distance(&self) -> f64 {
        math::hypot(self.population, self.coherence.norm())
    }
}

/// `½‖ρ₁ - ρ₂‖₁` from the eigenvalues of the difference.
pub fn trace_distance(rho1: &QubitState, rho2: &QubitState) -> f64 {
    let diff = state::sub(rho1.matrix(), rho2.matrix());
    match hermitian_eigenvalues(&diff) {
        Ok(e) => 0.5 * (e[0].abs() + e[1].abs()),
        Err(_) => StateDifference::between(rho1, rho2).distance(),
    }
}

/// Time derivative of the trace distance between the evolved pair
/// `Φ(t,0)ρ¹`, `Φ(t,0)ρ²`, in closed form.
pub fn trace_distance_derivative(model: &ModelSpec, rho1: &QubitState, rho2: &QubitState, t: f64) -> Result<f64> {
    let d = StateDifference::between(rho1, rho2);
    let p2 = d.population * d.population;
    let c2 = d.coherence.norm_sqr();
    let w = &model.waiting;
    let (num, den) = match model.variant {
        MapVariant::Dephasing => {
            let q = w.parity(t);
            (c2 * q * w.parity_derivative(t), math::sqrt(p2 + c2 * q * q))
        }
        MapVariant::Projection => {
            let g = w.survival_mode().value(t);
            let f = w.density(t)?;
            (-c2 * g * f, math::sqrt(p2 + c2 * g * g))
        }
        MapVariant::Dissipative => {
            let q = w.parity(t);
            let g = w.survival_mode().value(t);
            let f = w.density(t)?;
            (p2 * q * w.parity_derivative(t) - c2 * g * f, math::sqrt(q * q * p2 + c2 * g * g))
        }
    };
    if den == 0.0 {
        return Err(Error::numerical(
            "trace_distance_derivative",
            alloc::format!("trace distance vanishes at t = {t}; derivative undefined"),
        ));
    }
    Ok(num / den)
}
