use alloc::format;

use num_complex::Complex64;

use super::state::{self, Mat2, QubitState, IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, ZERO};
use crate::math;
use crate::numerics::{hermitian_eigenvalues, CMatrix};
use crate::{Error, Result};

/// Default tolerance for positivity and complete-positivity checks.
pub const MAP_TOL: f64 = 1e-10;

/// Pure states probed by the positivity test for non-diagonal maps.
const BLOCH_GRID: usize = 400;

fn basis() -> [Mat2; 4] {
    let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    [
        state::scale(&IDENTITY, s),
        state::scale(&SIGMA_X, s),
        state::scale(&SIGMA_Y, s),
        state::scale(&SIGMA_Z, s),
    ]
}

/// Matrix `F_kl = Tr(X_k† Φ[X_l])` of a qubit map in the orthonormal basis
/// `X = (𝟙, σx, σy, σz)/√2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    f: [[f64; 4]; 4],
}

impl TransferMatrix {
    pub fn new(f: [[f64; 4]; 4]) -> Result<Self> {
        if f.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::invalid("transfer matrix has non-finite entries"));
        }
        Ok(TransferMatrix { f })
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut f = [[0.0; 4]; 4];
        for (k, v) in d.iter().enumerate() {
            f[k][k] = *v;
        }
        TransferMatrix { f }
    }

    /// Transfer matrix of a linear, Hermiticity-preserving map.
    pub fn from_map<M: Fn(&Mat2) -> Mat2>(map: M) -> Self {
        let x = basis();
        let mut f = [[0.0; 4]; 4];
        for l in 0..4 {
            let image = map(&x[l]);
            for k in 0..4 {
                f[k][l] = state::trace(&state::mul(&state::dagger(&x[k]), &image)).re;
            }
        }
        TransferMatrix { f }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.f
    }

    /// Diagonal entries if all off-diagonal entries vanish (exactly).
    pub fn diagonal_entries(&self) -> Option<[f64; 4]> {
        let off = (0..4).any(|i| (0..4).any(|j| i != j && self.f[i][j] != 0.0));
        (!off).then(|| [self.f[0][0], self.f[1][1], self.f[2][2], self.f[3][3]])
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        (self.f[0][0] - 1.0).abs() <= tol && self.f[0][1..].iter().all(|x| x.abs() <= tol)
    }

    /// Action on an arbitrary 2×2 matrix.
    pub fn apply_matrix(&self, m: &Mat2) -> Mat2 {
        let x = basis();
        let c: [Complex64; 4] =
            core::array::from_fn(|l| state::trace(&state::mul(&state::dagger(&x[l]), m)));
        let mut out = [[ZERO; 2]; 2];
        for k in 0..4 {
            let ck: Complex64 = (0..4).map(|l| c[l] * self.f[k][l]).sum();
            out = state::add(&out, &state::scale(&x[k], ck));
        }
        out
    }

    /// Action on a state; the result is a state when the map is positive and
    /// trace preserving.
    pub fn apply(&self, rho: &QubitState) -> QubitState {
        QubitState::from_matrix_unchecked(self.apply_matrix(rho.matrix()))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &TransferMatrix) -> TransferMatrix {
        let mut f = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                f[i][j] = (0..4).map(|k| self.f[i][k] * other.f[k][j]).sum();
            }
        }
        TransferMatrix { f }
    }
}

/// Choi matrix `½ Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`, normalised to unit trace for
/// trace-preserving maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiMatrix {
    c: CMatrix<4>,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMatrix<4> {
        &self.c
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|k| self.c[k][k].re).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        hermitian_eigenvalues(&self.c)
    }

    /// Trace norm `Σ |λ_k|`.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|x| x.abs()).sum())
    }
}

pub fn choi(f: &TransferMatrix) -> Result<ChoiMatrix> {
    if !f.is_trace_preserving(1e-12) {
        return Err(Error::invalid(format!(
            "Choi matrix requested for a non-trace-preserving map (first row {:?})",
            f.f[0]
        )));
    }
    let mut c = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = [[ZERO; 2]; 2];
            unit[i][j] = Complex64::new(1.0, 0.0);
            let image = f.apply_matrix(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    c[2 * i + a][2 * j + b] = 0.5 * image[a][b];
                }
            }
        }
    }
    Ok(ChoiMatrix { c })
}

fn min_image_eigenvalue(f: &TransferMatrix, theta: f64, phi: f64) -> f64 {
    let image = f.apply_matrix(QubitState::pure(theta, phi).matrix());
    // Hermitian up to rounding for Hermiticity-preserving maps; symmetrise.
    let h = state::scale(&state::add(&image, &state::dagger(&image)), Complex64::new(0.5, 0.0));
    hermitian_eigenvalues(&h).map(|e| e[0]).unwrap_or(f64::NEG_INFINITY)
}

/// Whether the map sends every state to a positive operator.
///
/// Diagonal trace-preserving maps are positive iff every Bloch-axis factor
/// satisfies `|λ| <= 1 + tol`. Other maps are probed on a Fibonacci grid of
/// pure states followed by a local refinement of the worst points; this
/// fallback is heuristic.
pub fn is_positive_map(f: &TransferMatrix, tol: f64) -> bool {
    if let Some(d) = f.diagonal_entries() {
        if f.is_trace_preserving(0.0) {
            return d[1..].iter().all(|x| x.abs() <= 1.0 + tol);
        }
    }
    let golden = core::f64::consts::PI * (3.0 - math::sqrt(5.0));
    let mut worst = [(f64::INFINITY, 0.0, 0.0); 4];
    for k in 0..BLOCH_GRID {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / BLOCH_GRID as f64;
        let theta = libm::acos(z);
        let phi = golden * k as f64;
        let v = min_image_eigenvalue(f, theta, phi);
        if let Some(slot) = worst.iter_mut().max_by(|a, b| a.0.total_cmp(&b.0)) {
            if v < slot.0 {
                *slot = (v, theta, phi);
            }
        }
    }
    for &(mut best, mut theta, mut phi) in &worst {
        let mut step = 0.2;
        for _ in 0..30 {
            let mut moved = false;
            for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let v = min_image_eigenvalue(f, theta + dt, phi + dp);
                if v < best {
                    best = v;
                    theta += dt;
                    phi += dp;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if best < -tol {
            return false;
        }
    }
    true
}

/// Complete positivity: smallest Choi eigenvalue `>= -tol`.
pub fn is_cp_map(f: &TransferMatrix, tol: f64) -> Result<bool> {
    Ok(choi(f)?.eigenvalues()?[0] >= -tol)
}
