use alloc::format;

use num_complex::Complex64;

use crate::math;
use crate::numerics::hermitian_eigenvalues;
use crate::{Error, Result};

/// 2×2 complex matrix, row-major. Index 0 is the excited state `|1⟩`,
/// index 1 the ground state `|0⟩`.
pub type Mat2 = [[Complex64; 2]; 2];

const STATE_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub(crate) const SIGMA_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub(crate) const SIGMA_Y: Mat2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub(crate) const SIGMA_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
/// Raising operator `|1⟩⟨0|`.
pub(crate) const SIGMA_PLUS: Mat2 = [[ZERO, ONE], [ZERO, ZERO]];
/// Lowering operator `|0⟩⟨1|`.
pub(crate) const SIGMA_MINUS: Mat2 = [[ZERO, ZERO], [ONE, ZERO]];

pub(crate) fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub(crate) fn sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]]
}

pub(crate) fn scale(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub(crate) fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// `a ρ b`
pub(crate) fn sandwich(a: &Mat2, rho: &Mat2, b: &Mat2) -> Mat2 {
    mul(&mul(a, rho), b)
}

pub(crate) fn trace(a: &Mat2) -> Complex64 {
    a[0][0] + a[1][1]
}

/// A qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho: Mat2,
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positivity (to `1e-12`).
    pub fn new(rho: Mat2) -> Result<Self> {
        let eig = hermitian_eigenvalues(&rho)?;
        let tr = trace(&rho);
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        if eig[0] < -STATE_TOL {
            return Err(Error::invalid(format!("density matrix has negative eigenvalue {}", eig[0])));
        }
        Ok(QubitState { rho })
    }

    /// `ρ = ½(𝟙 + x σx + y σy + z σz)`, requires `x² + y² + z² <= 1`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let norm2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
        if !(norm2 <= 1.0 + STATE_TOL) {
            return Err(Error::invalid(format!("Bloch vector {r:?} lies outside the unit ball")));
        }
        Ok(Self::from_bloch_unchecked(r))
    }

    pub(crate) fn from_bloch_unchecked(r: [f64; 3]) -> Self {
        let [x, y, z] = r;
        QubitState {
            rho: [
                [Complex64::new(0.5 * (1.0 + z), 0.0), Complex64::new(0.5 * x, -0.5 * y)],
                [Complex64::new(0.5 * x, 0.5 * y), Complex64::new(0.5 * (1.0 - z), 0.0)],
            ],
        }
    }

    /// Pure state with polar angle `theta` from the excited state and azimuth `phi`.
    pub fn pure(theta: f64, phi: f64) -> Self {
        let st = math::sin(theta);
        Self::from_bloch_unchecked([st * math::cos(phi), st * math::sin(phi), math::cos(theta)])
    }

    /// `|1⟩⟨1|`
    pub fn excited() -> Self {
        Self::from_bloch_unchecked([0.0, 0.0, 1.0])
    }

    /// `|0⟩⟨0|`
    pub fn ground() -> Self {
        Self::from_bloch_unchecked([0.0, 0.0, -1.0])
    }

    /// `|+⟩⟨+|` with `|+⟩ = (|1⟩ + |0⟩)/√2`.
    pub fn plus() -> Self {
        Self::from_bloch_unchecked([1.0, 0.0, 0.0])
    }

    /// `|-⟩⟨-|`
    pub fn minus() -> Self {
        Self::from_bloch_unchecked([-1.0, 0.0, 0.0])
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch_unchecked([0.0, 0.0, 0.0])
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.rho
    }

    pub fn bloch(&self) -> [f64; 3] {
        let c = self.rho[0][1];
        [2.0 * c.re, -2.0 * c.im, self.rho[0][0].re - self.rho[1][1].re]
    }

    /// `ρ₁₁`, population of the excited state.
    pub fn excited_population(&self) -> f64 {
        self.rho[0][0].re
    }

    /// `ρ₁₀ = ⟨1|ρ|0⟩`
    pub fn coherence(&self) -> Complex64 {
        self.rho[0][1]
    }

    pub(crate) fn from_matrix_unchecked(rho: Mat2) -> Self {
        QubitState { rho }
    }
}
