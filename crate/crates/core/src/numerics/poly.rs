use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::{Error, Result};

/// Real polynomial with coefficients in ascending powers: `c[0] + c[1]·u + ...`.
///
/// Trailing (highest-power) zero coefficients are stripped on construction,
/// so `degree()` is exact. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `u + a`
    pub fn linear(a: f64) -> Self {
        Self::new(vec![a, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// Value and first derivative at a complex point (Horner).
    pub fn eval_with_derivative(&self, u: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * u + p;
            p = p * u + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// Exact division by `u`. The constant term must vanish up to `tol`
    /// relative to the largest coefficient; it is discarded.
    pub fn div_by_u(&self, tol: f64) -> Result<Polynomial> {
        let Some(&c0) = self.coeffs.first() else {
            return Ok(self.clone());
        };
        let scale = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if c0.abs() > tol * scale {
            return Err(Error::invalid("polynomial is not divisible by u"));
        }
        Ok(Polynomial::new(self.coeffs[1..].to_vec()))
    }

    /// Quotient and remainder of division by `divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        let Some(nd) = self.degree() else {
            return Ok((Polynomial::new(Vec::new()), Polynomial::new(Vec::new())));
        };
        if nd < dd {
            return Ok((Polynomial::new(Vec::new()), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0.0; nd - dd + 1];
        let lead = divisor.leading();
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
            rem[k + dd] = 0.0;
        }
        rem.truncate(dd);
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }
}

const ABERTH_TOL: f64 = 1e-13;
const ABERTH_MAX_ITER: usize = 500;

/// All complex roots of `p` (with multiplicity) by Aberth–Ehrlich iteration.
///
/// Iteration stops once every correction is below `1e-13` relative to the
/// root modulus (absolute near zero). Multiple roots converge linearly and
/// end up clustered at distance `~sqrt(eps)`; callers merge them.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p
        .degree()
        .ok_or_else(|| Error::invalid("roots of the zero polynomial"))?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading();
    let monic = p.scale(1.0 / lead);
    if n == 1 {
        return Ok(vec![Complex64::new(-monic.coeffs[0], 0.0)]);
    }

    // Initial guesses on a circle of Cauchy-bound radius, rotated off the axes.
    let radius = monic.coeffs[..n]
        .iter()
        .fold(0.0_f64, |m, c| m.max(c.abs()))
        .max(1e-3)
        .min(1e6);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(radius * 0.5 * math::cos(angle), radius * 0.5 * math::sin(angle))
        })
        .collect();

    let mut converged = false;
    for _ in 0..ABERTH_MAX_ITER {
        let mut max_step = 0.0_f64;
        for i in 0..n {
            let (pv, dpv) = monic.eval_with_derivative(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        Complex64::new(1.0, 0.0) / d
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !denom.re.is_finite() {
                ratio
            } else {
                ratio / denom
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[i] -= step;
            let rel = step.norm() / z[i].norm().max(1.0);
            max_step = max_step.max(rel);
        }
        if max_step < ABERTH_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        // Multiple roots stall the relative-step criterion; accept the result
        // if the residuals are at rounding level.
        let scale: f64 = monic.coeffs.iter().map(|c| c.abs()).sum();
        let ok = z.iter().all(|&r| {
            let mag = r.norm().max(1.0);
            monic.eval_complex(r).norm() <= 1e-9 * scale * math::powi(mag, n as i32)
        });
        if !ok {
            return Err(Error::numerical(
                "poly_roots",
                alloc::format!("Aberth iteration did not converge for degree {n}"),
            ));
        }
    }
    // Snap numerically real roots onto the axis.
    for r in z.iter_mut() {
        if r.im.abs() <= 1e-12 * r.norm().max(1.0) {
            r.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_with_complex_pair() {
        // u^2 + 2u + 2 -> -1 ± i
        let p = Polynomial::new(vec![2.0, 2.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        for z in &r {
            assert!((z.re + 1.0).abs() < 1e-13);
            assert!((z.im.abs() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn double_root_clusters() {
        // (u+1)^2
        let p = Polynomial::new(vec![1.0, 2.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        for z in &r {
            assert!((*z - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn sextic_simple_roots() {
        let mut p = Polynomial::constant(1.0);
        for a in [0.5, 1.0, 2.0, 3.0, 4.5, 6.0] {
            p = p.mul(&Polynomial::linear(a));
        }
        let r = poly_roots(&p).unwrap();
        let expect = [-6.0, -4.5, -3.0, -2.0, -1.0, -0.5];
        for (z, e) in r.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-9, "{z} vs {e}");
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn div_rem_recovers_factors() {
        let a = Polynomial::new(vec![1.0, 3.0, 2.0]);
        let b = Polynomial::linear(1.0);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.coeffs(), &[1.0, 2.0]);
        assert!(r.is_zero());
    }

    #[test]
    fn div_by_u_rejects_nonzero_constant() {
        assert!(Polynomial::new(vec![1.0, 1.0]).div_by_u(1e-12).is_err());
        let p = Polynomial::new(vec![0.0, 2.0, 1.0]).div_by_u(1e-12).unwrap();
        assert_eq!(p.coeffs(), &[2.0, 1.0]);
    }
}
