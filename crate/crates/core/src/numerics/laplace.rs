use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::poly::{poly_roots, Polynomial};
use crate::math;
use crate::{Error, Result};

/// Largest denominator degree accepted by [`RationalLaplace`].
pub const MAX_DENOMINATOR_DEGREE: usize = 6;

/// Roots closer than this (relative) are merged into a double pole.
const CLUSTER_RTOL: f64 = 1e-6;

/// Roots of multiplicity m split by `~eps^(1/m)`; three or more roots this
/// close are rejected.
const TRIPLE_RTOL: f64 = 1e-2;

/// A rational function `N(u)/D(u)` in the Laplace variable `u`.
///
/// The transform is proper: `deg N <= deg D <= 6`. When the degrees are equal
/// the inverse transform carries a delta at `t = 0` whose weight is reported by
/// [`InverseLaplace::direct_term`] and is not part of the value at `t > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLaplace {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalLaplace {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        let dd = denominator
            .degree()
            .ok_or_else(|| Error::invalid("degenerate denominator (zero polynomial)"))?;
        if dd > MAX_DENOMINATOR_DEGREE {
            return Err(Error::invalid(format!(
                "denominator degree {dd} exceeds {MAX_DENOMINATOR_DEGREE}"
            )));
        }
        if let Some(nd) = numerator.degree() {
            if nd > dd {
                return Err(Error::invalid(format!(
                    "improper transform: numerator degree {nd} > denominator degree {dd}"
                )));
            }
        }
        if !numerator.coeffs().iter().chain(denominator.coeffs()).all(|c| c.is_finite()) {
            return Err(Error::invalid("non-finite coefficient"));
        }
        Ok(RationalLaplace {
            numerator,
            denominator,
        })
    }

    /// Convenience constructor from ascending coefficient lists.
    pub fn from_coeffs(numerator: &[f64], denominator: &[f64]) -> Result<Self> {
        Self::new(
            Polynomial::new(numerator.to_vec()),
            Polynomial::new(denominator.to_vec()),
        )
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Value of the transform at real `u` (away from poles).
    pub fn eval(&self, u: f64) -> f64 {
        self.numerator.eval(u) / self.denominator.eval(u)
    }

    /// Partial-fraction decomposition, ready for repeated evaluation.
    pub fn inverse(&self) -> Result<InverseLaplace> {
        InverseLaplace::decompose(self)
    }
}

/// One pole contribution `(c0 + c1·t)·exp(p·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PoleTerm {
    pole: Complex64,
    c0: Complex64,
    c1: Complex64,
}

/// Time-domain inverse of a [`RationalLaplace`], as a sum over poles.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseLaplace {
    direct: f64,
    terms: Vec<PoleTerm>,
}

fn cexp(z: Complex64) -> Complex64 {
    let m = math::exp(z.re);
    Complex64::new(m * math::cos(z.im), m * math::sin(z.im))
}

struct Cluster {
    pole: Complex64,
    multiplicity: usize,
}

fn cluster_roots(roots: &[Complex64], denominator: &Polynomial) -> Result<Vec<Cluster>> {
    for (i, &r) in roots.iter().enumerate() {
        let close = roots
            .iter()
            .enumerate()
            .filter(|&(j, &o)| j != i && (o - r).norm() <= TRIPLE_RTOL * r.norm().max(1.0))
            .count();
        if close >= 2 {
            return Err(Error::Unsupported(format!(
                "pole of multiplicity > 2 near {r}"
            )));
        }
    }
    let mut used = alloc::vec![false; roots.len()];
    let mut clusters = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = alloc::vec![roots[i]];
        for j in (i + 1)..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= CLUSTER_RTOL * roots[i].norm().max(1.0) {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let multiplicity = members.len();
        if multiplicity > 2 {
            return Err(Error::Unsupported(format!(
                "pole of multiplicity {multiplicity} near {}",
                roots[i]
            )));
        }
        let mut pole = members.iter().sum::<Complex64>() / multiplicity as f64;
        if multiplicity == 2 {
            // A double root of D is a simple root of D'; polish there.
            let dprime = denominator.derivative();
            for _ in 0..4 {
                let (v, dv) = dprime.eval_with_derivative(pole);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                pole -= step;
            }
            if pole.im.abs() <= 1e-12 * pole.norm().max(1.0) {
                pole.im = 0.0;
            }
        }
        clusters.push(Cluster { pole, multiplicity });
    }
    Ok(clusters)
}

impl InverseLaplace {
    fn decompose(rl: &RationalLaplace) -> Result<Self> {
        let den = &rl.denominator;
        let mut num = rl.numerator.clone();
        let mut direct = 0.0;
        if num.degree().is_some() && num.degree() == den.degree() {
            direct = num.leading() / den.leading();
            num = num.sub(&den.scale(direct));
            // Cancel rounding residue in the top coefficient.
            let mut c = num.coeffs().to_vec();
            c.truncate(den.degree().unwrap_or(0));
            num = Polynomial::new(c);
        }
        if num.is_zero() || den.degree() == Some(0) {
            return Ok(InverseLaplace {
                direct,
                terms: Vec::new(),
            });
        }
        let roots = poly_roots(den)?;
        let clusters = cluster_roots(&roots, den)?;
        let lead = den.leading();
        let dnum = num.derivative();

        let mut terms = Vec::with_capacity(clusters.len());
        for (i, cl) in clusters.iter().enumerate() {
            let p = cl.pole;
            let mut rest = Complex64::new(lead, 0.0);
            let mut log_deriv = Complex64::new(0.0, 0.0);
            for (k, other) in clusters.iter().enumerate() {
                if k == i {
                    continue;
                }
                let d = p - other.pole;
                for _ in 0..other.multiplicity {
                    rest *= d;
                }
                log_deriv += other.multiplicity as f64 / d;
            }
            let n_p = num.eval_complex(p);
            let term = match cl.multiplicity {
                1 => PoleTerm {
                    pole: p,
                    c0: n_p / rest,
                    c1: Complex64::new(0.0, 0.0),
                },
                _ => PoleTerm {
                    pole: p,
                    c0: (dnum.eval_complex(p) - n_p * log_deriv) / rest,
                    c1: n_p / rest,
                },
            };
            if !(term.c0.re.is_finite() && term.c0.im.is_finite() && term.c1.re.is_finite()) {
                return Err(Error::numerical(
                    "invert_laplace",
                    format!("non-finite residue at pole {p}"),
                ));
            }
            terms.push(term);
        }
        Ok(InverseLaplace { direct, terms })
    }

    /// Weight of the delta at `t = 0` (nonzero only when `deg N = deg D`).
    pub fn direct_term(&self) -> f64 {
        self.direct
    }

    /// Poles with their multiplicities.
    pub fn poles(&self) -> impl Iterator<Item = (Complex64, usize)> + '_ {
        self.terms
            .iter()
            .map(|t| (t.pole, if t.c1 == Complex64::new(0.0, 0.0) { 1 } else { 2 }))
    }

    /// Inverse transform at `t >= 0`, excluding the delta at the origin.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| ((term.c0 + term.c1 * t) * cexp(term.pole * t)).re)
            .sum()
    }

    /// Time derivative of [`eval`](Self::eval).
    pub fn derivative(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let p = term.pole;
                ((term.c0 * p + term.c1 * (p * t + 1.0)) * cexp(p * t)).re
            })
            .sum()
    }
}

/// Inverse Laplace transform of `rl` at time `t >= 0` by partial fractions.
pub fn invert_laplace(rl: &RationalLaplace, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    Ok(rl.inverse()?.eval(t))
}
