use alloc::format;

use num_complex::Complex64;

use crate::math;
use crate::{Error, Result};

/// Dense `N x N` complex matrix, row-major.
pub type CMatrix<const N: usize> = [[Complex64; N]; N];

/// Allowed deviation from Hermiticity, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

const OFFDIAG_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

fn check_hermitian<const N: usize>(m: &CMatrix<N>) -> Result<f64> {
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if !scale.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    for i in 0..N {
        for j in i..N {
            let dev = (m[i][j] - m[j][i].conj()).norm();
            if dev > HERMITIAN_TOL * scale.max(1.0) {
                return Err(Error::invalid(format!(
                    "matrix not Hermitian: |m[{i}][{j}] - conj(m[{j}][{i}])| = {dev:e}"
                )));
            }
        }
    }
    Ok(scale)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
///
/// `N = 2` uses the closed form; larger sizes use cyclic complex Jacobi
/// rotations until the off-diagonal Frobenius norm drops below `1e-13`
/// (relative to the matrix scale when that exceeds one).
pub fn hermitian_eigenvalues<const N: usize>(m: &CMatrix<N>) -> Result<[f64; N]> {
    let scale = check_hermitian(m)?;
    let mut out = [0.0; N];
    match N {
        0 => return Ok(out),
        1 => {
            out[0] = m[0][0].re;
            return Ok(out);
        }
        2 => {
            let a = m[0][0].re;
            let d = m[1][1].re;
            let b = 0.5 * (m[0][1] + m[1][0].conj());
            let mean = 0.5 * (a + d);
            let radius = math::hypot(0.5 * (a - d), b.norm());
            out[0] = mean - radius;
            out[1] = mean + radius;
            return Ok(out);
        }
        _ => {}
    }

    let mut a = *m;
    // Symmetrise so the rotations act on an exactly Hermitian matrix.
    for i in 0..N {
        a[i][i] = Complex64::new(a[i][i].re, 0.0);
        for j in (i + 1)..N {
            let avg = 0.5 * (a[i][j] + a[j][i].conj());
            a[i][j] = avg;
            a[j][i] = avg.conj();
        }
    }
    let threshold = OFFDIAG_TOL * scale.max(1.0);
    let offdiag = |a: &CMatrix<N>| -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += a[i][j].norm_sqr();
                }
            }
        }
        math::sqrt(s)
    };

    let mut sweeps = 0;
    while offdiag(&a) >= threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::numerical(
                "hermitian_eigenvalues",
                format!("Jacobi did not converge in {MAX_SWEEPS} sweeps"),
            ));
        }
        sweeps += 1;
        for p in 0..N - 1 {
            for q in (p + 1)..N {
                let r = a[p][q].norm();
                if r == 0.0 {
                    continue;
                }
                // Phase rotation making a[p][q] real and positive.
                let phase = a[p][q] / r;
                let phase_conj = phase.conj();
                for k in 0..N {
                    a[k][q] *= phase_conj;
                }
                for k in 0..N {
                    a[q][k] *= phase;
                }
                a[p][q] = Complex64::new(r, 0.0);
                a[q][p] = Complex64::new(r, 0.0);

                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + math::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..N {
                    let (x, y) = (a[k][p], a[k][q]);
                    a[k][p] = x * c - y * s;
                    a[k][q] = x * s + y * c;
                }
                for k in 0..N {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = x * c - y * s;
                    a[q][k] = x * s + y * c;
                }
                a[p][q] = Complex64::new(0.0, 0.0);
                a[q][p] = Complex64::new(0.0, 0.0);
            }
        }
    }
    for i in 0..N {
        out[i] = a[i][i].re;
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_2x2() {
        let m = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), [1.0, 1.0]);
    }

    #[test]
    fn sigma_z() {
        let m = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), [-1.0, 1.0]);
    }

    #[test]
    fn sigma_y_complex_offdiagonal() {
        let m = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn complex_4x4_matches_known_spectrum() {
        // Block structure: sigma_y ⊕ diag(2, 3) rotated by a complex unitary
        // permutation keeps the spectrum {-1, 1, 2, 3}.
        let mut m = [[c(0.0, 0.0); 4]; 4];
        m[0][2] = c(0.0, -1.0);
        m[2][0] = c(0.0, 1.0);
        m[1][1] = c(2.0, 0.0);
        m[3][3] = c(3.0, 0.0);
        let e = hermitian_eigenvalues(&m).unwrap();
        let expect = [-1.0, 1.0, 2.0, 3.0];
        for (x, y) in e.iter().zip(expect) {
            assert!((x - y).abs() < 1e-13, "{e:?}");
        }
    }
}
