use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Relative tolerance for refined roots.
pub const ROOT_RTOL: f64 = 1e-12;

const MAX_ITER: usize = 200;

/// Refine a bracketed root of `f` in `[a, b]` with Brent's method
/// (inverse quadratic interpolation, secant, bisection fallback).
///
/// `fa` and `fb` must have opposite signs (or one of them be zero).
pub fn refine_root<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64) -> Result<f64> {
    brent(f, a, b, fa, fb)?.ok_or_else(|| {
        Error::numerical("refine_root", format!("function non-finite inside [{a}, {b}]"))
    })
}

/// Brent iteration; `Ok(None)` when the function blows up inside the bracket.
fn brent<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64) -> Result<Option<f64>> {
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if fa.signum() == fb.signum() {
        return Err(Error::invalid(format!("root not bracketed in [{a}, {b}]")));
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * ROOT_RTOL * b.abs().max(f64::MIN_POSITIVE);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Some(b));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Ok(None);
        }
    }
    Err(Error::numerical(
        "refine_root",
        format!("no convergence after {MAX_ITER} iterations near {b}"),
    ))
}

/// All sign-change roots of `f` in `[0, t_max]`, sorted.
///
/// The window is scanned on a grid of spacing `step`; every sign change is
/// refined to relative tolerance [`ROOT_RTOL`]. Sign changes across a pole
/// (where `|f|` grows instead of vanishing) are discarded, as are roots that
/// merely touch zero without changing sign.
pub fn find_roots<F: Fn(f64) -> f64>(f: F, t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !(t_max >= 0.0) {
        return Err(Error::invalid(format!("t_max must be >= 0, got {t_max}")));
    }
    let n = libm::ceil(t_max / step) as usize;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_f = f(0.0);
    // Sign of the last nonzero sample, to resolve exact zeros on the grid.
    let mut last_nonzero: Option<(f64, f64)> = if prev_f != 0.0 && prev_f.is_finite() {
        Some((0.0, prev_f))
    } else {
        None
    };
    let mut pending_zero: Option<f64> = None;
    for i in 1..=n {
        let t = if i == n { t_max } else { i as f64 * step };
        let ft = f(t);
        if !ft.is_finite() {
            prev_t = t;
            prev_f = ft;
            last_nonzero = None;
            pending_zero = None;
            continue;
        }
        if ft == 0.0 {
            if pending_zero.is_none() {
                pending_zero = Some(t);
            }
        } else {
            if let Some(z) = pending_zero.take() {
                if let Some((_, fl)) = last_nonzero {
                    if fl.signum() != ft.signum() {
                        roots.push(z);
                    }
                }
            } else if prev_f.is_finite() && prev_f != 0.0 && prev_f.signum() != ft.signum() {
                if let Some(r) = brent(&f, prev_t, t, prev_f, ft)? {
                    if f(r).abs() <= prev_f.abs().min(ft.abs()) {
                        roots.push(r);
                    }
                }
            }
            last_nonzero = Some((t, ft));
        }
        prev_t = t;
        prev_f = ft;
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= ROOT_RTOL * b.abs().max(1.0));
    Ok(roots)
}
