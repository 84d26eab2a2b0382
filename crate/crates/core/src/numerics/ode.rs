use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Step-size control for [`ode_evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Local error tolerance (mixed absolute/relative per component).
    pub tol: f64,
    pub initial_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            tol: 1e-10,
            initial_step: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn eval<const N: usize, F>(rhs: &F, t: f64, y: &[f64; N]) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k = rhs(t, y);
    if k.iter().all(|v| v.is_finite()) {
        Ok(k)
    } else {
        Err(Error::Singularity { time: t })
    }
}

/// Integrates `dy/dt = rhs(t, y)` from `grid[0]` with `y(grid[0]) = y0` and
/// returns the state at every grid time (the first entry is `y0`).
///
/// Embedded Runge–Kutta 5(4) with adaptive substeps; the integrator never
/// steps past the next grid point, so callers exclude singular times by
/// choosing the grid. A non-finite right-hand side aborts with
/// [`Error::Singularity`] carrying the time of evaluation.
pub fn ode_evolve<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    grid: &[f64],
    opts: OdeOptions,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("time grid must be strictly increasing"));
    }
    let mut out = Vec::with_capacity(grid.len());
    let Some(&t0) = grid.first() else {
        return Ok(out);
    };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.initial_step;
    let mut steps = 0usize;
    out.push(y);
    let mut k1 = eval(&rhs, t, &y)?;

    for &target in &grid[1..] {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::numerical(
                    "ode_evolve",
                    format!("step limit {} reached at t = {t}", opts.max_steps),
                ));
            }
            steps += 1;
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };

            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += step * a * kj[i];
                        }
                    }
                }
                k[s] = eval(&rhs, t + C[s] * step, &ys)?;
            }
            let mut y5 = y;
            let mut err = 0.0_f64;
            for i in 0..N {
                let mut d5 = 0.0;
                let mut d4 = 0.0;
                for s in 0..7 {
                    d5 += B5[s] * k[s][i];
                    d4 += B4[s] * k[s][i];
                }
                y5[i] += step * d5;
                let sc = opts.tol * (1.0 + y[i].abs().max(y5[i].abs()));
                err = err.max((step * (d5 - d4)).abs() / sc);
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y5;
                // FSAL: the last stage is the derivative at the new point.
                k1 = k[6];
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0)
            };
            if !(last && err <= 1.0) {
                h = step * factor;
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Singularity { time: t });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_keeps_state() {
        let out = ode_evolve(|_, _| [0.0; 2], [1.5, -2.0], &[0.0, 0.5, 1.0], OdeOptions::default()).unwrap();
        assert!(out.iter().all(|y| *y == [1.5, -2.0]));
    }

    #[test]
    fn exponential_decay() {
        let out = ode_evolve(|_, y| [-2.0 * y[0]], [1.0], &[0.0, 1.0], OdeOptions::default()).unwrap();
        assert!((out[1][0] - (-2.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn singular_rhs_reports_time() {
        let r = ode_evolve(
            |t, y| [y[0] / (1.0 - t)],
            [1.0],
            &[0.0, 2.0],
            OdeOptions::default(),
        );
        match r {
            Err(Error::Singularity { time }) => assert!((time - 1.0).abs() < 1e-3, "{time}"),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn non_increasing_grid_rejected() {
        assert!(ode_evolve(|_, y: &[f64; 1]| *y, [1.0], &[0.0, 0.0], OdeOptions::default()).is_err());
    }
}
