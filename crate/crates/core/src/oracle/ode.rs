//! Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step as a fraction of the interval.
    pub first_step: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-300,
            first_step: 1e-4,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOutcome<const N: usize> {
    pub x: f64,
    pub y: [f64; N],
    pub steps: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// `observe` runs after every accepted step and may rescale the state in
/// place, which is how linear problems keep their amplitude bounded.
pub fn integrate<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    x0: f64,
    y0: [f64; N],
    x1: f64,
    cfg: &OdeConfig,
    mut observe: impl FnMut(f64, &mut [f64; N]),
) -> Result<OdeOutcome<N>> {
    let span = x1 - x0;
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = span * cfg.first_step;
    let h_min = span.abs() * 1e-15;
    let mut k = [[0.0; N]; 7];
    k[0] = f(x, &y);
    let mut steps = 0;
    let mut rejected = 0;

    while (x1 - x) * dir > 0.0 {
        if steps + rejected >= cfg.max_steps {
            return Err(Error::StiffnessFailure { x, step: h });
        }
        let last = (x + h - x1) * dir >= 0.0;
        if last {
            h = x1 - x;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                *yi += h * acc;
            }
            k[s] = f(x + C[s] * h, &ys);
        }
        let mut y_new = y;
        let mut e_vec = [0.0; N];
        for i in 0..N {
            let mut acc = 0.0;
            let mut e_acc = 0.0;
            for s in 0..6 {
                acc += A[6][s] * k[s][i];
            }
            for s in 0..7 {
                e_acc += E[s] * k[s][i];
            }
            y_new[i] = y[i] + h * acc;
            e_vec[i] = h * e_acc;
        }
        // one scale for the whole state, so a component crossing zero
        // does not throttle the step
        let size = y.iter().chain(&y_new).fold(0.0f64, |m, v| m.max(v.abs()));
        let sc = cfg.atol + cfg.rtol * size;
        let err = (e_vec.iter().map(|e| (e / sc) * (e / sc)).sum::<f64>() / N as f64).sqrt();
        if !err.is_finite() {
            rejected += 1;
            h *= 0.2;
            if h.abs() < h_min {
                return Err(Error::StiffnessFailure { x, step: h });
            }
            continue;
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y_new;
            steps += 1;
            // first same as last
            k[0] = k[6];
            let before = y;
            observe(x, &mut y);
            if y != before {
                k[0] = f(x, &y);
            }
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.abs() < h_min {
            return Err(Error::StiffnessFailure { x, step: h });
        }
    }
    Ok(OdeOutcome { x, y, steps, rejected })
}
