//! Two-sided shooting on the radial equation in `x = a·r`.
//!
//! The inner piece is integrated in `t = ln x` with the regular power `x^s`
//! factored out, the outer piece with the decaying exponential factored
//! out; both meet at
//! `x_match`, where the Wronskian of the two unit-normalized states is the
//! mismatch.

use serde::{Deserialize, Serialize};

use super::ode::{integrate, OdeConfig};
use super::operator::{asymptotic_strength, effective_potential, origin_strength, Centrifugal};
use crate::error::{Error, Result};
use crate::model::Problem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub ode: OdeConfig,
    pub mode: Centrifugal,
    /// Inner start in `x = a·r`.
    pub x_left: f64,
    /// Outer start in `x`.
    pub x_right: f64,
    pub x_match: f64,
    /// Refinement stops once the bracket is this narrow.
    pub energy_tol: f64,
}

impl Default for ShootingConfig {
    /// Starts at `z = 1 − 10⁻⁸` and `z = 10⁻⁸`, matching at `z = ½`.
    fn default() -> Self {
        Self {
            ode: OdeConfig::default(),
            mode: Centrifugal::Pekeris,
            x_left: -(-1e-8f64).ln_1p(),
            x_right: -(1e-8f64).ln(),
            x_match: std::f64::consts::LN_2,
            energy_tol: 1e-10,
        }
    }
}

impl ShootingConfig {
    /// Unapproximated equation on `r ∈ [10⁻⁶, 200/a]`, matched at `r_match`.
    pub fn exact(a: f64, r_match: f64) -> Self {
        Self {
            mode: Centrifugal::Exact,
            x_left: 1e-6 * a,
            x_right: 200.0,
            x_match: a * r_match,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Wronskian of the unit-normalized inner and outer states.
    pub value: f64,
    /// Interior sign changes of the two pieces.
    pub nodes: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub energy: f64,
    pub mismatch: f64,
    pub integration_steps: usize,
    pub nodes: usize,
    pub iterations: u32,
}

const RESCALE: f64 = 1e100;

struct Tracker {
    last_sign: f64,
    nodes: usize,
}

impl Tracker {
    fn new(f0: f64) -> Self {
        Self {
            last_sign: f0.signum(),
            nodes: 0,
        }
    }

    fn observe(&mut self, y: &mut [f64; 2]) {
        if y[0] != 0.0 {
            let s = y[0].signum();
            if s != self.last_sign {
                self.nodes += 1;
                self.last_sign = s;
            }
        }
        let size = y[0].abs().max(y[1].abs());
        if size > RESCALE {
            y[0] /= size;
            y[1] /= size;
        }
    }
}

/// Mismatch at one trial energy.
pub fn mismatch(problem: &Problem, e: f64, cfg: &ShootingConfig) -> Result<Mismatch> {
    if !e.is_finite() {
        return Err(Error::DomainError {
            what: "energy",
            value: e,
        });
    }
    let a = problem.potential.a();
    let v = |x: f64| effective_potential(x / a, e, problem, cfg.mode) / (a * a);

    let indicial = 0.25 + origin_strength(e, problem);
    if !(indicial >= 0.0) {
        return Err(Error::DomainError {
            what: "indicial discriminant",
            value: indicial,
        });
    }
    let s = 0.5 + indicial.sqrt();
    let far = asymptotic_strength(e, problem, cfg.mode) / (a * a);
    if !(far > 0.0) {
        return Err(Error::Unbound { energy: e });
    }
    let k = far.sqrt();

    // inner piece: F = x^s G, G_tt + (2s − 1) G_t = (x² V − s(s − 1)) G, x = e^t
    let mut inner = Tracker::new(1.0);
    let left = integrate(
        |t, y: &[f64; 2]| {
            let x = t.exp();
            [y[1], -(2.0 * s - 1.0) * y[1] + (x * x * v(x) - s * (s - 1.0)) * y[0]]
        },
        cfg.x_left.ln(),
        [1.0, 0.0],
        cfg.x_match.ln(),
        &cfg.ode,
        |_, y| inner.observe(y),
    )?;
    let (fl, dfl) = (left.y[0], (s * left.y[0] + left.y[1]) / cfg.x_match);

    // outer piece: F = e^(−kx) H, H'' − 2k H' = (V − k²) H
    let mut outer = Tracker::new(1.0);
    let right = integrate(
        |x, y: &[f64; 2]| [y[1], 2.0 * k * y[1] + (v(x) - k * k) * y[0]],
        cfg.x_right,
        [1.0, 0.0],
        cfg.x_match,
        &cfg.ode,
        |_, y| outer.observe(y),
    )?;
    let (fr, dfr) = (right.y[0], right.y[1] - k * right.y[0]);

    let wronskian = (fl * dfr - dfl * fr) / (fl.hypot(dfl) * fr.hypot(dfr));
    Ok(Mismatch {
        value: wronskian,
        nodes: inner.nodes + outer.nodes,
        steps: left.steps + right.steps,
    })
}

/// Root of the mismatch inside `bracket`, refined until the bracket is
/// narrower than `energy_tol`.
///
/// Regula falsi with the Illinois modification. Each trial point keeps at
/// least `tol/2` from both ends, and three steps in a row that fail to halve
/// the bracket are followed by a bisection.
pub fn shoot_eigenvalue(problem: &Problem, bracket: (f64, f64), cfg: &ShootingConfig) -> Result<ShootingResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::DomainError {
            what: "shooting bracket",
            value: hi - lo,
        });
    }
    let m_lo = mismatch(problem, lo, cfg)?;
    let m_hi = mismatch(problem, hi, cfg)?;
    let mut steps = m_lo.steps + m_hi.steps;
    let (mut f_lo, mut f_hi) = (m_lo.value, m_hi.value);
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let tol = cfg.energy_tol;
    let mut iterations = 0u32;
    let mut last_side = 0i8;
    let mut slow = 0u32;
    let mut previous_width = f64::INFINITY;
    while hi - lo > tol && iterations < 400 {
        let width = hi - lo;
        slow = if width > 0.5 * previous_width { slow + 1 } else { 0 };
        let mut x = if slow >= 3 {
            slow = 0;
            lo + 0.5 * width
        } else {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        };
        if !x.is_finite() {
            x = lo + 0.5 * width;
        }
        x = x.clamp(lo + 0.5 * tol, hi - 0.5 * tol);
        previous_width = width;
        let m = mismatch(problem, x, cfg)?;
        steps += m.steps;
        iterations += 1;
        if m.value == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if (m.value < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = m.value;
            if last_side == -1 {
                f_hi *= 0.5;
            }
            last_side = -1;
        } else {
            hi = x;
            f_hi = m.value;
            if last_side == 1 {
                f_lo *= 0.5;
            }
            last_side = 1;
        }
    }
    let energy = lo + 0.5 * (hi - lo);
    let m = mismatch(problem, energy, cfg)?;
    Ok(ShootingResult {
        energy,
        mismatch: m.value,
        integration_steps: steps + m.steps,
        nodes: m.nodes,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_problem;
    use crate::oracle::verify::neighbour_bracket;
    use crate::spectrum::{solve_energy, unique_admissible, Preset, SearchConfig};

    fn table1_state(n: u32, kappa: i32) -> Problem {
        validate_problem(&Preset::Table1.blocks()[0].problem_spec(0.5, n, kappa)).unwrap()
    }

    #[test]
    fn recovers_analytic_levels_with_node_count() {
        for n in 0..=2 {
            let p = table1_state(n, -2);
            let e = unique_admissible(&solve_energy(&p, &SearchConfig::default()).unwrap())
                .unwrap()
                .energy;
            let bracket = neighbour_bracket(&p, e).unwrap();
            let shot = shoot_eigenvalue(&p, bracket, &ShootingConfig::default()).unwrap();
            assert!((shot.energy - e).abs() < 1e-8, "n={n}: {} vs {e}", shot.energy);
            assert_eq!(shot.nodes, n as usize);
            assert!(shot.iterations < 60);
        }
    }

    #[test]
    fn rejects_bad_brackets() {
        let p = table1_state(0, -2);
        let cfg = ShootingConfig::default();
        assert!(matches!(
            shoot_eigenvalue(&p, (-0.99, -0.995), &cfg),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            shoot_eigenvalue(&p, (-0.9999, -0.9998), &cfg),
            Err(Error::NoSignChange { .. })
        ));
        assert!(mismatch(&p, f64::NAN, &cfg).is_err());
    }

    #[test]
    fn continuum_energy_is_unbound() {
        let p = table1_state(0, -2);
        assert!(matches!(
            mismatch(&p, 1.5, &ShootingConfig::exact(0.1, 1.0)),
            Err(Error::Unbound { .. }) | Err(Error::DomainError { .. })
        ));
    }
}
