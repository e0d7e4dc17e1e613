//! Radial spinor components in closed form, their Dirac partners, and
//! numerical normalization.
//!
//! With `z = e^(−ar)` the solved component (upper `F` for spin, lower `G`
//! for pseudospin) is
//!
//! ```text
//! z^δ · (1 − z)^(η/2 + ½) · P_n^(2δ, η)(1 − 2z)
//! ```

pub mod jacobi;
pub mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Problem, Symmetry};
use crate::spectrum::{ode_coefficients, radicands, EnergyRoot};

pub use jacobi::{jacobi, jacobi_coefficients_in_z};
pub use quadrature::{gauss_legendre, square_integral, trapezoid, Normalization, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeExponents {
    pub delta: f64,
    pub eta: f64,
}

impl ShapeExponents {
    pub fn new(energy: f64, problem: &Problem) -> Result<Self> {
        let rad = radicands(energy, problem);
        let delta = rad.centrifugal.max(0.0).sqrt();
        if !rad.defined() || !(delta > 0.0) {
            return Err(Error::NonNormalizable { delta });
        }
        Ok(Self {
            delta,
            eta: 2.0 * rad.tensor.sqrt(),
        })
    }

    /// Exponent of `(1 − z)`, the small-`r` power.
    pub fn origin_power(&self) -> f64 {
        0.5 * self.eta + 0.5
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSample {
    pub r: f64,
    pub z: f64,
    pub value: f64,
}

/// A solved state together with what is needed to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorState {
    pub problem: Problem,
    pub energy: f64,
    pub exponents: ShapeExponents,
}

impl SpinorState {
    pub fn new(problem: &Problem, energy: f64) -> Result<Self> {
        Ok(Self {
            problem: *problem,
            energy,
            exponents: ShapeExponents::new(energy, problem)?,
        })
    }

    fn parts(&self, z: f64, one_minus_z: f64) -> f64 {
        let ShapeExponents { delta, eta } = self.exponents;
        let p = jacobi::jacobi_unchecked(self.problem.n(), 2.0 * delta, eta, 1.0 - 2.0 * z);
        z.powf(delta) * one_minus_z.powf(self.exponents.origin_power()) * p
    }

    /// Unnormalized component at `z ∈ (0, 1)`.
    pub fn value_z(&self, z: f64) -> f64 {
        self.parts(z, 1.0 - z)
    }

    /// Unnormalized component at radius `r`; zero at `r = 0`.
    pub fn value(&self, r: f64) -> f64 {
        let ar = self.problem.potential.a() * r;
        self.parts((-ar).exp(), -(-ar).exp_m1())
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<RadialSample> {
        let a = self.problem.potential.a();
        grid.par_iter()
            .map(|&r| RadialSample {
                r,
                z: (-a * r).exp(),
                value: self.value(r),
            })
            .collect()
    }

    /// `∫₀^∞ value² dr` by composite Gauss-Legendre.
    pub fn normalization(&self) -> Result<Normalization> {
        normalize(|r| self.value(r), self.problem.potential.a())
    }
}

fn component(r: f64, root: &EnergyRoot, problem: &Problem, kind: Symmetry) -> Result<f64> {
    if problem.symmetry() != kind {
        return Err(Error::WrongSymmetry {
            what: "component",
            expected: kind.name(),
        });
    }
    if !(r > 0.0) {
        return Err(Error::DomainError { what: "r", value: r });
    }
    Ok(SpinorState::new(problem, root.energy)?.value(r))
}

/// Unnormalized upper component `F` in the spin limit.
pub fn upper_component_spin(r: f64, root: &EnergyRoot, problem: &Problem) -> Result<f64> {
    component(r, root, problem, Symmetry::Spin)
}

/// Unnormalized lower component `G` in the pseudospin limit.
pub fn lower_component_pseudospin(r: f64, root: &EnergyRoot, problem: &Problem) -> Result<f64> {
    component(r, root, problem, Symmetry::Pseudospin)
}

/// Normalization of `f` on `[0, ∞)`; `a` sets the length scale `1/a`.
pub fn normalize(f: impl Fn(f64) -> f64, a: f64) -> Result<Normalization> {
    square_integral(f, a.recip(), &QuadratureConfig::default())
}

/// Scales samples by a normalization constant.
pub fn apply_normalization(samples: &[RadialSample], norm: &Normalization) -> Vec<RadialSample> {
    samples
        .iter()
        .map(|s| RadialSample {
            value: s.value * norm.constant,
            ..*s
        })
        .collect()
}

/// `points` logarithmically spaced radii on `[r_min, r_max]`.
pub fn log_grid(r_min: f64, r_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0) || !(r_max > r_min) {
        return Err(Error::DomainError {
            what: "grid range",
            value: r_min,
        });
    }
    if points < 2 {
        return Err(Error::ParameterOutOfRange {
            what: "grid points",
            value: points as f64,
        });
    }
    let (l0, l1) = (r_min.ln(), r_max.ln());
    let step = (l1 - l0) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| (l0 + step * i as f64).exp()).collect();
    grid[0] = r_min;
    grid[points - 1] = r_max;
    Ok(grid)
}

/// 2000 points on `[10⁻⁴/a, 200/a]`.
pub fn default_grid(a: f64) -> Result<Vec<f64>> {
    log_grid(1e-4 / a, 200.0 / a, 2000)
}

/// First derivative on a nonuniform grid: three-point central stencil inside,
/// three-point one-sided stencils at both ends.
pub fn derivative(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(Error::ParameterOutOfRange {
            what: "sample count",
            value: n.min(y.len()) as f64,
        });
    }
    let weights = |x0: f64, x1: f64, x2: f64, at: f64| {
        // derivative of the Lagrange interpolant through (x0, x1, x2) at `at`
        let w0 = (2.0 * at - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let w1 = (2.0 * at - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let w2 = (2.0 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
        (w0, w1, w2)
    };
    let mut d = vec![0.0; n];
    for i in 0..n {
        let j = i.clamp(1, n - 2);
        let (w0, w1, w2) = weights(x[j - 1], x[j], x[j + 1], x[i]);
        d[i] = w0 * y[j - 1] + w1 * y[j] + w2 * y[j + 1];
    }
    Ok(d)
}

/// The other spinor component from the first-order Dirac equations:
///
/// * spin: `G = (F′ + κF/r − U F) / (M + E − C_s)`
/// * pseudospin: `F = (G′ − κG/r + U G) / (M − E + C_ps)`
pub fn partner_component(grid: &[f64], primary: &[f64], energy: f64, problem: &Problem) -> Result<Vec<f64>> {
    let m = problem.mass;
    let c = problem.limit.constant;
    let (denominator, sign) = match problem.symmetry() {
        Symmetry::Spin => (m + energy - c, 1.0),
        Symmetry::Pseudospin => (m - energy + c, -1.0),
    };
    if denominator.abs() < 1e-12 {
        return Err(Error::EnergyDegenerateDenominator { value: denominator });
    }
    let slope = derivative(grid, primary)?;
    let kappa = problem.kappa() as f64;
    let a = problem.potential.a();
    Ok(grid
        .iter()
        .zip(primary)
        .zip(&slope)
        .map(|((&r, &f), &df)| {
            let u = problem.tensor.potential_unchecked(r, a);
            (df + sign * (kappa / r - u) * f) / denominator
        })
        .collect())
}

/// Interior sign changes, ignoring exact zeros.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0;
    let mut count = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub z: f64,
    pub residual: f64,
    /// Largest magnitude among the three terms of the equation.
    pub scale: f64,
}

impl OdeResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.residual.abs()
        } else {
            self.residual.abs() / self.scale
        }
    }
}

/// Default step for [`z_ode_residual`].
pub const ODE_CHECK_STEP: f64 = 4e-4;

/// Plugs the closed form into its `z`-space equation. Derivatives are
/// central differences at steps `h'` and `h'/2`, Richardson-combined, with
/// `h' = 4·h·z(1−z)` so the stencil shrinks towards the singular ends.
pub fn z_ode_residual(state: &SpinorState, z: f64, h: f64) -> OdeResidual {
    let coef = ode_coefficients(state.energy, &state.problem);
    let h = 4.0 * h * z * (1.0 - z);
    let f = |z| state.value_z(z);
    let f0 = f(z);
    let diffs = |h: f64| {
        let (fm, fp) = (f(z - h), f(z + h));
        ((fp - 2.0 * f0 + fm) / (h * h), (fp - fm) / (2.0 * h))
    };
    let (d2_h, d1_h) = diffs(h);
    let (d2_half, d1_half) = diffs(0.5 * h);
    let d2 = (4.0 * d2_half - d2_h) / 3.0;
    let d1 = (4.0 * d1_half - d1_h) / 3.0;
    let s = z * (1.0 - z);
    let t1 = d1 / z;
    let t2 = -coef.numerator(z) / (s * s) * f0;
    OdeResidual {
        z,
        residual: d2 + t1 + t2,
        scale: d2.abs().max(t1.abs()).max(t2.abs()),
    }
}
