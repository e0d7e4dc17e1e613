//! Second-order radial equations `u'' = W(r)·u` written directly in `r`,
//! from the potentials rather than from the `z`-space coefficients.

use serde::{Deserialize, Serialize};

use crate::model::{Problem, Symmetry};

/// Treatment of the `1/r²` and `1/r` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centrifugal {
    /// `1/r²` and `1/r` as they are.
    Exact,
    /// `1/r² → a²/(1 − e^(−ar))²`, `1/r → a/(1 − e^(−ar))`.
    Pekeris,
}

/// Effective orbital index: `κ` for spin, `κ − 1` for pseudospin.
fn kappa_eff(problem: &Problem) -> f64 {
    match problem.symmetry() {
        Symmetry::Spin => problem.kappa() as f64,
        Symmetry::Pseudospin => problem.kappa() as f64 - 1.0,
    }
}

/// `M + E − C_s` (spin) or `M − E + C_ps` (pseudospin).
pub fn coupling(e: f64, problem: &Problem) -> f64 {
    let (m, c) = (problem.mass, problem.limit.constant);
    match problem.symmetry() {
        Symmetry::Spin => m + e - c,
        Symmetry::Pseudospin => m - e + c,
    }
}

/// `W(r)` of the decoupled equation for the solved component.
///
/// Spin:
/// `[κ(κ+1) + (2κ+1)A e^(−ar) + A² e^(−2ar)]/r² + A a e^(−ar)/r + ε(M − E + Σ(r))`.
/// Pseudospin is the same expression with `κ → κ − 1` and
/// `ε(M + E − Δ(r))`, `ε = M − E + C_ps`.
pub fn effective_potential(r: f64, e: f64, problem: &Problem, mode: Centrifugal) -> f64 {
    let a = problem.potential.a();
    let ar = a * r;
    let ex = (-ar).exp();
    let (f1, g1) = match mode {
        Centrifugal::Exact => (1.0 / (r * r), 1.0 / r),
        Centrifugal::Pekeris => {
            let q = -(-ar).exp_m1();
            (a * a / (q * q), a / q)
        }
    };
    let k = kappa_eff(problem);
    let at = problem.tensor.strength();
    let angular = k * (k + 1.0) + (2.0 * k + 1.0) * at * ex + at * at * ex * ex;
    angular * f1 + at * a * ex * g1 + coupling(e, problem) * mass_term(r, e, problem)
}

fn mass_term(r: f64, e: f64, problem: &Problem) -> f64 {
    let v = problem.potential.deng_fan_unchecked(r);
    match problem.symmetry() {
        Symmetry::Spin => problem.mass - e + v,
        Symmetry::Pseudospin => problem.mass + e - v,
    }
}

/// The pseudospin equation as it follows from the first-order pair with
/// `F = (G′ − κG/r + UG)/(M − E + C_ps)`: the `A a e^(−ar)/r` term enters
/// with a minus sign. Identical to [`effective_potential`] in the spin limit.
pub fn dirac_effective_potential(r: f64, e: f64, problem: &Problem) -> f64 {
    let exact = effective_potential(r, e, problem, Centrifugal::Exact);
    match problem.symmetry() {
        Symmetry::Spin => exact,
        Symmetry::Pseudospin => {
            let a = problem.potential.a();
            exact - 2.0 * problem.tensor.strength() * a * (-a * r).exp() / r
        }
    }
}

/// `lim r²·W(r)` as `r → 0`; both treatments share it.
pub fn origin_strength(e: f64, problem: &Problem) -> f64 {
    let k = kappa_eff(problem);
    let at = problem.tensor.strength();
    let p = &problem.potential;
    let well = p.d() * p.b() * p.b() / (p.a() * p.a());
    let sign = match problem.symmetry() {
        Symmetry::Spin => 1.0,
        Symmetry::Pseudospin => -1.0,
    };
    (k + at) * (k + at + 1.0) + sign * coupling(e, problem) * well
}

/// `lim W(r)` as `r → ∞`.
pub fn asymptotic_strength(e: f64, problem: &Problem, mode: Centrifugal) -> f64 {
    let a = problem.potential.a();
    let k = kappa_eff(problem);
    let rest = coupling(e, problem)
        * match problem.symmetry() {
            Symmetry::Spin => problem.mass - e,
            Symmetry::Pseudospin => problem.mass + e,
        };
    match mode {
        Centrifugal::Exact => rest,
        Centrifugal::Pekeris => k * (k + 1.0) * a * a + rest,
    }
}
