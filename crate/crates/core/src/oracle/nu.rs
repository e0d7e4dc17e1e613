//! Nikiforov-Uvarov construction for `ψ'' + (τ̃/σ)ψ' + (σ̃/σ²)ψ = 0` with
//! `deg σ, deg σ̃ ≤ 2` and `deg τ̃ ≤ 1`.

use serde::{Deserialize, Serialize};

use super::operator::{effective_potential, Centrifugal};
use crate::error::{Error, Result};
use crate::model::Problem;
use crate::spectrum::{ode_coefficients, OdeCoefficients};

/// Polynomials as ascending coefficient arrays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NUProblem {
    pub sigma: [f64; 3],
    pub tau_tilde: [f64; 2],
    pub sigma_tilde: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NUSolution {
    pub pi: [f64; 2],
    pub k: f64,
    pub tau: [f64; 2],
    pub lambda: f64,
    /// `σ''`, kept for `λ_n`.
    pub sigma_second: f64,
}

impl NUSolution {
    /// `λ_n = −nτ′ − n(n−1)σ''/2`.
    pub fn lambda_n(&self, n: u32) -> f64 {
        let n = n as f64;
        -n * self.tau[1] - 0.5 * n * (n - 1.0) * self.sigma_second
    }
}

fn eval2(p: &[f64; 3], z: f64) -> f64 {
    (p[2] * z + p[1]) * z + p[0]
}

impl NUProblem {
    /// The hypergeometric form of the radial equation at energy `e`:
    /// `σ = z(1−z)`, `τ̃ = 1−z`, `σ̃ = −(αz² + βz + γ)`.
    pub fn from_coefficients(c: &OdeCoefficients) -> Self {
        Self {
            sigma: [0.0, 1.0, -1.0],
            tau_tilde: [1.0, -1.0],
            sigma_tilde: [-c.gamma, -c.beta, -c.alpha],
        }
    }

    /// `(σ′ − τ̃)/2`.
    fn half_difference(&self) -> [f64; 2] {
        [
            0.5 * (self.sigma[1] - self.tau_tilde[0]),
            0.5 * (2.0 * self.sigma[2] - self.tau_tilde[1]),
        ]
    }

    /// Coefficients of `((σ′−τ̃)/2)² − σ̃ + kσ`.
    pub fn radicand(&self, k: f64) -> [f64; 3] {
        let p = self.half_difference();
        [
            p[0] * p[0] - self.sigma_tilde[0] + k * self.sigma[0],
            2.0 * p[0] * p[1] - self.sigma_tilde[1] + k * self.sigma[1],
            p[1] * p[1] - self.sigma_tilde[2] + k * self.sigma[2],
        ]
    }

    /// The `k` values that make [`radicand`](Self::radicand) a perfect square.
    pub fn k_candidates(&self) -> Vec<f64> {
        // discriminant c1² − 4 c2 c0 with c_i = u_i + k·s_i
        let u = self.radicand(0.0);
        let s = self.sigma;
        let qa = s[1] * s[1] - 4.0 * s[2] * s[0];
        let qb = 2.0 * u[1] * s[1] - 4.0 * (u[2] * s[0] + s[2] * u[0]);
        let qc = u[1] * u[1] - 4.0 * u[2] * u[0];
        if qa == 0.0 {
            return if qb == 0.0 { Vec::new() } else { vec![-qc / qb] };
        }
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return Vec::new();
        }
        let root = disc.sqrt();
        // avoid cancellation
        let q = -0.5 * (qb + qb.signum() * root);
        let mut ks = vec![q / qa];
        if q != 0.0 {
            ks.push(qc / q);
        }
        ks.sort_by(f64::total_cmp);
        ks
    }

    /// Linear `q(z)` with `q² =` radicand, when the radicand is a square.
    fn square_root(&self, k: f64) -> Option<[f64; 2]> {
        let c = self.radicand(k);
        if c[2] > 0.0 {
            let q1 = c[2].sqrt();
            Some([c[1] / (2.0 * q1), q1])
        } else if c[2] == 0.0 && c[0] >= 0.0 {
            Some([c[0].sqrt(), 0.0])
        } else {
            None
        }
    }
}

/// Runs the construction: every `(k, ±)` pair, keep `τ′ < 0`; prefer a
/// positive small-`z` exponent `π(0)/σ′(0)`, then the most negative `τ′`.
pub fn nu_construct(p: &NUProblem) -> Result<NUSolution> {
    let half = p.half_difference();
    let mut best: Option<(bool, f64, NUSolution)> = None;
    for k in p.k_candidates() {
        let Some(q) = p.square_root(k) else {
            continue;
        };
        for sign in [1.0, -1.0] {
            let pi = [half[0] + sign * q[0], half[1] + sign * q[1]];
            let tau = [p.tau_tilde[0] + 2.0 * pi[0], p.tau_tilde[1] + 2.0 * pi[1]];
            if !(tau[1] < 0.0) {
                continue;
            }
            let positive = p.sigma[1] != 0.0 && pi[0] / p.sigma[1] > 0.0;
            let candidate = NUSolution {
                pi,
                k,
                tau,
                lambda: k + pi[1],
                sigma_second: 2.0 * p.sigma[2],
            };
            let better = match &best {
                None => true,
                Some((bp, bt, _)) => (positive && !bp) || (positive == *bp && tau[1] < *bt),
            };
            if better {
                best = Some((positive, tau[1], candidate));
            }
        }
    }
    best.map(|(_, _, s)| s).ok_or(Error::NoValidBranch)
}

/// `π² − 2π·(σ′−τ̃)/2 + σ̃ − kσ`, zero when `π` solves its defining
/// quadratic. Evaluated at one point.
pub fn pi_equation_residual(p: &NUProblem, s: &NUSolution, z: f64) -> f64 {
    let half = p.half_difference();
    let pi = s.pi[0] + s.pi[1] * z;
    let h = half[0] + half[1] * z;
    let lhs = (pi - h) * (pi - h);
    let rhs = eval2(&p.radicand(s.k), z);
    lhs - rhs
}

/// `λ − λ_n` for the state at trial energy `e`.
pub fn nu_quantization_residual(e: f64, problem: &Problem) -> Result<f64> {
    let p = NUProblem::from_coefficients(&ode_coefficients(e, problem));
    let s = nu_construct(&p)?;
    Ok(s.lambda - s.lambda_n(problem.n()))
}

/// `(α, β, γ)` recovered from the `r`-space equation under the Pekeris
/// replacement: `(1 − z)²·W/a²` is quadratic in `z`, so three samples fix it.
pub fn dual_ode_coefficients(e: f64, problem: &Problem) -> OdeCoefficients {
    let a = problem.potential.a();
    let nodes = [0.25, 0.5, 0.75];
    let q = nodes.map(|z: f64| {
        let r = -z.ln() / a;
        effective_potential(r, e, problem, Centrifugal::Pekeris) / (a * a) * (1.0 - z) * (1.0 - z)
    });
    // Lagrange interpolation back to monomials
    let [z0, z1, z2] = nodes;
    let l = [
        q[0] / ((z0 - z1) * (z0 - z2)),
        q[1] / ((z1 - z0) * (z1 - z2)),
        q[2] / ((z2 - z0) * (z2 - z1)),
    ];
    OdeCoefficients {
        alpha: l[0] + l[1] + l[2],
        beta: -(l[0] * (z1 + z2) + l[1] * (z0 + z2) + l[2] * (z0 + z1)),
        gamma: l[0] * z1 * z2 + l[1] * z0 * z2 + l[2] * z0 * z1,
    }
}
