//! Jacobi polynomials from their explicit sum and from the Rodrigues form,
//! independent of the recurrence in `wavefunction::jacobi`.

use crate::error::{Error, Result};

/// Generalized binomial `C(x, k) = x(x−1)…(x−k+1)/k!`.
fn binomial(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// Falling factorial `x(x−1)…(x−k+1)`.
fn falling(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64))
}

/// `Σ_s C(n+α, n−s) C(n+β, s) ((x−1)/2)^s ((x+1)/2)^(n−s)`.
pub fn jacobi_explicit_sum(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(Error::ParameterOutOfRange {
            what: "jacobi parameter",
            value: alpha.min(beta),
        });
    }
    let (u, v) = ((x - 1.0) / 2.0, (x + 1.0) / 2.0);
    Ok((0..=n)
        .map(|s| {
            let nf = n as f64;
            binomial(nf + alpha, n - s) * binomial(nf + beta, s) * u.powi(s as i32) * v.powi((n - s) as i32)
        })
        .sum())
}

/// Monomial coefficients in `z` of `(1/n!)(1/ρ) dⁿ/dzⁿ [σⁿ ρ]` with
/// `σ = z(1−z)` and weight `ρ = z^(2δ) (1−z)^η`, expanded by Leibniz:
///
/// ```text
/// (1/n!) Σ_k C(n,k) (p)_k (−1)^(n−k) (q)_(n−k) z^(n−k) (1−z)^k
/// ```
///
/// with `p = n + 2δ`, `q = n + η` and `(x)_k` the falling factorial.
pub fn rodrigues_coefficients(n: u32, delta: f64, eta: f64) -> Vec<f64> {
    let p = n as f64 + 2.0 * delta;
    let q = n as f64 + eta;
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let mut out = vec![0.0; n as usize + 1];
    for k in 0..=n {
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let c = binomial(n as f64, k) * falling(p, k) * sign * falling(q, n - k) / n_fact;
        // (1 − z)^k = Σ_j C(k, j) (−z)^j
        for j in 0..=k {
            let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
            out[(n - k + j) as usize] += c * binomial(k as f64, j) * sj;
        }
    }
    out
}
