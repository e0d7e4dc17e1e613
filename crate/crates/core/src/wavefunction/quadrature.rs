//! Composite Gauss-Legendre quadrature and numerical normalization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and weights on `[−1, 1]`, Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    /// `∫₀^{r_max} f² dr` before rescaling.
    pub integral: f64,
    /// Factor that makes the integral one: `integral^(−1/2)`.
    pub constant: f64,
    /// Where the tail criterion was met.
    pub r_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub order: usize,
    /// Panel width in units of the length scale.
    pub panel: f64,
    /// Stop once a whole panel is below `tail · peak`.
    pub tail: f64,
    /// Give up past this many length scales.
    pub reach: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            order: 20,
            panel: 0.25,
            tail: 1e-14,
            reach: 200.0,
        }
    }
}

/// `∫₀^∞ f(r)² dr` for a function that decays on the length scale `scale`
/// (typically `1/a`).
pub fn square_integral(f: impl Fn(f64) -> f64, scale: f64, cfg: &QuadratureConfig) -> Result<Normalization> {
    let (nodes, weights) = gauss_legendre(cfg.order);
    let width = cfg.panel * scale;
    let r_limit = cfg.reach * scale;
    let mut total = 0.0;
    let mut peak: f64 = 0.0;
    let mut lo = 0.0;
    while lo < r_limit {
        let hi = (lo + width).min(r_limit);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut panel_sum = 0.0;
        let mut panel_max: f64 = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let v = f(mid + half * x);
            let v2 = v * v;
            if !v2.is_finite() {
                return Err(Error::DomainError {
                    what: "integrand",
                    value: v,
                });
            }
            panel_sum += w * v2;
            panel_max = panel_max.max(v2);
        }
        total += half * panel_sum;
        let rising = panel_max > peak;
        peak = peak.max(panel_max);
        if peak > 0.0 && !rising && panel_max < cfg.tail * peak {
            return Ok(Normalization {
                integral: total,
                constant: total.sqrt().recip(),
                r_max: hi,
            });
        }
        lo = hi;
    }
    if peak == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Err(Error::NonConvergentTail { r_max: r_limit })
}

/// Composite trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre(7);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 12 ≤ 2·7 − 1
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
    }

    #[test]
    fn gaussian_norm() {
        // ∫₀^∞ e^{−r²} dr = √π/2
        let n = square_integral(|r| (-0.5 * r * r).exp(), 1.0, &QuadratureConfig::default()).unwrap();
        assert!((n.integral - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn already_normalized() {
        // ∫₀^∞ (√(2k) e^{−kr})² dr = 1
        let k: f64 = 0.3;
        let n = square_integral(
            |r| (2.0 * k).sqrt() * (-k * r).exp(),
            10.0,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!((n.constant - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_and_slow_tails() {
        let cfg = QuadratureConfig::default();
        assert_eq!(square_integral(|_| 0.0, 1.0, &cfg), Err(Error::ZeroNorm));
        assert!(matches!(
            square_integral(|r| 1.0 / (1.0 + r), 1.0, &cfg),
            Err(Error::NonConvergentTail { .. })
        ));
    }

    #[test]
    fn trapezoid_linear() {
        let x = [0.0, 0.5, 2.0];
        let y = [0.0, 0.5, 2.0];
        assert!((trapezoid(&x, &y) - 2.0).abs() < 1e-15);
    }
}
