//! Jacobi polynomials `P_n^(α,β)` by the three-term recurrence.

use crate::error::{Error, Result};

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    for (what, value) in [("jacobi alpha", alpha), ("jacobi beta", beta)] {
        if !(value > -1.0) {
            return Err(Error::ParameterOutOfRange { what, value });
        }
    }
    Ok(())
}

/// Coefficients of the recurrence
/// `c1·P_k = (c2 + c3·x)·P_{k−1} − c4·P_{k−2}` for `k ≥ 2`.
fn recurrence(k: u32, alpha: f64, beta: f64) -> (f64, f64, f64, f64) {
    let k = k as f64;
    let s = 2.0 * k + alpha + beta;
    let c1 = 2.0 * k * (k + alpha + beta) * (s - 2.0);
    let c2 = (s - 1.0) * (alpha * alpha - beta * beta);
    let c3 = (s - 1.0) * s * (s - 2.0);
    let c4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * s;
    (c1, c2, c3, c4)
}

pub fn jacobi(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_params(alpha, beta)?;
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    for k in 2..=n {
        let (c1, c2, c3, c4) = recurrence(k, alpha, beta);
        let p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Monomial coefficients (ascending powers of `z`) of `P_n^(α,β)(1 − 2z)`,
/// built by running the same recurrence on coefficient vectors.
pub fn jacobi_coefficients_in_z(n: u32, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    check_params(alpha, beta)?;
    let mut p0 = vec![1.0];
    if n == 0 {
        return Ok(p0);
    }
    // x − 1 = −2z
    let mut p1 = vec![alpha + 1.0, -(alpha + beta + 2.0)];
    for k in 2..=n {
        let (c1, c2, c3, c4) = recurrence(k, alpha, beta);
        let mut p2 = vec![0.0; k as usize + 1];
        for (i, &c) in p1.iter().enumerate() {
            // (c2 + c3·(1 − 2z))·c·z^i
            p2[i] += (c2 + c3) * c;
            p2[i + 1] -= 2.0 * c3 * c;
        }
        for (i, &c) in p0.iter().enumerate() {
            p2[i] -= c4 * c;
        }
        p2.iter_mut().for_each(|c| *c /= c1);
        p0 = p1;
        p1 = p2;
    }
    Ok(p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_degrees() {
        assert_eq!(jacobi(0, 3.2, -0.5, 0.3).unwrap(), 1.0);
        let (a, b, x) = (1.5, 0.25, -0.4);
        let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
        assert!((jacobi(1, a, b, x).unwrap() - p1).abs() < 1e-15);
    }

    #[test]
    fn legendre_special_case() {
        // P_2 = (3x² − 1)/2, P_3 = (5x³ − 3x)/2
        for x in [-0.9, -0.1, 0.0, 0.35, 1.0] {
            let p2 = jacobi(2, 0.0, 0.0, x).unwrap();
            let p3 = jacobi(3, 0.0, 0.0, x).unwrap();
            assert!((p2 - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-14);
            assert!((p3 - (5.0 * x * x * x - 3.0 * x) / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(matches!(
            jacobi(2, -1.0, 0.0, 0.0),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(jacobi(2, 0.0, -1.5, 0.0).is_err());
        assert!(jacobi_coefficients_in_z(2, 0.0, -1.0).is_err());
    }

    #[test]
    fn value_at_one_is_binomial() {
        // P_n(1) = Γ(n+α+1)/(n! Γ(α+1))
        let alpha = 2.7;
        let mut expected = 1.0;
        for n in 0..9u32 {
            if n > 0 {
                expected *= (n as f64 + alpha) / n as f64;
            }
            let p = jacobi(n, alpha, 0.4, 1.0).unwrap();
            assert!((p - expected).abs() <= 1e-12 * expected, "{n}: {p} vs {expected}");
        }
    }

    proptest! {
        #[test]
        fn coefficient_form_agrees(n in 0u32..8, a in -0.9f64..5.0, b in -0.9f64..5.0, z in 0.0f64..1.0) {
            let coeffs = jacobi_coefficients_in_z(n, a, b).unwrap();
            let poly: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);
            let direct = jacobi(n, a, b, 1.0 - 2.0 * z).unwrap();
            prop_assert!((poly - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }
}
