//! Energy quantization conditions for both symmetry limits and the
//! bracketing root search over them.
//!
//! With `ε = M + E − C_s` (spin) the condition reads
//!
//! ```text
//! R(E) = [n + ½ + √((A+κ+½)² + ξ·b) + √(κ(κ+1) + ζ)]² − A² + A − ξ(b+2) − ζ
//! ξ = ε·D·b/a²,   ζ = ε·(M − E)/a²
//! ```
//!
//! and the pseudospin form follows from `κ → κ−1`, `ξ → ξ̃ = (E−M−C_ps)·D·b/a²`,
//! `ζ → ζ̃ = (M−E+C_ps)(M+E)/a²`. `R` is undefined wherever a radicand is
//! negative; that is a value ([`None`]), not an error.

pub mod table;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PotentialParams, Problem, Symmetry};

pub use table::{
    compare_with_reference, spectrum_rows_for, spectrum_table, spectrum_table_for, Block, Preset, ReferenceDiff,
    ReferenceEntry, SpectrumRow, TableLayout, PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub xi: f64,
    pub zeta: f64,
    pub kind: Symmetry,
}

pub fn spin_coefficients(e: f64, m: f64, c_s: f64, p: &PotentialParams) -> CoefficientSet {
    let a2 = p.a() * p.a();
    let eps = m + e - c_s;
    CoefficientSet {
        xi: eps * p.d() * p.b() / a2,
        zeta: eps * (m - e) / a2,
        kind: Symmetry::Spin,
    }
}

pub fn pseudospin_coefficients(e: f64, m: f64, c_ps: f64, p: &PotentialParams) -> CoefficientSet {
    let a2 = p.a() * p.a();
    CoefficientSet {
        xi: (e - m - c_ps) * p.d() * p.b() / a2,
        zeta: (m - e + c_ps) * (m + e) / a2,
        kind: Symmetry::Pseudospin,
    }
}

pub fn coefficients(e: f64, problem: &Problem) -> CoefficientSet {
    let c = problem.limit.constant;
    match problem.symmetry() {
        Symmetry::Spin => spin_coefficients(e, problem.mass, c, &problem.potential),
        Symmetry::Pseudospin => pseudospin_coefficients(e, problem.mass, c, &problem.potential),
    }
}

/// The two radicands of the quantization condition at energy `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radicands {
    /// `(A + κ ± ½)² + ξ·b`; its root is `η/2`.
    pub tensor: f64,
    /// `κ(κ ± 1) + ζ`; its root is `δ`.
    pub centrifugal: f64,
}

impl Radicands {
    pub fn defined(&self) -> bool {
        self.tensor >= 0.0 && self.centrifugal >= 0.0
    }
}

pub fn radicands(e: f64, problem: &Problem) -> Radicands {
    let coef = coefficients(e, problem);
    radicands_from(&coef, problem)
}

fn radicands_from(coef: &CoefficientSet, problem: &Problem) -> Radicands {
    let kind = problem.symmetry();
    let shifted = problem.tensor.strength() + kind.shifted_kappa(problem.kappa());
    Radicands {
        tensor: shifted * shifted + coef.xi * problem.potential.b(),
        centrifugal: kind.centrifugal(problem.kappa()) + coef.zeta,
    }
}

fn residual_unchecked(e: f64, problem: &Problem) -> Option<f64> {
    let coef = coefficients(e, problem);
    let rad = radicands_from(&coef, problem);
    if !rad.defined() {
        return None;
    }
    let a_t = problem.tensor.strength();
    let b = problem.potential.b();
    let q = problem.n() as f64 + 0.5 + rad.tensor.sqrt() + rad.centrifugal.sqrt();
    Some(q * q - a_t * a_t + a_t - coef.xi * (b + 2.0) - coef.zeta)
}

/// Quantization residual for whichever limit `problem` is in.
pub fn residual(e: f64, problem: &Problem) -> Result<Option<f64>> {
    if !e.is_finite() {
        return Err(Error::DomainError {
            what: "energy",
            value: e,
        });
    }
    Ok(residual_unchecked(e, problem))
}

pub fn spin_residual(e: f64, problem: &Problem) -> Result<Option<f64>> {
    if problem.symmetry() != Symmetry::Spin {
        return Err(Error::WrongSymmetry {
            what: "spin_residual",
            expected: "spin",
        });
    }
    residual(e, problem)
}

pub fn pseudospin_residual(e: f64, problem: &Problem) -> Result<Option<f64>> {
    if problem.symmetry() != Symmetry::Pseudospin {
        return Err(Error::WrongSymmetry {
            what: "pseudospin_residual",
            expected: "pseudospin",
        });
    }
    residual(e, problem)
}

/// Coefficients of the hypergeometric-type equation in `z = e^(−ar)`,
///
/// ```text
/// F'' + F'/z − (α z² + β z + γ) / (z² (1 − z)²) · F = 0
/// ```
///
/// Spin: `α = A² − A + ξ(b+2) + ζ`, `β = 2A(κ+1) − 2ξ − 2ζ`, `γ = κ(κ+1) + ζ`.
/// Pseudospin uses the tilded coefficients with `κ → κ − 1`, so
/// `β = 2Aκ − 2ξ̃ − 2ζ̃` and `γ = κ(κ−1) + ζ̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl OdeCoefficients {
    /// `α z² + β z + γ`.
    pub fn numerator(&self, z: f64) -> f64 {
        (self.alpha * z + self.beta) * z + self.gamma
    }
}

pub fn ode_coefficients(e: f64, problem: &Problem) -> OdeCoefficients {
    let coef = coefficients(e, problem);
    let a_t = problem.tensor.strength();
    let b = problem.potential.b();
    let kind = problem.symmetry();
    let k_eff = match kind {
        Symmetry::Spin => problem.kappa() as f64,
        Symmetry::Pseudospin => problem.kappa() as f64 - 1.0,
    };
    OdeCoefficients {
        alpha: a_t * a_t - a_t + coef.xi * (b + 2.0) + coef.zeta,
        beta: 2.0 * a_t * (k_eff + 1.0) - 2.0 * coef.xi - 2.0 * coef.zeta,
        gamma: kind.centrifugal(problem.kappa()) + coef.zeta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn contains(&self, e: f64) -> bool {
        e >= self.lo && e <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Energy interval on which both radicands are nonnegative, before clipping.
///
/// The tensor radicand is linear and increasing in `E`; the centrifugal one
/// is a concave parabola, so the admissible set is always a single interval.
fn radicand_interval(problem: &Problem) -> (f64, f64) {
    let m = problem.mass;
    let c = problem.limit.constant;
    let p = &problem.potential;
    let a2 = p.a() * p.a();
    let kind = problem.symmetry();
    let shifted = problem.tensor.strength() + kind.shifted_kappa(problem.kappa());
    let ell = kind.centrifugal(problem.kappa());

    let slope = p.d() * p.b() * p.b() / a2;
    let (threshold, centre) = match kind {
        Symmetry::Spin => (c - m, 2.0 * m - c),
        Symmetry::Pseudospin => (m + c, 2.0 * m + c),
    };
    let lower = threshold - shifted * shifted / slope;
    let half = (centre * centre + 4.0 * a2 * ell).sqrt();
    let lo = lower.max(0.5 * (c - half));
    let hi = 0.5 * (c + half);
    (lo, hi)
}

fn nudge_inside(problem: &Problem, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..64 {
        if lo >= hi || radicands(lo, problem).defined() {
            break;
        }
        lo += (lo.abs() * f64::EPSILON).max(f64::MIN_POSITIVE) * 4.0;
    }
    for _ in 0..64 {
        if lo >= hi || radicands(hi, problem).defined() {
            break;
        }
        hi -= (hi.abs() * f64::EPSILON).max(f64::MIN_POSITIVE) * 4.0;
    }
    (lo, hi)
}

/// Maximal subintervals of `[e_min, e_max]` where the residual is defined.
pub fn admissible_windows(problem: &Problem, e_min: f64, e_max: f64) -> Result<Vec<Window>> {
    if !(e_min <= e_max) {
        return Err(Error::DomainError {
            what: "energy range",
            value: e_max - e_min,
        });
    }
    let (lo, hi) = radicand_interval(problem);
    let (lo, hi) = nudge_inside(problem, lo.max(e_min), hi.min(e_max));
    if lo > hi || !radicands(lo, problem).defined() {
        return Err(Error::EmptyWindow { lo: e_min, hi: e_max });
    }
    Ok(vec![Window { lo, hi }])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub grid_points: usize,
    /// Bracket width below which bisection may stop.
    pub x_tol: f64,
    /// Bisection also continues until `|R| ≤ residual_tol`, as far as
    /// floating-point resolution allows.
    pub residual_tol: f64,
    /// Overrides the default `±(M + |C| + 2D)` search range.
    pub range: Option<(f64, f64)>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_points: 2000,
            x_tol: 1e-12,
            residual_tol: 1e-9,
            range: None,
        }
    }
}

impl SearchConfig {
    pub fn range_for(&self, problem: &Problem) -> (f64, f64) {
        self.range.unwrap_or_else(|| {
            let half = problem.mass + problem.limit.constant.abs() + 2.0 * problem.potential.d();
            (-half, half)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyRoot {
    pub energy: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    /// `δ > 0` and both radicands nonnegative.
    pub admissible: bool,
    pub delta: f64,
    pub iterations: u32,
}

fn bisect(problem: &Problem, cfg: &SearchConfig, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Option<EnergyRoot> {
    let eval = |e: f64| residual_unchecked(e, problem);
    let mut iterations = 0u32;
    let mut last: Option<(f64, f64, f64, f64)> = None;
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if !(mid > lo && mid < hi) || iterations >= 400 {
            break;
        }
        let f_mid = eval(mid)?;
        iterations += 1;
        last = Some((mid, f_mid, lo, hi));
        if f_mid == 0.0 || (hi - lo <= cfg.x_tol && f_mid.abs() <= cfg.residual_tol) {
            break;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let (energy, residual, lo, hi) = last?;
    let rad = radicands(energy, problem);
    let delta = rad.centrifugal.max(0.0).sqrt();
    Some(EnergyRoot {
        energy,
        residual,
        bracket: (lo, hi),
        admissible: rad.defined() && delta > 0.0,
        delta,
        iterations,
    })
}

/// All sign changes of the residual inside the admissible windows, refined by
/// bisection and sorted by energy.
pub fn solve_energy(problem: &Problem, cfg: &SearchConfig) -> Result<Vec<EnergyRoot>> {
    if cfg.grid_points < 2 {
        return Err(Error::ParameterOutOfRange {
            what: "grid points",
            value: cfg.grid_points as f64,
        });
    }
    let (e_min, e_max) = cfg.range_for(problem);
    let windows = admissible_windows(problem, e_min, e_max)?;
    let mut roots = Vec::new();

    for w in &windows {
        let n = cfg.grid_points;
        let step = w.width() / (n - 1) as f64;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..n {
            let e = if i == n - 1 { w.hi } else { w.lo + step * i as f64 };
            let Some(f) = residual_unchecked(e, problem) else {
                prev = None;
                continue;
            };
            if let Some((e_prev, f_prev)) = prev {
                if (f_prev < 0.0) != (f < 0.0) && f_prev != 0.0 {
                    if let Some(root) = bisect(problem, cfg, e_prev, e, f_prev) {
                        roots.push(root);
                    }
                }
            }
            prev = Some((e, f));
        }
    }

    if roots.is_empty() {
        return Err(Error::NoRootFound {
            windows: windows.iter().map(|w| (w.lo, w.hi)).collect(),
        });
    }
    roots.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(roots)
}

/// The single admissible root, or an error naming every candidate.
pub fn unique_admissible(roots: &[EnergyRoot]) -> Result<EnergyRoot> {
    let admissible: Vec<&EnergyRoot> = roots.iter().filter(|r| r.admissible).collect();
    match admissible.as_slice() {
        [one] => Ok(**one),
        [] => Err(Error::NoRootFound { windows: vec![] }),
        many => Err(Error::AmbiguousRoot {
            count: many.len(),
            energies: many.iter().map(|r| r.energy).collect(),
        }),
    }
}

/// Doublet partner: `−κ−1` under spin symmetry, `1−κ` under pseudospin.
/// `None` when the partner would be `κ = 0`.
pub fn doublet_partner(kappa: i32, kind: Symmetry) -> Option<i32> {
    if kappa == 0 {
        return None;
    }
    let partner = match kind {
        Symmetry::Spin => -kappa - 1,
        Symmetry::Pseudospin => 1 - kappa,
    };
    (partner != 0).then_some(partner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_problem, ProblemSpec, ShapeConvention};
    use proptest::prelude::*;

    fn spec(symmetry: Symmetry, c: f64, r_e: f64, tensor: f64, n: i64, kappa: i64) -> Problem {
        validate_problem(&ProblemSpec {
            symmetry,
            mass: 1.0,
            d: 15.0,
            r_e,
            a: 0.1,
            constant: c,
            tensor,
            n,
            kappa,
            convention: ShapeConvention::Tabulated,
        })
        .unwrap()
    }

    #[test]
    fn spin_coefficient_zeros() {
        let p = PotentialParams::new(15.0, 0.8, 0.1).unwrap();
        assert_eq!(spin_coefficients(1.0, 1.0, 0.0, &p).zeta, 0.0);
        let c = spin_coefficients(2.0, 1.0, 3.0, &p);
        assert_eq!((c.xi, c.zeta), (0.0, 0.0));
    }

    #[test]
    fn pseudospin_coefficient_zeros() {
        let p = PotentialParams::new(15.0, 0.8, 0.1).unwrap();
        assert_eq!(pseudospin_coefficients(-1.0, 1.0, 0.0, &p).zeta, 0.0);
        assert_eq!(pseudospin_coefficients(-4.0, 1.0, -5.0, &p).xi, 0.0);
    }

    #[test]
    fn coefficients_by_substitution() {
        // hand expansion: eps = 1 + E, b = e^0.16 + 1
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let e = -0.994_680_673_675;
        let b = (0.16f64).exp() + 1.0;
        let c = coefficients(e, &prob);
        let eps = 1.0 + e;
        assert!((c.xi - eps * 15.0 * b * 100.0).abs() < 1e-12);
        assert!((c.zeta - eps * (1.0 - e) * 100.0).abs() < 1e-12);
        assert!(spin_residual(e, &prob).unwrap().unwrap().abs() < 1e-8);
    }

    /// Distance from `e` to the nearby root implied by a secant step.
    fn implied_offset(e: f64, prob: &Problem) -> f64 {
        let h = 1e-7;
        let f = |x| residual(x, prob).unwrap().unwrap();
        let slope = (f(e + h) - f(e - h)) / (2.0 * h);
        (f(e) / slope).abs()
    }

    // R has slopes of order 10^3..10^4 near these roots, so a 12-digit
    // printed energy alone leaves |R| of a few 1e-8; compare in energy.
    #[test]
    fn spin_residual_at_table_values() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let r = spin_residual(-0.994_680_673_675, &prob).unwrap().unwrap();
        assert!(r.abs() < 1e-8, "{r}");
        let prob = spec(Symmetry::Spin, 5.0, 0.4, 0.5, 1, 4);
        let r = spin_residual(4.032_169_241_69, &prob).unwrap().unwrap();
        assert!(r.abs() < 1e-8, "{r}");
    }

    #[test]
    fn pseudospin_residual_at_table_values() {
        // the 1s_{1/2} row carries NU index 1
        let prob = spec(Symmetry::Pseudospin, 0.0, 0.8, 0.0, 1, -1);
        let r = pseudospin_residual(1.006_347_538_49, &prob).unwrap().unwrap();
        assert!(r.abs() < 5e-8, "{r}");
        assert!(implied_offset(1.006_347_538_49, &prob) < 5e-12);
        let prob = spec(Symmetry::Pseudospin, -5.0, 0.4, 0.5, 2, -4);
        let r = pseudospin_residual(-3.921_388_522_43, &prob).unwrap().unwrap();
        assert!(r.abs() < 1e-7, "{r}");
        assert!(implied_offset(-3.921_388_522_43, &prob) < 5e-11);
    }

    #[test]
    fn residual_rejects_wrong_limit_and_nan() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        assert!(pseudospin_residual(0.0, &prob).is_err());
        assert!(spin_residual(f64::NAN, &prob).is_err());
        assert_eq!(spin_residual(-30.0, &prob).unwrap(), None);
    }

    #[test]
    fn windows_match_radicand_scan() {
        for (kind, c, kappa) in [
            (Symmetry::Spin, 0.0, -2),
            (Symmetry::Spin, 5.0, 4),
            (Symmetry::Pseudospin, 0.0, 2),
            (Symmetry::Pseudospin, -5.0, -4),
        ] {
            let prob = spec(kind, c, 0.8, 0.5, 0, kappa);
            let w = admissible_windows(&prob, -40.0, 40.0).unwrap();
            assert_eq!(w.len(), 1);
            let w = w[0];
            // independent scan for the first and last defined points
            let n = 400_001;
            let defined: Vec<f64> = (0..n)
                .map(|i| -40.0 + 80.0 * i as f64 / (n - 1) as f64)
                .filter(|&e| radicands(e, &prob).defined())
                .collect();
            let (lo, hi) = (defined[0], *defined.last().unwrap());
            let h = 80.0 / (n - 1) as f64;
            assert!(
                (w.lo - lo).abs() <= h && (w.hi - hi).abs() <= h,
                "{w:?} vs ({lo}, {hi})"
            );
            assert!(radicands(w.lo, &prob).defined() && radicands(w.hi, &prob).defined());
        }
    }

    #[test]
    fn spin_window_sits_near_minus_mass() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let w = admissible_windows(&prob, -40.0, 40.0).unwrap()[0];
        assert!(w.lo > -1.001 && w.lo < -1.0);
        assert!(w.hi < 1.02);
    }

    #[test]
    fn degenerate_window_request() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let w = admissible_windows(&prob, -0.5, -0.5).unwrap();
        assert_eq!(w[0].width(), 0.0);
        assert!(matches!(
            admissible_windows(&prob, 10.0, 10.0),
            Err(Error::EmptyWindow { .. })
        ));
        assert!(admissible_windows(&prob, 1.0, 0.0).is_err());
    }

    #[test]
    fn solve_reproduces_table_rows() {
        let cfg = SearchConfig::default();
        let cases = [
            (spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2), -0.994_680_673_675),
            (spec(Symmetry::Spin, 0.0, 0.8, 0.5, 0, -2), -0.995_138_731_87),
            (spec(Symmetry::Spin, 0.0, 0.8, 0.5, 0, 1), -0.993_888_275_050),
            (spec(Symmetry::Pseudospin, -5.0, 0.8, 0.0, 1, -1), -3.984_742_352_12),
        ];
        for (prob, expected) in cases {
            let roots = solve_energy(&prob, &cfg).unwrap();
            let root = unique_admissible(&roots).unwrap();
            assert!((root.energy - expected).abs() < 1e-6, "{} vs {expected}", root.energy);
            assert!(root.residual.abs() <= 1e-9);
            assert!(root.bracket.0 < root.energy && root.energy < root.bracket.1);
        }
    }

    #[test]
    fn grid_too_small() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let cfg = SearchConfig {
            grid_points: 1,
            ..Default::default()
        };
        assert!(solve_energy(&prob, &cfg).is_err());
    }

    #[test]
    fn no_root_reports_windows() {
        let prob = spec(Symmetry::Spin, 0.0, 0.8, 0.0, 0, -2);
        let cfg = SearchConfig {
            range: Some((-0.9, 0.0)),
            ..Default::default()
        };
        match solve_energy(&prob, &cfg) {
            Err(Error::NoRootFound { windows }) => assert_eq!(windows.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partners() {
        assert_eq!(doublet_partner(-2, Symmetry::Spin), Some(1));
        assert_eq!(doublet_partner(-1, Symmetry::Pseudospin), Some(2));
        assert_eq!(doublet_partner(-1, Symmetry::Spin), None);
        assert_eq!(doublet_partner(1, Symmetry::Pseudospin), None);
        assert_eq!(doublet_partner(0, Symmetry::Spin), None);
    }

    proptest! {
        #[test]
        fn spin_degeneracy_identity(e in -1.0f64..1.0, kappa in 1i64..8, c in prop::sample::select(vec![0.0, 5.0])) {
            let pos = spec(Symmetry::Spin, c, 0.8, 0.0, 0, kappa);
            let neg = spec(Symmetry::Spin, c, 0.8, 0.0, 0, -kappa - 1);
            prop_assert_eq!(residual(e, &pos).unwrap(), residual(e, &neg).unwrap());
        }

        #[test]
        fn pseudospin_degeneracy_identity(e in -4.5f64..1.5, kappa in 2i64..8, c in prop::sample::select(vec![0.0, -5.0])) {
            let pos = spec(Symmetry::Pseudospin, c, 0.4, 0.0, 1, kappa);
            let neg = spec(Symmetry::Pseudospin, c, 0.4, 0.0, 1, 1 - kappa);
            prop_assert_eq!(residual(e, &pos).unwrap(), residual(e, &neg).unwrap());
        }
    }
}
