//! How far the Pekeris-type replacement of `1/r²` moves the spectrum.

use serde::{Deserialize, Serialize};

use super::operator::Centrifugal;
use super::shooting::{mismatch, shoot_eigenvalue, ShootingConfig};
use super::verify::neighbour_bracket;
use crate::error::{Error, Result};
use crate::model::Problem;
use crate::spectrum::{solve_energy, unique_admissible, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxCurvePoint {
    pub r: f64,
    /// `1/r²`
    pub f1: f64,
    /// `a²/(1 − e^(−ar))²`
    pub f2: f64,
}

pub fn approx_curves(a: f64, r_grid: &[f64]) -> Result<Vec<ApproxCurvePoint>> {
    if !(a > 0.0) {
        return Err(Error::NonPositiveParameter { name: "a", value: a });
    }
    r_grid
        .iter()
        .map(|&r| {
            if !(r > 0.0) {
                return Err(Error::DomainError { what: "r", value: r });
            }
            let q = -(-a * r).exp_m1();
            Ok(ApproxCurvePoint {
                r,
                f1: 1.0 / (r * r),
                f2: a * a / (q * q),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub a: f64,
    pub tensor: f64,
    pub n: u32,
    pub kappa: i32,
    pub energy_analytic: f64,
    pub energy_pekeris: f64,
    pub energy_exact: f64,
    /// `E_exact − E_pekeris`.
    pub delta: f64,
    pub nodes_pekeris: usize,
    pub nodes_exact: usize,
}

/// Walks outward from `start` in steps of `step` until the mismatch of the
/// unapproximated equation changes sign between two points that both carry
/// `nodes` nodes, on either side. If no trial energy could be integrated,
/// the first failure is returned instead.
fn exact_bracket(
    problem: &Problem,
    start: f64,
    step: f64,
    limit: f64,
    nodes: usize,
    cfg: &ShootingConfig,
) -> Result<(f64, f64)> {
    let mut failure = None;
    let mut any = false;
    let mut sample = |e: f64| match mismatch(problem, e, cfg) {
        Ok(m) => {
            any = true;
            Some((m.value, m.nodes))
        }
        Err(err) => {
            failure.get_or_insert(err);
            None
        }
    };
    let centre = sample(start);
    let mut previous = [centre, centre];
    let mut offset = step;
    while offset <= limit {
        for (side, dir) in [1.0, -1.0].into_iter().enumerate() {
            let e = start + dir * offset;
            let current = sample(e);
            if let (Some((wi, ni)), Some((wo, no))) = (previous[side], current) {
                if (wi < 0.0) != (wo < 0.0) && ni == nodes && no == nodes {
                    let inner = e - dir * step;
                    return Ok(if dir > 0.0 { (inner, e) } else { (e, inner) });
                }
            }
            previous[side] = current;
        }
        offset += step;
    }
    if let (false, Some(err)) = (any, failure) {
        return Err(err);
    }
    Err(Error::NoSignChange {
        lo: start - limit,
        hi: start + limit,
    })
}

/// Solves one state with the Pekeris-type terms and with the exact `1/r²`,
/// `1/r` terms, both by shooting.
pub fn approximation_error_report(problem: &Problem) -> Result<ApproxReport> {
    let root = unique_admissible(&solve_energy(problem, &SearchConfig::default())?)?;
    let bracket = neighbour_bracket(problem, root.energy)?;
    let pekeris = shoot_eigenvalue(problem, bracket, &ShootingConfig::default())?;

    let a = problem.potential.a();
    let exact_cfg = ShootingConfig::exact(a, problem.potential.well_minimum());
    debug_assert_eq!(exact_cfg.mode, Centrifugal::Exact);
    let half = 0.5 * (bracket.1 - bracket.0);
    let nodes = problem.n() as usize;
    let (lo, hi) = exact_bracket(problem, pekeris.energy, half / 25.0, 8.0 * half, nodes, &exact_cfg)?;
    let exact = shoot_eigenvalue(problem, (lo, hi), &exact_cfg)?;
    Ok(ApproxReport {
        a,
        tensor: problem.tensor.strength(),
        n: problem.n(),
        kappa: problem.kappa(),
        energy_analytic: root.energy,
        energy_pekeris: pekeris.energy,
        energy_exact: exact.energy,
        delta: exact.energy - pekeris.energy,
        nodes_pekeris: pekeris.nodes,
        nodes_exact: exact.nodes,
    })
}
