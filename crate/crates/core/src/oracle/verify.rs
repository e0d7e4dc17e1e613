//! Per-state cross-checks of the closed-form spectrum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nu::nu_quantization_residual;
use super::shooting::{shoot_eigenvalue, ShootingConfig};
use crate::error::{Error, Result};
use crate::model::{quantum_labels, validate_problem, Problem, Symmetry};
use crate::spectrum::{
    admissible_windows, solve_energy, unique_admissible, Block, Preset, ReferenceEntry, SearchConfig, TableLayout,
    PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleChoice {
    Shooting,
    Nu,
    Both,
}

impl OracleChoice {
    pub fn shooting(self) -> bool {
        matches!(self, OracleChoice::Shooting | OracleChoice::Both)
    }

    pub fn nu(self) -> bool {
        matches!(self, OracleChoice::Nu | OracleChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub energy: f64,
    pub nu: f64,
    /// Analytic energy against a transcribed reference value.
    pub reference: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            energy: 1e-8,
            nu: 1e-6,
            reference: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub symmetry: Symmetry,
    pub constant: f64,
    pub r_e: f64,
    pub tensor: f64,
    pub n: u32,
    pub kappa: i32,
    pub label: String,
    pub e_analytic: f64,
    pub e_shoot: Option<f64>,
    pub delta_e: Option<f64>,
    pub nodes: Option<usize>,
    pub nu_residual: Option<f64>,
    pub e_reference: Option<f64>,
    pub ok: bool,
    pub error: Option<String>,
}

/// Displayed radial number for the label of a state with NU index `n`.
pub fn display_n(kind: Symmetry, n: u32, kappa: i32) -> u32 {
    match kind {
        Symmetry::Pseudospin if kappa > 0 => n.saturating_sub(PSEUDOSPIN_POSITIVE_KAPPA_LABEL_OFFSET),
        _ => n,
    }
}

/// A bracket around `energy` that excludes the neighbouring levels
/// `n ± 1` of the same `κ`, clipped to the admissible window.
pub fn neighbour_bracket(problem: &Problem, energy: f64) -> Result<(f64, f64)> {
    let cfg = SearchConfig::default();
    let level = |n: i64| -> Option<f64> {
        let n = u32::try_from(n).ok()?;
        let p = problem.with_quantum(n, problem.kappa()).ok()?;
        let roots = solve_energy(&p, &cfg).ok()?;
        unique_admissible(&roots).ok().map(|r| r.energy)
    };
    let n = problem.n() as i64;
    let gaps: Vec<f64> = [level(n - 1), level(n + 1)]
        .into_iter()
        .flatten()
        .map(|e| (e - energy).abs())
        .collect();
    let half = 0.5 * gaps.into_iter().fold(f64::INFINITY, f64::min);
    let half = if half.is_finite() {
        half
    } else {
        1e-3 * (1.0 + energy.abs())
    };
    let (range_lo, range_hi) = cfg.range_for(problem);
    let window = admissible_windows(problem, range_lo, range_hi)?[0];
    // stay strictly inside, where both exponents are real
    let pad = 1e-9 * (1.0 + energy.abs());
    Ok((
        (energy - half).max(window.lo + pad),
        (energy + half).min(window.hi - pad),
    ))
}

pub fn verify_state(problem: &Problem, choice: OracleChoice, tol: &Tolerances) -> StateReport {
    let kind = problem.symmetry();
    let label = quantum_labels(problem.kappa(), display_n(kind, problem.n(), problem.kappa()))
        .map(|l| l.to_string())
        .unwrap_or_default();
    let mut report = StateReport {
        symmetry: kind,
        constant: problem.limit.constant,
        r_e: problem.potential.r_e(),
        tensor: problem.tensor.strength(),
        n: problem.n(),
        kappa: problem.kappa(),
        label,
        e_analytic: f64::NAN,
        e_shoot: None,
        delta_e: None,
        nodes: None,
        nu_residual: None,
        e_reference: None,
        ok: false,
        error: None,
    };
    let result = (|| -> Result<bool> {
        let root = unique_admissible(&solve_energy(problem, &SearchConfig::default())?)?;
        report.e_analytic = root.energy;
        let mut ok = true;
        if choice.nu() {
            let r = nu_quantization_residual(root.energy, problem)?;
            report.nu_residual = Some(r);
            ok &= r.abs() <= tol.nu;
        }
        if choice.shooting() {
            let bracket = neighbour_bracket(problem, root.energy)?;
            let shot = shoot_eigenvalue(problem, bracket, &ShootingConfig::default())?;
            let delta = shot.energy - root.energy;
            report.e_shoot = Some(shot.energy);
            report.delta_e = Some(delta);
            report.nodes = Some(shot.nodes);
            ok &= delta.abs() <= tol.energy && shot.nodes == problem.n() as usize;
        }
        Ok(ok)
    })();
    match result {
        Ok(ok) => report.ok = ok,
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Every state behind a preset table, both members of each doublet.
pub fn preset_problems(preset: Preset) -> Result<Vec<Problem>> {
    let kind = preset
        .symmetry()
        .ok_or_else(|| Error::Parse(format!("preset '{}' has no tabulated states", preset.name())))?;
    block_problems(&preset.blocks(), &preset.tensors(), &TableLayout::standard(kind))
}

pub fn block_problems(blocks: &[Block], tensors: &[f64], layout: &TableLayout) -> Result<Vec<Problem>> {
    let mut out = Vec::new();
    for block in blocks {
        for &tensor in tensors {
            for row in &layout.rows {
                let (kn, kp) = row.kappas(block.symmetry);
                for kappa in [kn, kp] {
                    out.push(validate_problem(&block.problem_spec(tensor, row.n, kappa))?);
                }
            }
        }
    }
    Ok(out)
}

pub fn verify_all(problems: &[Problem], choice: OracleChoice, tol: &Tolerances) -> Vec<StateReport> {
    problems.par_iter().map(|p| verify_state(p, choice, tol)).collect()
}

/// Attaches the matching reference energy to each report and fails reports
/// whose analytic energy is further than `tol.reference` from it. Reports
/// without a reference entry are left as they are; the count of those is
/// returned.
pub fn apply_reference(reports: &mut [StateReport], reference: &[ReferenceEntry], tol: &Tolerances) -> usize {
    let same = |x: f64, y: f64| (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()));
    let mut missing = 0;
    for report in reports.iter_mut() {
        let shown = display_n(report.symmetry, report.n, report.kappa);
        let entry = reference.iter().find(|r| {
            r.symmetry == report.symmetry
                && same(r.constant, report.constant)
                && same(r.r_e, report.r_e)
                && same(r.tensor, report.tensor)
                && r.kappa == report.kappa
                && r.n_display == shown
        });
        match entry {
            Some(entry) => {
                report.e_reference = Some(entry.energy);
                if !((report.e_analytic - entry.energy).abs() <= tol.reference) {
                    report.ok = false;
                }
            }
            None => missing += 1,
        }
    }
    missing
}
