use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::output::{emit, sig12, Cell, Tabular};
use super::{
    ApproxArgs, FormatArg, OutputArgs, SolveArgs, TableArgs, VerifyArgs, WavefunctionArgs, EXIT_FAILURE, EXIT_OK,
};
use crate::error::{Error, Result};
use crate::model::{quantum_labels, validate_problem, Problem, ProblemSpec, Symmetry};
use crate::oracle::verify::{apply_reference, display_n, preset_problems};
use crate::oracle::{approx_curves, verify_all, OracleChoice, StateReport, Tolerances};
use crate::spectrum::{
    compare_with_reference, solve_energy, spectrum_rows_for, unique_admissible, EnergyRoot, ReferenceEntry,
    SearchConfig, SpectrumRow,
};
use crate::wavefunction::{log_grid, normalize, partner_component, Normalization, SpinorState};

/// Largest accepted `|E − E_reference|` for `--diff`.
const REFERENCE_TOLERANCE: f64 = 1e-6;

fn preamble(command: &str, output: &OutputArgs) -> Vec<String> {
    let mut lines = vec![format!("sdf-dirac {} {command}", env!("CARGO_PKG_VERSION"))];
    if output.stamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        lines.push(format!("generated at unix time {secs}"));
    }
    lines
}

fn render(table: &Tabular, json: impl FnOnce() -> Result<String>, format: FormatArg) -> Result<String> {
    match format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Pretty => Ok(table.to_pretty()),
        FormatArg::Json => Ok(json()? + "\n"),
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(Error::from)
}

fn describe(spec: &ProblemSpec) -> String {
    format!(
        "{} M={} D={} a={} r_e={} C={} A={} shape={}",
        spec.symmetry.name(),
        spec.mass,
        spec.d,
        spec.a,
        spec.r_e,
        spec.constant,
        spec.tensor,
        spec.convention.name()
    )
}

fn label(problem: &Problem) -> String {
    let kind = problem.symmetry();
    quantum_labels(problem.kappa(), display_n(kind, problem.n(), problem.kappa()))
        .map(|l| l.to_string())
        .unwrap_or_default()
}

fn state_line(problem: &Problem) -> String {
    format!(
        "state: {} n={} kappa={} ({})",
        describe(&problem.to_spec()),
        problem.n(),
        problem.kappa(),
        label(problem)
    )
}

pub fn solve(args: &SolveArgs) -> Result<i32> {
    let problem = validate_problem(&args.state.spec())?;
    let roots: Vec<EnergyRoot> = solve_energy(&problem, &SearchConfig::default())?
        .into_iter()
        .filter(|r| r.admissible)
        .collect();
    if roots.is_empty() {
        return Err(Error::NoRootFound { windows: vec![] });
    }
    let mut table = Tabular::new(&["energy", "residual", "bracket_lo", "bracket_hi", "delta", "iterations"]);
    table.comments = preamble("solve", &args.output);
    table.comment(state_line(&problem));
    for r in &roots {
        table.push(vec![
            r.energy.into(),
            r.residual.into(),
            r.bracket.0.into(),
            r.bracket.1.into(),
            r.delta.into(),
            r.iterations.into(),
        ]);
    }
    let text = render(&table, || to_json(&roots), args.format)?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn spectrum_tabular(rows: &[SpectrumRow]) -> Tabular {
    let mut table = Tabular::new(&[
        "symmetry",
        "M",
        "D",
        "a",
        "r_e",
        "C",
        "A",
        "ell",
        "n",
        "kappa_neg",
        "label_neg",
        "E_neg",
        "kappa_pos",
        "label_pos",
        "E_pos",
        "splitting",
    ]);
    for r in rows {
        table.push(vec![
            r.symmetry.name().into(),
            Cell::Param(r.mass),
            Cell::Param(r.d),
            Cell::Param(r.a),
            Cell::Param(r.r_e),
            Cell::Param(r.constant),
            Cell::Param(r.tensor),
            r.ell.into(),
            r.n.into(),
            r.kappa_negative.into(),
            r.label_negative.to_string().into(),
            r.energy_negative.into(),
            r.kappa_positive.into(),
            r.label_positive.to_string().into(),
            r.energy_positive.into(),
            r.splitting.into(),
        ]);
    }
    table
}

pub fn table(args: &TableArgs) -> Result<i32> {
    let (blocks, default_tensors, source) = match args.preset {
        Some(preset) => {
            if preset.symmetry().is_none() {
                return Err(Error::Parse(format!(
                    "preset '{}' has no spectrum table",
                    preset.name()
                )));
            }
            (preset.blocks(), preset.tensors(), format!("preset {}", preset.name()))
        }
        None => {
            let block = args
                .block
                .block()
                .ok_or_else(|| Error::Parse("table needs --preset, or --symmetry, --D, --a and --re".to_string()))?;
            (vec![block], vec![0.0, 0.5], "custom block".to_string())
        }
    };
    let tensors = if args.block.tensor.is_empty() {
        default_tensors
    } else {
        args.block.tensor.clone()
    };
    // reject bad input before any row is attempted
    for block in &blocks {
        for &tensor in &tensors {
            validate_problem(&block.problem_spec(tensor, 0, -1))?;
        }
    }

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for result in spectrum_rows_for(&blocks, &tensors, None, &SearchConfig::default()) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(e.to_string()),
        }
    }

    let mut table = spectrum_tabular(&rows);
    table.comments = preamble("table", &args.output);
    table.comment(source);
    let mut ok = failures.is_empty();
    for f in &failures {
        eprintln!("failed: {f}");
        table.comment(format!("failed: {f}"));
    }
    if let Some(path) = &args.diff {
        let reference = ReferenceEntry::from_path(path)?;
        let diff = compare_with_reference(&rows, &reference);
        let summary = format!(
            "reference {}: {} entries, {} unmatched, max |dE| = {:.3e}",
            path.display(),
            diff.entries.len(),
            diff.unmatched,
            diff.max_abs_delta
        );
        eprintln!("{summary}");
        table.comment(summary);
        ok &= diff.unmatched == 0 && diff.max_abs_delta <= REFERENCE_TOLERANCE;
    }
    let text = render(&table, || to_json(&rows), args.format)?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct WavefunctionSample {
    r: f64,
    z: f64,
    upper: f64,
    lower: f64,
}

#[derive(Serialize)]
struct WavefunctionDocument<'a> {
    state: ProblemSpec,
    label: String,
    energy: f64,
    normalization: Option<Normalization>,
    samples: &'a [WavefunctionSample],
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<i32> {
    let problem = validate_problem(&args.state.spec())?;
    let root = unique_admissible(&solve_energy(&problem, &SearchConfig::default())?)?;
    let state = SpinorState::new(&problem, root.energy)?;
    let a = problem.potential.a();
    let r_max = args.rmax.unwrap_or(200.0 / a);
    let grid = log_grid(1e-4 / a, r_max, args.points as usize)?;
    let norm = if args.normalize {
        Some(state.normalization()?)
    } else {
        None
    };
    let scale = norm.map_or(1.0, |n| n.constant);
    let primary: Vec<f64> = state.sample(&grid).iter().map(|s| scale * s.value).collect();
    let partner = partner_component(&grid, &primary, root.energy, &problem)?;
    let (upper, lower, solved) = match problem.symmetry() {
        Symmetry::Spin => (&primary, &partner, "F"),
        Symmetry::Pseudospin => (&partner, &primary, "G"),
    };
    let samples: Vec<WavefunctionSample> = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| WavefunctionSample {
            r,
            z: (-a * r).exp(),
            upper: upper[i],
            lower: lower[i],
        })
        .collect();

    let mut table = Tabular::new(&["r", "z", "F", "G"]);
    table.comments = preamble("wavefunction", &args.output);
    table.comment(state_line(&problem));
    table.comment(format!("energy: {}", sig12(root.energy)));
    let other = if solved == "F" { "G" } else { "F" };
    table.comment(format!("{solved}: closed form; {other}: from the first-order equation"));
    match norm {
        Some(n) => {
            let check = normalize(|r| n.constant * state.value(r), a)?;
            table.comment(format!(
                "normalized: constant {}, integral of {solved}^2 over [0, {}] = {}",
                sig12(n.constant),
                sig12(check.r_max),
                sig12(check.integral)
            ));
        }
        None => table.comment("not normalized"),
    }
    for s in &samples {
        table.push(vec![s.r.into(), s.z.into(), s.upper.into(), s.lower.into()]);
    }
    let document = || {
        to_json(&WavefunctionDocument {
            state: problem.to_spec(),
            label: label(&problem),
            energy: root.energy,
            normalization: norm,
            samples: &samples,
        })
    };
    let text = render(&table, document, args.format)?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    oracle: OracleChoice,
    tolerances: Tolerances,
    total: usize,
    failed: usize,
    max_abs_delta_e: Option<f64>,
    max_abs_nu_residual: Option<f64>,
    states: &'a [StateReport],
}

fn max_abs(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    values.flatten().map(f64::abs).reduce(f64::max)
}

fn verify_problems(args: &VerifyArgs) -> Result<Vec<Problem>> {
    if let Some(preset) = args.preset {
        return preset_problems(preset);
    }
    let missing = || Error::Parse("verify needs --preset, or --symmetry, --D, --a, --re, --n and --kappa".to_string());
    let block = args.block.block().ok_or_else(missing)?;
    let (n, kappa) = (args.n.ok_or_else(missing)?, args.kappa.ok_or_else(missing)?);
    let tensors = if args.block.tensor.is_empty() {
        vec![0.0]
    } else {
        args.block.tensor.clone()
    };
    tensors
        .iter()
        .map(|&tensor| {
            let mut spec = block.problem_spec(tensor, 0, 1);
            (spec.n, spec.kappa) = (n, kappa);
            validate_problem(&spec)
        })
        .collect()
}

pub fn verify(args: &VerifyArgs) -> Result<i32> {
    let problems = verify_problems(args)?;
    let reference = args.diff.as_deref().map(ReferenceEntry::from_path).transpose()?;
    let tol = Tolerances::default();
    let choice: OracleChoice = args.oracle.into();
    let mut reports = verify_all(&problems, choice, &tol);
    if let (Some(reference), Some(path)) = (&reference, &args.diff) {
        let missing = apply_reference(&mut reports, reference, &tol);
        if missing > 0 {
            eprintln!("note: {missing} states have no entry in {}", path.display());
        }
    }

    let failed = reports.iter().filter(|r| !r.ok).count();
    let max_de = max_abs(reports.iter().map(|r| r.delta_e));
    let max_nu = max_abs(reports.iter().map(|r| r.nu_residual));
    let fmt_opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3e}"));
    let summary = format!(
        "verified {} states: {failed} failed, max |dE| = {}, max |nu residual| = {}",
        reports.len(),
        fmt_opt(max_de),
        fmt_opt(max_nu)
    );
    eprintln!("{summary}");

    let mut table = Tabular::new(&[
        "symmetry",
        "C",
        "r_e",
        "A",
        "n",
        "kappa",
        "label",
        "E_analytic",
        "E_shoot",
        "delta_E",
        "nodes",
        "nu_residual",
        "E_reference",
        "ok",
        "error",
    ]);
    table.comments = preamble("verify", &args.output);
    table.comment(summary);
    for r in &reports {
        table.push(vec![
            r.symmetry.name().into(),
            Cell::Param(r.constant),
            Cell::Param(r.r_e),
            Cell::Param(r.tensor),
            r.n.into(),
            r.kappa.into(),
            r.label.clone().into(),
            r.e_analytic.into(),
            r.e_shoot.into(),
            r.delta_e.into(),
            r.nodes.map_or(Cell::Missing, Cell::from),
            r.nu_residual.into(),
            r.e_reference.into(),
            (if r.ok { "yes" } else { "no" }).into(),
            r.error.clone().map_or(Cell::Missing, Cell::from),
        ]);
    }
    let document = || {
        to_json(&VerifyDocument {
            oracle: choice,
            tolerances: tol,
            total: reports.len(),
            failed,
            max_abs_delta_e: max_de,
            max_abs_nu_residual: max_nu,
            states: &reports,
        })
    };
    let text = render(&table, document, args.format)?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Serialize)]
struct CurvePoint {
    r: f64,
    f1: f64,
    f2: Vec<f64>,
}

#[derive(Serialize)]
struct CurveDocument<'a> {
    a_values: &'a [f64],
    points: &'a [CurvePoint],
}

pub fn approx(args: &ApproxArgs) -> Result<i32> {
    if !(args.rmin > 0.0) {
        return Err(Error::DomainError {
            what: "rmin",
            value: args.rmin,
        });
    }
    if !(args.rmax > args.rmin) {
        return Err(Error::DomainError {
            what: "rmax",
            value: args.rmax,
        });
    }
    if args.a_values.is_empty() {
        return Err(Error::Parse("--a-values needs at least one value".to_string()));
    }
    let count = args.points as usize;
    let grid: Vec<f64> = (0..count)
        .map(|i| {
            if i + 1 == count {
                args.rmax
            } else {
                args.rmin + (args.rmax - args.rmin) * i as f64 / (count - 1) as f64
            }
        })
        .collect();
    let curves = args
        .a_values
        .iter()
        .map(|&a| approx_curves(a, &grid))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<CurvePoint> = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| CurvePoint {
            r,
            f1: curves[0][i].f1,
            f2: curves.iter().map(|c| c[i].f2).collect(),
        })
        .collect();

    let names: Vec<String> = ["r".to_string(), "f1".to_string()]
        .into_iter()
        .chain(args.a_values.iter().map(|a| format!("f2(a={a})")))
        .collect();
    let mut table = Tabular::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    table.comments = preamble("approx", &args.output);
    table.comment("f1 = 1/r^2, f2 = a^2/(1 - exp(-a r))^2");
    for p in &points {
        let mut row: Vec<Cell> = vec![p.r.into(), p.f1.into()];
        row.extend(p.f2.iter().map(|&v| Cell::from(v)));
        table.push(row);
    }
    let document = || {
        to_json(&CurveDocument {
            a_values: &args.a_values,
            points: &points,
        })
    };
    let text = render(&table, document, args.format)?;
    emit(args.output.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}
