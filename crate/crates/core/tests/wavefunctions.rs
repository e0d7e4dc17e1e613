use sdf_dirac::model::Problem;
use sdf_dirac::oracle::verify::preset_problems;
use sdf_dirac::spectrum::{solve_energy, unique_admissible, Preset, SearchConfig};
use sdf_dirac::wavefunction::{count_sign_changes, log_grid, trapezoid, SpinorState};

fn state(problem: &Problem) -> SpinorState {
    let root = unique_admissible(&solve_energy(problem, &SearchConfig::default()).unwrap()).unwrap();
    SpinorState::new(problem, root.energy).unwrap()
}

fn table1_states() -> Vec<Problem> {
    preset_problems(Preset::Table1).unwrap()
}

#[test]
fn node_count_equals_jacobi_degree() {
    let grid = log_grid(1e-3, 3000.0, 30_000).unwrap();
    let mut skipped = 0;
    for p in table1_states().into_iter().filter(|p| p.n() == 0) {
        for n in 0..=2 {
            let q = p.with_quantum(n, p.kappa()).unwrap();
            // the shallow C_s = 5 wells hold only two ℓ = 1 levels
            if n == 2 && solve_energy(&q, &SearchConfig::default()).is_err() {
                skipped += 1;
                continue;
            }
            let s = state(&q);
            let values: Vec<f64> = grid.iter().map(|&r| s.value(r)).collect();
            assert_eq!(count_sign_changes(&values), n as usize, "{:?}", q.to_spec());
        }
    }
    assert_eq!(skipped, 8);
}

#[test]
fn normalized_states_integrate_to_one() {
    for p in table1_states() {
        let s = state(&p);
        let norm = s.normalization().unwrap();
        let points = 200_001;
        let grid: Vec<f64> = (0..points)
            .map(|i| norm.r_max * i as f64 / (points - 1) as f64)
            .collect();
        let y: Vec<f64> = grid.iter().map(|&r| (norm.constant * s.value(r)).powi(2)).collect();
        let integral = trapezoid(&grid, &y);
        assert!((integral - 1.0).abs() < 1e-8, "{:?}: {integral}", p.to_spec());
    }
}

/// Different `n` at equal `κ` are not orthogonal in the plain sense, since
/// the equation depends on the energy beyond a constant shift. Subtracting
/// the equations for two levels leaves
/// `∫ u_m u_n (V + C − E_m − E_n) dr = 0`, which must hold; the plain
/// overlap stays well below one.
#[test]
fn orthogonality_probe() {
    let mut worst_plain = 0.0f64;
    let mut pairs = 0;
    for p in table1_states().into_iter().filter(|p| p.n() == 0) {
        let states: Vec<(SpinorState, f64)> = (0..=2)
            .filter_map(|n| {
                let q = p.with_quantum(n, p.kappa()).ok()?;
                let root = unique_admissible(&solve_energy(&q, &SearchConfig::default()).ok()?).ok()?;
                let s = SpinorState::new(&q, root.energy).ok()?;
                let c = s.normalization().ok()?.constant;
                Some((s, c))
            })
            .collect();
        let r_max = states
            .iter()
            .map(|(s, _)| s.normalization().unwrap().r_max)
            .fold(0.0, f64::max);
        let points = 100_001;
        let grid: Vec<f64> = (0..points).map(|i| r_max * i as f64 / (points - 1) as f64).collect();
        let values: Vec<Vec<f64>> = states
            .iter()
            .map(|(s, c)| grid.iter().map(|&r| c * s.value(r)).collect())
            .collect();
        let well: Vec<f64> = grid
            .iter()
            .map(|&r| p.potential.deng_fan(r.max(1e-12)).unwrap())
            .collect();
        let c = p.limit.constant;
        for i in 0..states.len() {
            for j in i + 1..states.len() {
                let shift = c - states[i].0.energy - states[j].0.energy;
                let product: Vec<f64> = values[i].iter().zip(&values[j]).map(|(u, v)| u * v).collect();
                let weighted: Vec<f64> = product.iter().zip(&well).map(|(u, v)| u * (v + shift)).collect();
                let magnitude: Vec<f64> = weighted.iter().map(|v| v.abs()).collect();
                let plain = trapezoid(&grid, &product);
                let relation = trapezoid(&grid, &weighted) / trapezoid(&grid, &magnitude);
                assert!(relation.abs() < 1e-6, "{:?} n={i},{j}: {relation:e}", p.to_spec());
                assert!(plain.abs() < 0.5, "{:?} n={i},{j}: {plain}", p.to_spec());
                worst_plain = worst_plain.max(plain.abs());
                pairs += 1;
            }
        }
    }
    assert!(pairs > 64 && worst_plain > 0.0);
}
