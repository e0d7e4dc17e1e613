use std::path::PathBuf;
use std::process::{Command, Output};

use sdf_dirac::spectrum::{EnergyRoot, SpectrumRow};

const FIRST_STATE: [&str; 14] = [
    "--symmetry",
    "spin",
    "--D",
    "15",
    "--a",
    "0.1",
    "--re",
    "0.8",
    "--A",
    "0",
    "--n",
    "0",
    "--kappa",
    "-2",
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdf-dirac"))
        .args(args)
        .env("SDF_DIRAC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn body(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

#[test]
fn solve_reports_the_tabulated_level() {
    let out = run(&[&["solve"], &FIRST_STATE[..], &["--format", "json"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let roots: Vec<EnergyRoot> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].energy + 0.994680673676).abs() < 1e-9, "{roots:?}");

    let out = run(&[&["solve"], &FIRST_STATE[..], &["--format", "csv"]].concat());
    let lines = body(&stdout(&out));
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("energy,residual"));
    assert!(lines[1].starts_with("-0.994680673676,"), "{}", lines[1]);
}

#[test]
fn invalid_input_exits_with_one() {
    let mut args = [&["solve"], &FIRST_STATE[..]].concat();
    *args.last_mut().unwrap() = "0";
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("kappa must be nonzero"));

    let out = run(&["solve", "--symmetry", "spin", "--D", "15", "--a", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[&["wavefunction"], &FIRST_STATE[..], &["--points", "0"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["approx", "--rmin", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["table", "--preset", "fig1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["table", "--preset", "table1", "--D", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn tables_match_their_references() {
    for (preset, file) in [("table1", "reference_table1.csv"), ("table2", "reference_table2.csv")] {
        let out = run(&["table", "--preset", preset, "--diff", &data(file), "--format", "csv"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stderr(&out).contains("128 entries, 0 unmatched"), "{}", stderr(&out));
        assert_eq!(body(&stdout(&out)).len(), 65);
    }
}

#[test]
fn perturbed_reference_fails_the_diff() {
    let text = std::fs::read_to_string(data("reference_table1.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let target = lines
        .iter()
        .position(|l| !l.starts_with('#') && l.contains("-0.99468067"))
        .unwrap();
    lines[target] = lines[target].replace("-0.99468067", "-0.99478067");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.csv");
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let path = path.display().to_string();

    let out = run(&["table", "--preset", "table1", "--diff", &path, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "--preset", "table1", "--oracle", "nu", "--diff", &path]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["failed"], 1);
}

#[test]
fn table_json_round_trips() {
    let out = run(&["table", "--preset", "table2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<SpectrumRow> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 64);
    assert_eq!(serde_json::to_string_pretty(&rows).unwrap() + "\n", stdout(&out));
}

#[test]
fn custom_block_table() {
    let out = run(&[
        "table",
        "--symmetry",
        "pseudospin",
        "--D",
        "15",
        "--a",
        "0.1",
        "--re",
        "0.8",
        "--C",
        "-5",
        "--A",
        "0.5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let lines = body(&stdout(&out));
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("pseudospin,1,15,0.1,0.8,-5,0.5,"), "{}", lines[1]);
}

#[test]
fn wavefunction_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wf.csv");
    let mut args = [
        &["wavefunction"],
        &FIRST_STATE[..],
        &["--normalize", "--points", "4000"],
    ]
    .concat();
    let n = args.iter().position(|a| *a == "--n").unwrap();
    args[n + 1] = "2";
    let path_str = path.display().to_string();
    args.extend(["--out", &path_str]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# normalized: constant"));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["r", "z", "F", "G"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4000);
    let f: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    let changes = f.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 2);
    let r: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let norm: f64 = r
        .windows(2)
        .zip(f.windows(2))
        .map(|(r, f)| 0.5 * (r[1] - r[0]) * (f[0] * f[0] + f[1] * f[1]))
        .sum();
    assert!((norm - 1.0).abs() < 1e-3, "{norm}");
}

#[test]
fn verify_single_state_and_oracle_choice() {
    let out = run(&[&["verify"], &FIRST_STATE[..], &["--oracle", "nu"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["oracle"], "nu");
    assert_eq!(report["total"], 1);
    assert!(report["states"][0]["e_shoot"].is_null());
    assert!(report["states"][0]["nu_residual"].as_f64().unwrap().abs() < 1e-6);

    let out = run(&["verify", "--symmetry", "spin", "--D", "15", "--a", "0.1", "--re", "0.8"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn approx_defaults() {
    let out = run(&["approx"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = body(&stdout(&out));
    assert_eq!(lines[0], "r,f1,f2(a=0.1),f2(a=0.5),f2(a=1)");
    assert_eq!(lines.len(), 201);
    for line in &lines[1..] {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(v[2..].iter().all(|&f2| f2 >= v[1]), "{line}");
    }

    let out = run(&["approx", "--a-values", "0.5", "--points", "5"]);
    let lines = body(&stdout(&out));
    assert_eq!(lines[0], "r,f1,f2(a=0.5)");
    assert_eq!(lines.len(), 6);
}

#[test]
fn output_is_deterministic() {
    for threads in ["1", "4"] {
        let a = Command::new(env!("CARGO_BIN_EXE_sdf-dirac"))
            .args(["table", "--preset", "table1", "--format", "csv"])
            .env("SDF_DIRAC_THREADS", threads)
            .output()
            .unwrap();
        let b = run(&["table", "--preset", "table1", "--format", "csv"]);
        assert_eq!(a.stdout, b.stdout);
    }
    let out = run(&["table", "--preset", "table1", "--stamp"]);
    assert!(stdout(&out).contains("# generated at unix time"));

    let out = Command::new(env!("CARGO_BIN_EXE_sdf-dirac"))
        .args(["approx"])
        .env("SDF_DIRAC_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
