use std::path::Path;
use std::process::{Command, Output};

use tricoupled::sweep::{compute_rows, GridSpec, Model, SweepConfig, CSV_HEADER};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricoupled"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn field(line: &str, k: usize) -> &str {
    line.split(',').nth(k).unwrap()
}

#[test]
fn sweep_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep",
        "--model",
        "both",
        "--j",
        "0.1",
        "--jc-range",
        "0:1:4",
        "--omegac-range",
        "1:5:2",
    ];
    let mut outputs = Vec::new();
    for (name, workers) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "3")] {
        let mut full = args.to_vec();
        full.extend(["--out", name, "--workers", workers]);
        let out = run(&full, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 4 * 2 * 2);
    // ω_C outermost, then J_C, then model
    assert_eq!(field(lines[1], 2), "pme");
    assert_eq!(field(lines[2], 2), "mme");
    assert_eq!(field(lines[1], 1), field(lines[8], 1));
    assert_ne!(field(lines[1], 1), field(lines[9], 1));
}

#[test]
fn worker_count_does_not_change_rows() {
    let base = SweepConfig {
        model: Model::Both,
        j: 1.0,
        j_c: GridSpec::new(0.0, 2.5, 6).unwrap(),
        omega_c: GridSpec::new(0.05, 5.0, 3).unwrap(),
        ..SweepConfig::default()
    };
    let one = compute_rows(&SweepConfig { workers: 1, ..base.clone() }).unwrap();
    let many = compute_rows(&SweepConfig { workers: 4, ..base }).unwrap();
    assert_eq!(one, many);
}

#[test]
fn single_point_mme_concurrence() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sweep", "--model", "mme", "--j", "0.01", "--jc", "0", "--out", "p.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    let e: f64 = field(row, 3).parse().unwrap();
    assert!((e - 0.1).abs() < 0.01, "{e}");
    assert_eq!(field(row, 7), "null-space");
    assert_eq!(field(row, 9), "ok");
}

#[test]
fn decoupled_point_gives_exact_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["sweep", "--model", "pme", "--j", "0", "--jc", "0", "--out", "z.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("z.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    for k in 3..6 {
        assert_eq!(field(row, k), "0.0000000000000000e0");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "# line sweep\nmodel = pme\nj = 0.1\njc-range = 0:0.5:3\nout = from_file.csv\n",
    )
    .unwrap();
    let out = run(&["sweep", "--config", "run.cfg", "--model", "mme"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("from_file.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| field(r, 2) == "mme"));
    assert_eq!(field(rows[2], 0), "5.0000000000000000e-1");
}

#[test]
fn figure_writes_csv_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fig", "4a", "--jc-range", "0:1:5", "--out", "f4a.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("f4a.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 2);
    let script = std::fs::read_to_string(dir.path().join("f4a.gp")).unwrap();
    assert!(script.contains("'f4a.csv'"));
    assert!(script.contains("set datafile separator ','"));
}

#[test]
fn contour_figure_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["fig", "3", "--jc-range", "0:2.5:3", "--omegac-range", "0.05:5:2"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    assert!(text.lines().skip(1).all(|r| field(r, 2) == "mme"));
    let script = std::fs::read_to_string(dir.path().join("fig3.gp")).unwrap();
    assert!(script.contains("with image"));
}

#[test]
fn invalid_arguments_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--jc-range", "1:0:5"], dir.path());
    assert!(!out.status.success());
    let out = run(&["sweep", "--gamma", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
    let out = run(&["fig", "7"], dir.path());
    assert!(!out.status.success());
    let out = run(&["sweep", "--jc", "0.1", "--jc-range", "0:1:2"], dir.path());
    assert!(!out.status.success());
}
