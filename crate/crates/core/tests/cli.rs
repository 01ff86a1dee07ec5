use std::path::Path;
use std::process::{Command, Output};

fn logstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn wmap_prints_table() {
    let out = logstab(&["wmap", "--psi", "0.785398", "--theta", "2", "--grid", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,w,lower_bound,h");
    assert_eq!(lines.len(), 11);
    let last: Vec<f64> = lines[10].split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 2.0).abs() < 1e-12 && (last[1] - 1.0).abs() < 1e-10);
    assert!(!logstab(&["wmap", "--psi", "2.0"]).status.success());
}

#[test]
fn angle_and_simulate_read_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let drift = write(
        dir.path(),
        "b.json",
        r#"{"n": 2, "rows": [[-1, 2], [0, -1]]}"#,
    );
    let out = logstab(&["angle", "--drift", &drift]);
    assert!(out.status.success());
    let text = stdout(&out);
    let psi: f64 = text
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("psi = ")
        .parse()
        .unwrap();
    assert!((psi - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
    let q: serde_json::Value = serde_json::from_str(
        text.lines()
            .find_map(|l| l.strip_prefix("Q_inf = "))
            .unwrap(),
    )
    .unwrap();
    let expected = [[1.5, 0.5], [0.5, 0.5]];
    for (i, row) in expected.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert!((q["rows"][i][j].as_f64().unwrap() - v).abs() < 1e-12);
        }
    }

    let out = logstab(&[
        "simulate", "--drift", &drift, "--t", "0.1,1", "--f", "one", "--x", "0.5,-1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,value");
    for row in &rows[1..] {
        let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }
    let bad = logstab(&["simulate", "--drift", &drift, "--t", "1", "--f", "cubic"]);
    assert!(!bad.status.success());
}

#[test]
fn bounds_reports_both_forms() {
    let out = logstab(&[
        "bounds", "--psi", "0.785398", "--eps", "0.5", "--p", "1.5", "--s", "0.2", "--obs", "1e-6",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let value = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(value("simplified = ") >= value("exact = "));
    let rejected = logstab(&[
        "bounds", "--psi", "0.785398", "--eps", "0.5", "--p", "1.5", "--s", "0.2", "--obs", "1.5",
    ]);
    assert!(!rejected.status.success());
}

#[test]
fn experiment_and_observability_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{
            "generator": {"kind": "heat", "modes": 12},
            "region": {"kind": "slabs", "axis": 0, "period": 0.5, "half_width": 0.1, "r": 0.05, "delta": 0.3},
            "geometry": {"theta": 0.3},
            "stability_params": {"eps": 0.5, "p": 1.5, "s": 0.2, "M": 1.0},
            "ensemble": {"count": 8, "seed": 2, "amplitudes": [1.0, 1e-3]}
        }"#,
    );
    let out = logstab(&["observability", "--config", &cfg]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("kappa_obs = "));

    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    for mode in ["logconvexity", "stability"] {
        let out = logstab(&[
            "experiment",
            "--mode",
            mode,
            "--config",
            &cfg,
            "--csv",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(std::fs::read_to_string(&csv)
            .unwrap()
            .starts_with("# config_hash="));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(report["mode"], mode);
    }
}

#[test]
fn verify_passes() {
    let out = logstab(&["verify"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.lines().count() >= 10);
}
