//! Backward heat equation: `‖u(t)‖ <= M^{1-t/θ} ‖u(θ)‖^{t/θ}` checked on an
//! ensemble of admissible initial data.

use logstab::harness::{run_experiment, ExperimentConfig, Mode};

fn main() -> logstab::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "generator": {"kind": "heat", "modes": 32},
            "geometry": {"theta": 0.5},
            "stability_params": {"eps": 0.5, "p": 1.5, "s": 0.2, "M": 1.0},
            "ensemble": {"count": 100, "seed": 1},
            "time_grid": {"n_eval": 50}
        }"#,
    )?;
    let report = run_experiment(Mode::Logconvexity, &cfg)?;
    let s = report.logconvexity_summary().expect("log-convexity run");
    println!("records            {}", s.records);
    println!("violations         {}", s.violations);
    println!("tightest bound/actual {:.6}", s.min_ratio);
    println!("config hash        {}", report.config_hash);
    Ok(())
}
