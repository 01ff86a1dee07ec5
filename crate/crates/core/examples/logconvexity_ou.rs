//! Log-convexity for a non-normal Ornstein–Uhlenbeck drift, where the
//! interpolation exponent is the harmonic weight of the sector strip rather
//! than `t/θ`. Also shows what happens with the power-law surrogate.

use logstab::harness::{run_experiment, ExperimentConfig, Mode};

fn main() -> logstab::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "generator": {"kind": "ou", "drift": {"n": 2, "rows": [[-1, 2], [0, -1]]}, "order": 8},
            "geometry": {"theta": 1.0},
            "stability_params": {"eps": 0.5, "p": 1.5, "s": 0.2, "M": 1.0},
            "ensemble": {"count": 60, "seed": 2},
            "time_grid": {"n_eval": 40}
        }"#,
    )?;
    let report = run_experiment(Mode::Logconvexity, &cfg)?;
    let s = report.logconvexity_summary().expect("log-convexity run");
    println!("ψ = {:.6}, φ = {:.3}, c_ψ = {:.4}", s.psi, s.phi, s.c_psi);
    println!("fitted K = {:.4}, κ = {:.4}", s.k, s.kappa);
    println!(
        "violations with w:         {} of {}",
        s.violations, s.records
    );
    println!(
        "violations with surrogate: {} (worst excess {:.2e})",
        s.surrogate_violations, s.max_surrogate_violation
    );
    Ok(())
}
