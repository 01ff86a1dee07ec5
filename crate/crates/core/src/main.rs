use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use logstab::conformal::{tabulate, StripGeometry};
use logstab::harness::{
    drift_spec, estimate_observability_with, run_experiment, ExperimentConfig, MatrixFile, Mode,
    ObservabilityOptions,
};
use logstab::operators::angle_details;
use logstab::semigroup::{kolmogorov_apply, NamedFunction, OUModel};
use logstab::stability::{stability_rhs, StabilityParams};
use logstab::{verify, Result};

#[derive(Parser)]
#[command(
    version,
    about = "Logarithmic-convexity stability bounds for analytic semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Logconvexity,
    Stability,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the harmonic weight w(t) as CSV: t, w, lower_bound, h.
    Wmap {
        #[arg(long)]
        psi: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Analyticity angle, γ and Q_∞ of an Ornstein–Uhlenbeck drift.
    Angle {
        #[arg(long)]
        drift: PathBuf,
        #[arg(long)]
        diffusion: Option<PathBuf>,
    },
    /// Evaluate T(t)f(x) by Kolmogorov's formula, as CSV: t, value.
    Simulate {
        #[arg(long)]
        drift: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// One of: one, linear, square, quartic, gaussian, cosine.
        #[arg(long, default_value = "square")]
        f: String,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Exact and simplified stability right-hand sides with K1 = 1.
    Bounds {
        #[arg(long)]
        psi: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        obs: f64,
    },
    /// Observability and admissibility constants for a config.
    Observability {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run an ensemble experiment; the JSON summary goes to stdout.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the invariant suite; exits nonzero on any violation.
    Verify,
}

fn read_matrix_file(path: &PathBuf) -> Result<MatrixFile> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Wmap { psi, theta, grid } => {
            let geom = StripGeometry::new(theta, psi)?;
            println!("t,w,lower_bound,h");
            for row in tabulate(&geom, grid, geom.default_tol())? {
                println!("{},{},{},{}", row.t, row.w, row.lower_bound, row.h);
            }
        }
        Command::Angle { drift, diffusion } => {
            let b = read_matrix_file(&drift)?;
            let q = diffusion.as_ref().map(read_matrix_file).transpose()?;
            let d = angle_details(&drift_spec(&b, q.as_ref())?)?;
            println!("psi = {}", d.psi);
            println!("gamma = {}", d.gamma);
            println!(
                "Q_inf = {}",
                serde_json::to_string(&MatrixFile::from_matrix(&d.gramian.q_inf))?
            );
        }
        Command::Simulate { drift, t, f, x } => {
            let model = OUModel::new(drift_spec(&read_matrix_file(&drift)?, None)?)?;
            let func: NamedFunction = f.parse()?;
            let x = if x.is_empty() {
                vec![0.0; model.dim()]
            } else {
                x
            };
            println!("t,value");
            for time in t {
                let v = kolmogorov_apply(&model, time, |y| func.eval(y), &x)?;
                println!("{time},{v}");
            }
        }
        Command::Bounds {
            psi,
            eps,
            p,
            s,
            obs,
        } => {
            let geom = StripGeometry::new(1.0, psi)?;
            let params = StabilityParams {
                theta: 1.0,
                eps,
                m: 1.0,
                p,
                s,
                k: 1.0,
                kappa: 0.0,
                kappa_obs: 1.0,
                kappa_adm: 1.0,
            };
            let rhs = stability_rhs(obs, &params, &geom, 1.0)?;
            println!("exact = {}", rhs.exact);
            println!("simplified = {}", rhs.simplified);
            println!("kernel = {}", rhs.kernel);
        }
        Command::Observability { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let gen = cfg.generator.build()?;
            let options = ObservabilityOptions {
                n_times: cfg.time_grid.n_times,
                resolution: cfg.time_grid.resolution,
            };
            let est = estimate_observability_with(&gen, &cfg.region, cfg.geometry.theta, options)?;
            println!("kappa_obs = {}", est.kappa_obs);
            println!("kappa_adm = {}", est.kappa_adm);
            println!("conditioning = {}", est.conditioning);
            if let Some(w) = est.warning {
                eprintln!("warning: {w}");
            }
        }
        Command::Experiment {
            config,
            mode,
            csv,
            json,
        } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let mode = match mode {
                ModeArg::Logconvexity => Mode::Logconvexity,
                ModeArg::Stability => Mode::Stability,
            };
            let report = run_experiment(mode, &cfg)?;
            if let Some(path) = csv {
                std::fs::write(path, report.to_csv())?;
            }
            if let Some(path) = json {
                std::fs::write(path, report.to_json())?;
            }
            println!("{}", report.to_json());
            if let Some(e) = &report.error {
                eprintln!("run stopped early: {e}");
                return Ok(false);
            }
        }
        Command::Verify => {
            let checks = verify::run_all()?;
            let mut ok = true;
            for c in &checks {
                println!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                ok &= c.passed;
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
