//! Discrete observability and admissibility constants of the heat equation
//! observed on periodic slabs, as the slabs thin out and the time grid refines.

use logstab::harness::{estimate_observability, ObservationRegion};
use logstab::operators::build_heat_generator;

fn main() -> logstab::Result<()> {
    let gen = build_heat_generator(24, 1.0)?;
    println!(
        "{:>10} {:>8} {:>12} {:>12} {:>12}",
        "half-width", "n_times", "κ_obs", "κ_adm", "σ_min"
    );
    for half_width in [0.2, 0.1, 0.05] {
        for n_times in [16, 64] {
            let region = ObservationRegion::slabs(0, 0.5, half_width, 0.5 * half_width, 0.3)?;
            let est = estimate_observability(&gen, &region, 0.2, n_times)?;
            println!(
                "{half_width:>10} {n_times:>8} {:>12.4e} {:>12.4e} {:>12.4e}",
                est.kappa_obs, est.kappa_adm, est.conditioning
            );
        }
    }
    Ok(())
}
