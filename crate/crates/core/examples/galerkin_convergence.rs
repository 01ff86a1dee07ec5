//! Hermite–Galerkin discretisations of the OU generator: basis size, fitted
//! sector constants and the angle on which the discrete semigroup stays
//! contractive, as the polynomial order grows.

use nalgebra::DMatrix;

use logstab::operators::{
    analyticity_angle, build_ou_generator, contractive_sector_angle, DriftSpec,
};

fn main() -> logstab::Result<()> {
    let spec = DriftSpec::new(DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 0.0, -1.0]))?;
    println!("continuum angle ψ = {:.6}", analyticity_angle(&spec)?);
    println!(
        "{:>5} {:>5} {:>8} {:>8} {:>12}",
        "order", "dim", "K", "κ", "contractive"
    );
    for order in [1, 2, 4, 6, 8, 10, 12] {
        let gen = build_ou_generator(&spec, order)?;
        let angle = contractive_sector_angle(gen.matrix(), 1e-10).unwrap_or(f64::NAN);
        println!(
            "{order:>5} {:>5} {:>8.4} {:>8.4} {:>12.6}",
            gen.dim(),
            gen.sector_k(),
            gen.sector_kappa(),
            angle
        );
    }
    Ok(())
}
