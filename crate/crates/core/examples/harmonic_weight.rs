//! The harmonic weight `w(t)` on the sector strip against its power-law
//! lower bound `c_ψ (t/θ)^φ`, for a few angles.

use std::f64::consts::PI;

use logstab::conformal::{tabulate, StripGeometry};

fn main() -> logstab::Result<()> {
    let theta = 1.0;
    for psi in [PI / 12.0, PI / 4.0, PI / 3.0, PI / 2.0] {
        let g = StripGeometry::new(theta, psi)?;
        println!("ψ = {psi:.4}  φ = {:.3}  c_ψ = {:.4}", g.phi(), g.c_psi());
        println!("  {:>5} {:>10} {:>10} {:>10}", "t", "w", "bound", "h(t)");
        for row in tabulate(&g, 8, g.default_tol())? {
            println!(
                "  {:>5.3} {:>10.6} {:>10.6} {:>10.6}",
                row.t, row.w, row.lower_bound, row.h
            );
        }
    }
    Ok(())
}
