//! The stability right-hand side as the observation shrinks: the exact
//! incomplete-Gamma form and its simplified majorant, for several angles.

use std::f64::consts::PI;

use logstab::conformal::StripGeometry;
use logstab::stability::{stability_rhs, StabilityParams};

fn main() -> logstab::Result<()> {
    let params = StabilityParams {
        theta: 1.0,
        eps: 0.5,
        m: 1.0,
        p: 1.5,
        s: 0.2,
        k: 1.0,
        kappa: 0.0,
        kappa_obs: 1.0,
        kappa_adm: 1.0,
    };
    for psi in [PI / 6.0, PI / 4.0, PI / 2.0] {
        let geom = StripGeometry::new(1.0, psi)?;
        println!("ψ = {psi:.4}");
        for k in [1, 2, 4, 8, 16, 64] {
            let obs = 10f64.powi(-k);
            let rhs = stability_rhs(obs, &params, &geom, 1.0)?;
            println!(
                "  ‖Cu‖ = 1e-{k:<3} exact {:.6e}  simplified {:.6e}",
                rhs.exact, rhs.simplified
            );
        }
    }
    Ok(())
}
