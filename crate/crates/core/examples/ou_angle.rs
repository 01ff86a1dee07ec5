//! Analyticity angle of the Ornstein–Uhlenbeck semigroup in `L²_μ` for the
//! drift `[[-1, β], [0, -1]]`: a normal drift gives `π/2` and the angle
//! closes as the off-diagonal coupling grows.

use nalgebra::DMatrix;

use logstab::operators::{angle_details, DriftSpec};

fn main() -> logstab::Result<()> {
    println!("{:>6} {:>10} {:>10}  Q_∞", "β", "γ", "ψ");
    for beta in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let spec = DriftSpec::new(DMatrix::from_row_slice(2, 2, &[-1.0, beta, 0.0, -1.0]))?;
        let d = angle_details(&spec)?;
        let q = &d.gramian.q_inf;
        println!(
            "{beta:>6} {:>10.6} {:>10.6}  [[{:.4}, {:.4}], [{:.4}, {:.4}]]",
            d.gamma,
            d.psi,
            q[(0, 0)],
            q[(0, 1)],
            q[(1, 0)],
            q[(1, 1)]
        );
    }

    // a general diffusion matrix
    let b = DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, -0.5, -1.0]);
    let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]);
    let d = angle_details(&DriftSpec::with_diffusion(b, q)?)?;
    println!(
        "\nwith diffusion [[1, .3], [.3, .5]]: γ = {:.6}, ψ = {:.6}",
        d.gamma, d.psi
    );
    Ok(())
}
