//! Two ways of measuring smoothness on the 1D OU model: the flat Sobolev norm
//! of `f e^{-⅛⟨Q_∞^{-1}x, x⟩}` and the Galerkin fractional norm
//! `‖(λ - A)^{s/2} f‖`. Their ratio stays bounded across test functions.

use nalgebra::DMatrix;

use logstab::operators::{build_ou_generator, fractional_norm, Basis, DriftSpec};
use logstab::semigroup::{weighted_sobolev_norm, NamedFunction, OUModel, SobolevOptions};

fn main() -> logstab::Result<()> {
    let spec = DriftSpec::new(DMatrix::from_row_slice(1, 1, &[-1.0]))?;
    let model = OUModel::new(spec.clone())?;
    let gen = build_ou_generator(&spec, 30)?;
    let Basis::Hermite(basis) = gen.basis() else {
        unreachable!()
    };
    for s in [0.5, 1.0] {
        println!("s = {s}");
        for name in ["linear", "square", "gaussian", "cosine"] {
            let f: NamedFunction = name.parse()?;
            let sob = weighted_sobolev_norm(&model, s, |x| f.eval(x), SobolevOptions::default())?;
            let coeffs = basis.project(|x| f.eval(x), 60)?;
            let frac = fractional_norm(&gen, s / 2.0, &coeffs)?;
            println!(
                "  {name:>8}: Sobolev {sob:>10.5}  fractional {frac:>10.5}  ratio {:.4}",
                sob / frac
            );
        }
    }
    Ok(())
}
