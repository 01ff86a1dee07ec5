//! `T(t)f` two ways: Kolmogorov's Gaussian integral and the Hermite–Galerkin
//! semigroup, compared in `L²_μ` on polynomial and non-polynomial data.

use nalgebra::{DMatrix, DVector};

use logstab::operators::{build_ou_generator, Basis, DriftSpec};
use logstab::semigroup::{kolmogorov_apply_many, NamedFunction, OUModel};

fn main() -> logstab::Result<()> {
    let spec = DriftSpec::new(DMatrix::from_row_slice(2, 2, &[-1.0, 2.0, 0.0, -1.0]))?;
    let model = OUModel::new(spec.clone())?;
    for order in [4, 8] {
        let gen = build_ou_generator(&spec, order)?;
        let Basis::Hermite(basis) = gen.basis() else {
            unreachable!()
        };
        let (nodes, weights) = basis.measure_rule(16)?;
        println!("order {order} (dim {})", gen.dim());
        for name in ["square", "quartic", "gaussian", "cosine"] {
            let f: NamedFunction = name.parse()?;
            let coeffs = basis.project(|x| f.eval(x), 16)?;
            print!("  {name:>8}:");
            for t in [0.1, 0.5, 1.0] {
                let exact = kolmogorov_apply_many(&model, t, |x| f.eval(x), &nodes)?;
                let c: DVector<f64> = gen.semigroup_matrix(t)? * &coeffs;
                let (mut d2, mut n2) = (0.0, 0.0);
                for ((x, w), k) in nodes.iter().zip(&weights).zip(&exact) {
                    d2 += w * (k - basis.evaluate(x).dot(&c)).powi(2);
                    n2 += w * k * k;
                }
                print!("  t={t}: {:.2e}", (d2 / n2).sqrt());
            }
            println!();
        }
    }
    Ok(())
}
