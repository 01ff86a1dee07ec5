//! Incomplete Gamma and symmetric incomplete Beta values, and the margin in
//! the lower bound `a B_x(a, 1-a) >= (1/x - 1)^{1/2-a} arcsin √x`.

use std::f64::consts::PI;

use logstab::specfun::{beta_inc, beta_lower_residual, gamma, gamma_upper, BetaArgs, GammaArgs};

fn main() -> logstab::Result<()> {
    println!("{:>6} {:>6} {:>14} {:>14}", "a", "x", "Γ(a,x)", "Γ(a)");
    for &(a, x) in &[(0.5, 0.0), (0.5, 1.0), (1.0, 2.0), (2.5, 4.0), (7.0, 30.0)] {
        let g = gamma_upper(GammaArgs::new(a, x)?)?;
        println!("{a:>6} {x:>6} {g:>14.8e} {:>14.8e}", gamma(a));
    }

    println!(
        "\n{:>6} {:>6} {:>14} {:>14}",
        "a", "x", "B_x(a,1-a)", "residual"
    );
    for &a in &[0.1, 0.25, 0.5] {
        for &x in &[0.1, 0.5, 1.0] {
            let b = beta_inc(BetaArgs::new(a, x)?)?;
            let r = beta_lower_residual(BetaArgs::new(a, x)?)?;
            println!("{a:>6} {x:>6} {b:>14.8} {r:>14.3e}");
        }
    }
    let a = 0.3;
    println!(
        "\nB_1({a}, {}) sin(π{a}) = {:.15} (π = {PI:.15})",
        1.0 - a,
        beta_inc(BetaArgs::new(a, 1.0)?)? * (PI * a).sin()
    );
    Ok(())
}
