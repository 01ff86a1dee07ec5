mod common;

use logstab::operators::DriftSpec;
use logstab::semigroup::{
    gramian_t, invariant_density, invariant_mean, kolmogorov_apply, kolmogorov_apply_many,
    kolmogorov_kernel, weighted_sobolev_norm, NamedFunction, OUModel, SobolevOptions,
    SobolevWeight,
};
use logstab::verify::random_stable_drift;
use logstab::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(rows: usize, entries: &[f64]) -> OUModel {
    OUModel::new(DriftSpec::new(DMatrix::from_row_slice(rows, rows, entries)).unwrap()).unwrap()
}

fn jordan() -> OUModel {
    model(2, &[-1.0, 2.0, 0.0, -1.0])
}

#[test]
fn finite_time_gramian_matches_integral_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut cases = vec![jordan()];
    for n in 1..=3 {
        cases
            .push(OUModel::new(DriftSpec::new(random_stable_drift(&mut rng, n)).unwrap()).unwrap());
    }
    for m in &cases {
        let n = m.dim();
        for &t in &[0.005, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let oracle = common::gramian_t_by_quadrature(m.spec().b(), &DMatrix::identity(n, n), t);
            let got = gramian_t(m, t).unwrap();
            assert!((&got - &oracle).norm() <= 1e-8 * oracle.norm(), "t={t}");
        }
    }
}

#[test]
fn polynomials_match_gaussian_moments() {
    for m in [
        model(1, &[-0.7]),
        jordan(),
        model(3, &[-1.0, 0.5, 0.0, 0.0, -2.0, 1.0, 0.3, 0.0, -1.5]),
    ] {
        let n = m.dim();
        let x: Vec<f64> = (0..n).map(|i| 0.4 - 0.6 * i as f64).collect();
        for &t in &[0.1, 0.5, 1.0] {
            let e = (m.spec().b() * t).exp();
            let mean = &e * DVector::from_column_slice(&x);
            let cov =
                common::gramian_t_by_quadrature(m.spec().b(), &DMatrix::identity(n, n), t) * 2.0;
            for name in ["one", "linear", "square", "quartic"] {
                let f: NamedFunction = name.parse().unwrap();
                let got = kolmogorov_apply(&m, t, |y| f.eval(y), &x).unwrap();
                let oracle = common::gaussian_expectation(name, mean.as_slice(), &cov);
                assert!(
                    (got - oracle).abs() <= 1e-8 * (1.0 + oracle.abs()),
                    "{name} t={t}: {got} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn invariant_measure_is_preserved() {
    let m = jordan();
    let f = |y: &[f64]| (y[0] - 0.3 * y[1]).cos() + y[0] * y[0] * y[1];
    let base = invariant_mean(&m, f).unwrap();
    for &t in &[0.1, 1.0] {
        let evolved = invariant_mean(&m, |x| kolmogorov_apply(&m, t, f, x).unwrap()).unwrap();
        assert!((evolved - base).abs() < 1e-8, "t={t}: {evolved} vs {base}");
    }
}

#[test]
fn density_integrates_to_one() {
    let m = model(1, &[-0.5]);
    let total = common::simpson(
        &|x| invariant_density(&m, &[x]).unwrap(),
        -30.0,
        30.0,
        1e-13,
    );
    assert!((total - 1.0).abs() < 1e-10);
    let k = common::simpson(
        &|y| kolmogorov_kernel(&m, 0.7, &[y]).unwrap(),
        -30.0,
        30.0,
        1e-13,
    );
    assert!((k - 1.0).abs() < 1e-10);
}

#[test]
fn vanishing_time_is_singular() {
    let m = jordan();
    assert!(matches!(
        kolmogorov_apply(&m, 1e-320, |_| 1.0, &[0.0, 0.0]),
        Err(Error::SingularGramian { .. })
    ));
    assert!(kolmogorov_apply(&m, 0.0, |_| 1.0, &[0.0, 0.0]).is_err());
    assert!(kolmogorov_apply(&m, 0.1, |_| 1.0, &[0.0]).is_err());
}

#[test]
fn batch_and_single_evaluation_agree() {
    let m = jordan();
    let xs = vec![vec![0.1, 0.2], vec![-1.0, 2.0], vec![3.0, 0.0]];
    let f = |y: &[f64]| y[0].sin() * y[1];
    let batch = kolmogorov_apply_many(&m, 0.4, f, &xs).unwrap();
    for (x, b) in xs.iter().zip(batch) {
        assert_eq!(kolmogorov_apply(&m, 0.4, f, x).unwrap(), b);
    }
}

#[test]
fn sobolev_norm_at_order_zero_is_weighted_l2() {
    let m = model(1, &[-0.5]);
    let q = m.gramian().q_inf[(0, 0)];
    let f = |x: f64| 1.0 + x - 0.2 * x * x;
    let oracle = common::simpson(
        &|x| f(x).powi(2) * (-0.25 * x * x / q).exp(),
        -60.0,
        60.0,
        1e-12,
    )
    .sqrt();
    let got = weighted_sobolev_norm(&m, 0.0, |x| f(x[0]), SobolevOptions::default()).unwrap();
    assert!(((got - oracle) / oracle).abs() < 1e-8, "{got} vs {oracle}");
}

#[test]
fn sobolev_norm_grows_with_order_and_weight_switch_matters() {
    let m = model(1, &[-2.0]);
    let f = |x: &[f64]| x[0].cos();
    let mut prev = 0.0;
    for &s in &[0.0, 0.5, 1.0, 2.0] {
        let v = weighted_sobolev_norm(&m, s, f, SobolevOptions::default()).unwrap();
        assert!(v > prev);
        prev = v;
    }
    let alt = SobolevOptions {
        weight: SobolevWeight::SquaredGramian,
        ..SobolevOptions::default()
    };
    let a = weighted_sobolev_norm(&m, 1.0, f, SobolevOptions::default()).unwrap();
    let b = weighted_sobolev_norm(&m, 1.0, f, alt).unwrap();
    assert!((a - b).abs() > 1e-3 * a);
}

#[test]
fn named_functions_parse() {
    for name in NamedFunction::NAMES {
        assert!(name.parse::<NamedFunction>().is_ok());
    }
    assert!("cubic".parse::<NamedFunction>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn markov_and_positivity(seed in 0u64..5000, t in 0.01f64..5.0, x0 in -3.0f64..3.0, x1 in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = OUModel::new(DriftSpec::new(random_stable_drift(&mut rng, 2)).unwrap()).unwrap();
        let x = [x0, x1];
        prop_assert!((kolmogorov_apply(&m, t, |_| 1.0, &x).unwrap() - 1.0).abs() < 1e-10);
        prop_assert!(kolmogorov_apply(&m, t, |y| y[0] * y[0] + y[1].abs(), &x).unwrap() > 0.0);
    }

    #[test]
    fn gramian_is_monotone_in_time(seed in 0u64..5000, t in 0.01f64..5.0, dt in 0.01f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = OUModel::new(DriftSpec::new(random_stable_drift(&mut rng, 3)).unwrap()).unwrap();
        let diff = gramian_t(&m, t + dt).unwrap() - gramian_t(&m, t).unwrap();
        let low = diff.symmetric_eigen().eigenvalues.min();
        prop_assert!(low >= -1e-10);
    }
}
