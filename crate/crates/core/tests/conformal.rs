mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use logstab::conformal::{
    angle_constants, boundary_map_h, boundary_map_upper_bound, tabulate, w_lower_bound, w_real,
    StripGeometry,
};
use proptest::prelude::*;

const ANGLES: [f64; 6] = [
    PI / 12.0,
    PI / 6.0,
    PI / 4.0,
    PI / 3.0,
    5.0 * PI / 12.0,
    FRAC_PI_2,
];

#[test]
fn angle_constants_worked_values() {
    let (phi, c) = angle_constants(FRAC_PI_2).unwrap();
    assert!((phi - 1.0).abs() < 1e-15 && (c - 1.0).abs() < 1e-15);
    let (phi, c) = angle_constants(PI / 4.0).unwrap();
    assert!((phi - 2.0).abs() < 1e-15 && (c - PI / 4.0).abs() < 1e-14);
    assert!(angle_constants(0.0).is_err());
    assert!(angle_constants(1.6).is_err());
}

#[test]
fn boundary_map_matches_direct_quadrature() {
    for &theta in &[0.5, 2.0] {
        for &psi in &[PI / 6.0, PI / 4.0, PI / 3.0] {
            let g = StripGeometry::new(theta, psi).unwrap();
            let a = psi / PI;
            for &frac in &[0.1, 0.5, 0.9] {
                let x = frac * theta;
                let upper = (PI * x / (2.0 * theta)).sin().powi(2);
                let integral = common::tanh_sinh(
                    &|t, _, tail| t.powf(a - 1.0) * (tail + (1.0 - upper)).powf(-a),
                    0.0,
                    upper,
                );
                let oracle = theta * psi.sin() / PI * integral;
                let got = boundary_map_h(x, &g).unwrap();
                assert!(((got - oracle) / oracle).abs() < 1e-10, "{got} vs {oracle}");
                assert!(got > 0.0 && got < theta);
            }
        }
    }
}

#[test]
fn weight_worked_values() {
    let g = StripGeometry::new(1.0, PI / 4.0).unwrap();
    let w = w_real(0.5, &g, g.default_tol()).unwrap();
    assert!((PI / 16.0..=1.0).contains(&w));
    assert!((w_real(1.0, &g, g.default_tol()).unwrap() - 1.0).abs() < 1e-12);

    let g = StripGeometry::new(1.0, PI / 3.0).unwrap();
    let expected = (2.0 / PI) * ((PI / 3.0) / (PI / 3.0).sin()).powf(1.5) * 0.5f64.powf(1.5);
    assert!((w_lower_bound(0.5, &g).unwrap() - expected).abs() < 1e-14);
}

#[test]
fn weight_by_bisection_oracle() {
    let g = StripGeometry::new(1.0, PI / 4.0).unwrap();
    for &t in &[0.05, 0.3, 0.5, 0.8] {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= 0.0 || boundary_map_h(mid, &g).unwrap() < t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let got = w_real(t, &g, g.default_tol()).unwrap();
        assert!((got - 0.5 * (lo + hi)).abs() < 1e-11);
    }
}

#[test]
fn weight_dominates_power_law_everywhere() {
    for &psi in &ANGLES {
        for &theta in &[0.3, 1.0, 4.0] {
            let g = StripGeometry::new(theta, psi).unwrap();
            for t in common::right_closed_grid(theta, 200) {
                let w = w_real(t, &g, g.default_tol()).unwrap();
                assert!(w >= w_lower_bound(t, &g).unwrap() - 1e-9);
                let h = boundary_map_h(t, &g).unwrap();
                assert!(h <= boundary_map_upper_bound(t, &g).unwrap() + 1e-9);
            }
        }
    }
}

#[test]
fn tabulation_is_monotone_and_round_trips() {
    for &psi in &ANGLES {
        let g = StripGeometry::new(2.0, psi).unwrap();
        let tol = g.default_tol();
        let rows = tabulate(&g, 200, tol).unwrap();
        assert_eq!(rows.len(), 200);
        for pair in rows.windows(2) {
            assert!(pair[1].w > pair[0].w);
            assert!(pair[1].h > pair[0].h);
        }
        for r in &rows {
            let back = boundary_map_h(g.theta() * r.w, &g).unwrap();
            assert!((back - r.t).abs() <= 10.0 * tol + 1e-14 * r.t);
        }
    }
}

#[test]
fn right_angle_weight_is_linear() {
    let g = StripGeometry::new(3.0, FRAC_PI_2).unwrap();
    for t in common::right_closed_grid(3.0, 200) {
        assert!((w_real(t, &g, g.default_tol()).unwrap() - t / 3.0).abs() < 1e-10);
        assert!((boundary_map_h(t, &g).unwrap() - t).abs() < 1e-12);
    }
}

#[test]
fn out_of_range_points_are_rejected() {
    let g = StripGeometry::new(1.0, 1.0).unwrap();
    assert!(w_real(0.0, &g, 1e-12).is_err());
    assert!(w_real(1.5, &g, 1e-12).is_err());
    assert!(boundary_map_h(-0.1, &g).is_err());
    assert!(w_lower_bound(2.0, &g).is_err());
    assert!(StripGeometry::new(0.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn weight_is_in_unit_interval_and_above_bound(psi in 0.05f64..=FRAC_PI_2, frac in 0.001f64..=1.0, theta in 0.1f64..10.0) {
        let g = StripGeometry::new(theta, psi).unwrap();
        let t = frac * theta;
        let w = w_real(t, &g, g.default_tol()).unwrap();
        prop_assert!(w > 0.0 && w <= 1.0 + 1e-12);
        prop_assert!(w >= w_lower_bound(t, &g).unwrap() - 1e-9);
    }

    #[test]
    fn c_psi_is_at_most_one(psi in 0.01f64..=FRAC_PI_2) {
        let (phi, c) = angle_constants(psi).unwrap();
        prop_assert!(phi >= 1.0 - 1e-15);
        prop_assert!(c > 0.0 && c <= 1.0 + 1e-14);
    }
}
