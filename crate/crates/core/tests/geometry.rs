//! Geometry checked against closed-form oracles for the Archimedean spiral.

use std::f64::consts::{PI, TAU};

use spiral_core::spiral::*;
use spiral_core::window::find_s0;
use spiral_core::{Error, GeometryOptions, Perturbation, SpiralSpec};

fn opts() -> GeometryOptions {
    GeometryOptions::default()
}

fn pure() -> SpiralSpec {
    SpiralSpec::pure(1.0).unwrap()
}

fn power_tail() -> SpiralSpec {
    SpiralSpec::power_tail(1.0, 0.5, 1.5).unwrap()
}

fn bump() -> SpiralSpec {
    SpiralSpec::bump(1.0, 1.0, 6.0 * PI, 8.0 * PI).unwrap()
}

/// Closed-form arc length of `r = θ`.
fn pure_arc_length(theta: f64) -> f64 {
    0.5 * (theta * (1.0 + theta * theta).sqrt() + theta.asinh())
}

fn pure_curvature(theta: f64) -> f64 {
    (2.0 + theta * theta) / (1.0 + theta * theta).powf(1.5)
}

#[test]
fn radial_profile_examples() {
    assert_eq!(radial_profile(&pure(), 3.0).unwrap(), (3.0, 1.0, 0.0));

    let (r, dr, ddr) = radial_profile(&power_tail(), 0.0).unwrap();
    assert!((r - 1.0).abs() < 1e-15);
    assert!((dr - 0.5).abs() < 1e-15);
    assert!((ddr - 0.75).abs() < 1e-15);

    let b = SpiralSpec::bump(0.7, 0.1, 10.0, 12.0).unwrap();
    let (r, dr, ddr) = radial_profile(&b, 5.0).unwrap();
    assert_eq!((r, dr, ddr), (5.0 * 0.7, 0.7, 0.0));
}

#[test]
fn radial_profile_rejects_decreasing_radius() {
    // Bypass construction-time validation to reach the runtime guard.
    let steep = SpiralSpec { a0: 1.0, perturbation: Perturbation::Bump { amplitude: 3.0, theta1: 10.0, theta2: 11.0 } };
    let err = (0..100)
        .map(|k| radial_profile(&steep, 10.0 + k as f64 / 100.0))
        .find_map(|r| r.err())
        .expect("some angle violates monotonicity");
    assert!(matches!(err, Error::NotMonotone { .. }));
    assert!(matches!(radial_profile(&pure(), -1.0), Err(Error::NegativeAngle(_))));
}

#[test]
fn width_function_examples() {
    for theta in [0.0, 1.0, 17.3, 400.0] {
        assert!((width_function(&pure(), theta).unwrap() - 1.0).abs() < 1e-13);
    }
    let eps = 1.0 - width_function(&power_tail(), 100.0).unwrap();
    assert!(eps > 0.0 && eps < 1e-3, "ε = {eps}");
    let b = SpiralSpec::bump(0.8, 0.1, 10.0, 12.0).unwrap();
    assert!((width_function(&b, 13.0).unwrap() - 0.8).abs() < 1e-13);
}

#[test]
fn curvature_examples() {
    assert!((curvature_theta(&pure(), 0.0).unwrap() - 2.0).abs() < 1e-15);
    let g10 = curvature_theta(&pure(), 10.0).unwrap();
    assert!((g10 - 102.0 / 101f64.powf(1.5)).abs() < 1e-14);
    assert!((g10 - 0.10049).abs() < 1e-5);
    let g = curvature_theta(&pure(), 1e3).unwrap();
    assert!((g * 1e3 - 1.0).abs() < 5e-3);
}

#[test]
fn curvature_matches_closed_form() {
    for k in 0..200 {
        let theta = 0.05 * k as f64 * (1.0 + k as f64 / 10.0);
        let g = curvature_theta(&pure(), theta).unwrap();
        assert!((g - pure_curvature(theta)).abs() < 1e-12, "θ = {theta}");
    }
    // Homothety: γ scales like 1/a0.
    let big = SpiralSpec::pure(3.0).unwrap();
    assert!((curvature_theta(&big, 5.0).unwrap() * 3.0 - pure_curvature(5.0)).abs() < 1e-14);
}

#[test]
fn arc_length_examples() {
    assert_eq!(arc_length(&pure(), 0.0, &opts()).unwrap(), 0.0);
    let s1 = arc_length(&pure(), 1.0, &opts()).unwrap();
    let exact = 0.5 * (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln());
    assert!((s1 - exact).abs() < 1e-12);
    assert!((s1 - 1.147794).abs() < 1e-6);
    let s100 = arc_length(&pure(), 100.0, &opts()).unwrap();
    assert!((s100 / 5000.0 - 1.0).abs() < 0.011);
    for theta in [3.0, 30.0, 300.0] {
        let s = arc_length(&pure(), theta, &opts()).unwrap();
        assert!((s - pure_arc_length(theta)).abs() < 1e-10 * pure_arc_length(theta));
    }
}

#[test]
fn inversion_examples() {
    assert_eq!(invert_arc_length(&pure(), 0.0, &opts()).unwrap(), 0.0);
    let s7 = arc_length(&pure(), 7.0, &opts()).unwrap();
    assert!((invert_arc_length(&pure(), s7, &opts()).unwrap() - 7.0).abs() < 1e-9);

    // Bisection on the closed form as the independent oracle.
    let (mut lo, mut hi) = (0.0, 200.0);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if pure_arc_length(m) < 5000.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let t = invert_arc_length(&pure(), 5000.0, &opts()).unwrap();
    assert!(t > 99.0 && t < 100.0);
    assert!((t - lo).abs() < 1e-9);
}

#[test]
fn fermi_map_examples() {
    for spec in [pure(), power_tail(), bump()] {
        for theta in [0.5, 4.0, 21.0] {
            let p = fermi_map(&spec, theta, 0.0);
            let r = spec.radius(theta);
            assert!((p[0] - r * theta.cos()).abs() < 1e-13);
            assert!((p[1] - r * theta.sin()).abs() < 1e-13);
            for u in [-2.0, 0.3, 5.0] {
                let q = fermi_map(&spec, theta, u);
                assert!(((q[0] - p[0]).hypot(q[1] - p[1]) - u.abs()).abs() < 1e-12);
            }
        }
    }
    let p = fermi_map(&pure(), PI / 2.0, 0.0);
    assert!(p[0].abs() < 1e-15 && (p[1] - PI / 2.0).abs() < 1e-15);
}

#[test]
fn curve_speed_matches_numeric_derivative() {
    for spec in [pure(), power_tail(), bump()] {
        for theta in [1.0, 8.0, 20.0, 22.0, 90.0] {
            let h = 1e-5;
            let a = fermi_map(&spec, theta + h, 0.0);
            let b = fermi_map(&spec, theta - h, 0.0);
            let numeric = (a[0] - b[0]).hypot(a[1] - b[1]) / (2.0 * h);
            let v = speed(&spec, theta);
            assert!((numeric / v - 1.0).abs() < 1e-6);
        }
    }
}

/// `d` from the five-term expansion of `(π/d)²`.
fn expanded_width(theta: f64) -> f64 {
    let t = theta;
    let k2 = 0.25 + 0.25 / (t * t) + PI / (2.0 * t.powi(3)) + PI * PI / t.powi(4) + PI * (4.0 * PI * PI - 1.0) / (4.0 * t.powi(5));
    PI / k2.sqrt()
}

#[test]
fn coil_width_matches_expansion() {
    let d50 = coil_width(&pure(), 50.0, &opts()).unwrap();
    // Leading deficit is 2π/(2θ²); the next order adds a relative 2π/θ (about 13% at θ = 50).
    let ratio = (TAU - d50) / (TAU / (2.0 * 2500.0));
    assert!(ratio > 1.0 && ratio < 1.0 + 1.2 * TAU / 50.0, "ratio {ratio}");
    // Remainder of the expansion, measured in d, is observed to behave like 400/θ⁵.
    for theta in [20.0, 50.0, 100.0, 200.0] {
        let d = coil_width(&pure(), theta, &opts()).unwrap();
        assert!((d - expanded_width(theta)).abs() < 1e3 * theta.powi(-5), "θ = {theta}");
    }
}

#[test]
fn pure_coil_width_stays_below_archimedean_value() {
    let mut theta = TAU;
    while theta < 300.0 {
        let d = coil_width(&pure(), theta, &opts()).unwrap();
        assert!(d > 0.0 && d < TAU, "θ = {theta}: d = {d}");
        theta *= 1.07;
    }
}

#[test]
fn bump_widens_a_coil() {
    let max_d = (0..200)
        .map(|k| 6.0 * PI + 2.0 * PI * k as f64 / 200.0)
        .map(|t| coil_width(&bump(), t, &opts()).unwrap())
        .fold(0.0, f64::max);
    assert!(max_d > TAU + 0.5, "max d = {max_d}");
}

#[test]
fn coil_width_tends_to_archimedean_value() {
    for spec in [pure(), bump()] {
        let d = coil_width(&spec, 200.0, &opts()).unwrap();
        assert!((d - TAU).abs() < 1e-3);
    }
    let d = coil_width(&power_tail(), 2000.0, &opts()).unwrap();
    assert!((d - TAU).abs() < 0.02, "power tail d = {d}");
}

#[test]
fn coil_width_below_a_priori_cap() {
    for spec in [pure(), power_tail(), bump()] {
        let cap = TAU * spec.a0 + spec.coil_excess_bound();
        for k in 0..60 {
            let theta = TAU + 0.5 * k as f64;
            let d = coil_width(&spec, theta, &opts()).unwrap();
            assert!(d > 0.0 && d <= cap + 1e-9, "{spec:?} θ = {theta}: d = {d}");
        }
    }
}

#[test]
fn s0_for_pure_spiral() {
    let w = find_s0(&pure(), 1e4, 0.1).unwrap();
    // d·γ ≈ 2π/θ = 0.9 at θ ≈ 6.98; the sampled table has spacing below 0.4 here.
    assert!((w.theta0 - 6.98).abs() < 0.4, "θ0 = {}", w.theta0);
    assert!((w.s0 - pure_arc_length(w.theta0)).abs() < 1e-8);
    for r in w.admissible() {
        assert!(r.d_gamma() <= 0.9 && r.d_gamma() < 1.0);
    }
}

#[test]
fn s0_decreases_with_margin() {
    let mut last = f64::INFINITY;
    for margin in [0.5, 0.3, 0.1, 0.03] {
        let w = find_s0(&pure(), 1e3, margin).unwrap();
        assert!(w.s0 <= last);
        last = w.s0;
    }
}

#[test]
fn s0_exists_for_power_tail() {
    let w = find_s0(&power_tail(), 1e4, 0.1).unwrap();
    assert!(w.s0 < 1e4);
}

#[test]
fn s0_search_fails_when_horizon_is_inadmissible() {
    let err = find_s0(&pure(), 30.0, 0.99).unwrap_err();
    assert!(matches!(err, Error::NoAdmissibleS0 { .. }));
}
