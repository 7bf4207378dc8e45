//! Certificate, tail integrability and asymptotic diagnostics.

use std::f64::consts::{PI, TAU};

use spiral_core::conditions::*;
use spiral_core::spiral::arc_length;
use spiral_core::window::{find_s0, GeometryWindow};
use spiral_core::{GeometryOptions, SpiralSpec};

fn pure(a0: f64) -> SpiralSpec {
    SpiralSpec::pure(a0).unwrap()
}

fn bump() -> SpiralSpec {
    SpiralSpec::bump(1.0, 1.0, 6.0 * PI, 8.0 * PI).unwrap()
}

fn power_tail() -> SpiralSpec {
    SpiralSpec::power_tail(1.0, 0.5, 1.5).unwrap()
}

fn horizon_at(spec: &SpiralSpec, theta: f64) -> f64 {
    arc_length(spec, theta, &GeometryOptions::default()).unwrap()
}

fn window_to_theta(spec: SpiralSpec, theta: f64, margin: f64) -> GeometryWindow {
    find_s0(&spec, horizon_at(&spec, theta), margin).unwrap()
}

#[test]
fn alpha_for_constant_width() {
    for a0 in [0.5, 1.0, 3.0] {
        let alpha = alpha_from_widths(a0, std::iter::repeat(TAU * a0).take(10));
        assert!((alpha - 4.0 * PI * a0.powi(3)).abs() < 1e-12 * a0.powi(3));
    }
}

#[test]
fn pure_alpha_approaches_four_pi() {
    let mut last = 0.0;
    for margin in [0.1, 0.3, 0.5, 0.7] {
        let alpha = certificate_alpha(&window_to_theta(pure(1.0), 300.0, margin));
        assert!(alpha < 4.0 * PI && alpha > last);
        last = alpha;
    }
    assert!((last / (4.0 * PI) - 1.0).abs() < 0.01, "α = {last}");
}

#[test]
fn alpha_scales_cubically() {
    let a1 = certificate_alpha(&window_to_theta(pure(1.0), 100.0, 0.3));
    let a2 = certificate_alpha(&window_to_theta(pure(2.0), 100.0, 0.3));
    assert!((a2 / a1 - 8.0).abs() < 1e-9);
}

#[test]
fn power_tail_is_certified() {
    let w = window_to_theta(power_tail(), 1e3, 0.7);
    let report = no_discrete_spectrum_certificate(&w).unwrap();
    assert_eq!(report.verdict, Verdict::CertifiedAbsentBeyondS0);
    assert!(report.worst_margin >= 0.0);
    // Left side decays like θ^-p with p = 1.5, right side like θ^-2.
    assert!((report.lhs_exponent.unwrap() - 1.5).abs() < 0.05);
    assert!((report.rhs_exponent.unwrap() - 2.0).abs() < 0.05);
}

#[test]
fn certified_verdict_holds_pointwise() {
    let w = window_to_theta(power_tail(), 1e3, 0.7);
    let report = no_discrete_spectrum_certificate(&w).unwrap();
    assert_eq!(report.verdict, Verdict::CertifiedAbsentBeyondS0);
    for r in w.admissible() {
        let g = r.geom;
        let weff = spiral_core::potential::w_effective(g.gamma, g.dgamma, g.ddgamma, g.d).unwrap();
        assert!(TAU - g.d >= report.alpha * weff);
    }
}

#[test]
fn widened_bump_violates_certificate() {
    let w = window_to_theta(bump(), 200.0, 0.5);
    let report = no_discrete_spectrum_certificate(&w).unwrap();
    assert_eq!(report.verdict, Verdict::Violated);
    let theta = w.theta_of_s(report.worst_s).unwrap();
    assert!((6.0 * PI..=8.0 * PI).contains(&theta), "worst at θ = {theta}");
}

#[test]
fn pure_certificate_is_asymptotically_tight() {
    let w = window_to_theta(pure(1.0), 500.0, 0.1);
    let report = no_discrete_spectrum_certificate(&w).unwrap();
    let ratio = report.lhs_scaled / report.rhs_scaled;
    assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
    assert!((report.lhs_scaled / PI - 1.0).abs() < 0.1);
}

#[test]
fn tail_integrability_by_family() {
    let b = tail_integrability(&window_to_theta(bump(), 200.0, 0.1), 0.5).unwrap();
    assert!(b.finite && b.integral > 0.0);
    let p = tail_integrability(&window_to_theta(power_tail(), 300.0, 0.1), 0.5).unwrap();
    assert!(p.finite);
    assert_eq!(p.tail_estimate, 0.0);
    assert_eq!(p.integral, 0.0);
    let q = tail_integrability(&window_to_theta(pure(1.0), 300.0, 0.1), 1.5).unwrap();
    assert!(q.finite);
    assert_eq!(q.integral, 0.0);
    assert!(tail_integrability(&window_to_theta(pure(1.0), 50.0, 0.1), 0.4).is_err());
}

#[test]
fn tail_estimate_does_not_grow_with_sigma() {
    // Horizon inside the widened coil, so the excess is still positive there.
    let spec = bump();
    let w = find_s0(&spec, horizon_at(&spec, 7.0 * PI), 0.1).unwrap();
    let mut last = f64::INFINITY;
    for sigma in [0.5, 1.0, 1.5, 2.0, 3.0] {
        let t = tail_integrability(&w, sigma).unwrap();
        assert!(t.tail_estimate <= last, "σ = {sigma}");
        last = t.tail_estimate;
    }
}

#[test]
fn diagnostics_for_pure_spiral() {
    let w = window_to_theta(pure(1.0), 250.0, 0.1);
    let d = asymptotic_diagnostics(&w).unwrap();
    assert_eq!(d.rows.len(), 50);
    let first = d.rows.first().unwrap().scaled_residual;
    let last = d.rows.last().unwrap().scaled_residual;
    assert!(last / first < 10.0);
    let grid: Vec<f64> = log_grid(20.0, 200.0, 40);
    let d = asymptotic_diagnostics_on(&w, &grid).unwrap();
    for r in &d.rows {
        assert!(r.gamma_residual.abs() <= 3.0 / r.theta);
        assert!(r.arc_length_residual.abs() <= 3.0 / r.theta);
        assert!(r.w_eff_residual.is_some());
    }
}

#[test]
fn diagnostics_for_bump_match_pure_beyond_support() {
    let grid = log_grid(11.0 * PI, 200.0, 20);
    let p = asymptotic_diagnostics_on(&window_to_theta(pure(1.0), 250.0, 0.1), &grid).unwrap();
    let b = asymptotic_diagnostics_on(&window_to_theta(bump(), 250.0, 0.1), &grid).unwrap();
    for (x, y) in p.rows.iter().zip(&b.rows) {
        assert!((x.expansion_residual - y.expansion_residual).abs() < 1e-12);
        assert!((x.gamma_residual - y.gamma_residual).abs() < 1e-12);
    }
}

#[test]
fn diagnostics_reject_power_tail() {
    assert!(asymptotic_diagnostics(&window_to_theta(power_tail(), 100.0, 0.1)).is_err());
}
