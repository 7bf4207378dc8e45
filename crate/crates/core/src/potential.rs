//! Curvature-induced potentials in Fermi coordinates.
//!
//! `W(s, u)` is the full potential produced by straightening the coil, and
//! `W̃(s)` the effective one-dimensional potential that dominates it across
//! the cross-section `0 ≤ u ≤ d(s)`. Both are implemented exactly as their
//! defining formulas read: the middle term of `W` keeps the sign of `γ̈`,
//! while `W̃` uses `|γ̈|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::window::GeometryWindow;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureData {
    pub s: f64,
    pub gamma: f64,
    pub dgamma: f64,
    pub ddgamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub s: f64,
    pub u: Option<f64>,
    pub w_full: Option<f64>,
    pub w_eff: f64,
}

/// `γ²/(4(1-uγ)²) + uγ̈/(2(1-uγ)³) + (5/4)u²γ̇²/(1-uγ)⁴`.
pub fn w_full(gamma: f64, dgamma: f64, ddgamma: f64, u: f64) -> Result<f64> {
    let t = 1.0 - u * gamma;
    if t <= 0.0 {
        return Err(Error::SingularDenominator(u * gamma));
    }
    let t2 = t * t;
    Ok(gamma * gamma / (4.0 * t2) + u * ddgamma / (2.0 * t2 * t) + 1.25 * u * u * dgamma * dgamma / (t2 * t2))
}

/// `γ²/(4(1-γd)²) + d|γ̈|/(2(1-γd)³) + (5/4)d²|γ̇|²/(1-dγ)⁴`.
pub fn w_effective(gamma: f64, dgamma: f64, ddgamma: f64, d: f64) -> Result<f64> {
    let t = 1.0 - gamma * d;
    if t <= 0.0 {
        return Err(Error::SingularDenominator(gamma * d));
    }
    let t2 = t * t;
    Ok(gamma * gamma / (4.0 * t2) + d * ddgamma.abs() / (2.0 * t2 * t) + 1.25 * d * d * dgamma.abs().powi(2) / (t2 * t2))
}

/// `(πj/d)² - W̃ - 1/(4a0²)`.
pub fn transverse_eigenvalue_raw(d: f64, w_eff: f64, a0: f64, j: u32) -> f64 {
    let k = std::f64::consts::PI * j as f64 / d;
    k * k - w_eff - 1.0 / (4.0 * a0 * a0)
}

pub fn curvature_in_s(window: &GeometryWindow, s: f64) -> Result<CurvatureData> {
    let g = window.local_at_s(s)?;
    Ok(CurvatureData { s, gamma: g.gamma, dgamma: g.dgamma, ddgamma: g.ddgamma })
}

pub fn potential_full(window: &GeometryWindow, s: f64, u: f64) -> Result<f64> {
    let g = window.local_at_s(s)?;
    if !(u >= 0.0 && u <= g.d * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("u = {u} outside the cross-section [0, {}]", g.d)));
    }
    w_full(g.gamma, g.dgamma, g.ddgamma, u)
}

pub fn potential_effective(window: &GeometryWindow, s: f64) -> Result<f64> {
    let g = window.local_at_s(s)?;
    w_effective(g.gamma, g.dgamma, g.ddgamma, g.d)
}

pub fn potential_sample(window: &GeometryWindow, s: f64, u: Option<f64>) -> Result<PotentialSample> {
    let g = window.local_at_s(s)?;
    let w_eff = w_effective(g.gamma, g.dgamma, g.ddgamma, g.d)?;
    let w_full = u.map(|u| w_full(g.gamma, g.dgamma, g.ddgamma, u)).transpose()?;
    Ok(PotentialSample { s, u, w_full, w_eff })
}

/// `j`-th eigenvalue of the transverse operator at arc length `s`.
pub fn transverse_eigenvalue(window: &GeometryWindow, s: f64, j: u32) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("transverse mode index starts at 1".into()));
    }
    let g = window.local_at_s(s)?;
    let w = w_effective(g.gamma, g.dgamma, g.ddgamma, g.d)?;
    Ok(transverse_eigenvalue_raw(g.d, w, window.spec.a0, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_potential_on_curve() {
        assert_eq!(w_full(0.3, 0.1, -0.2, 0.0).unwrap(), 0.09 / 4.0);
    }

    #[test]
    fn effective_potential_single_term() {
        let w = w_effective(0.2, 0.0, 0.0, 2.0).unwrap();
        assert!((w - 0.04 / (4.0 * 0.36)).abs() < 1e-15);
    }

    #[test]
    fn singular_denominators_are_rejected() {
        assert!(matches!(w_full(0.5, 0.0, 0.0, 2.0), Err(Error::SingularDenominator(_))));
        assert!(matches!(w_effective(0.5, 0.0, 0.0, 3.0), Err(Error::SingularDenominator(_))));
    }

    #[test]
    fn transverse_trivial_case() {
        let e = transverse_eigenvalue_raw(std::f64::consts::PI, 0.0, 0.5, 1);
        assert!(e.abs() < 1e-15);
    }
}
