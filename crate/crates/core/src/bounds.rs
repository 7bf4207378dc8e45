//! Semiclassical constants and two-term bounds on eigenvalue moments below Λ.
//!
//! The integral term is
//! `c·∫ √(W̃+Λ)·(W̃+Λ-(π/d)²)₊^{σ+1/2}·d ds` over `[s0, ∞)`, evaluated in the
//! curve parameter with `ds = √(r²+ṙ²) dθ`. Its positive part is located by
//! sign changes on the window rows, each root refined by bisection, and the
//! positive segments are integrated adaptively. The volume term accounts for
//! the bounded inner region cut off at `s0`.

use std::f64::consts::{PI, TAU};

use libm::tgamma;
use log::{debug, info};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::w_effective;
use crate::quadrature::{integrate_fallible, QuadratureOptions};
use crate::spiral::{coil_crossing, fermi_map, GeometryOptions, SpiralSpec};
use crate::window::{log_log_slope, GeometryWindow, LocalGeometry};

/// `Γ(σ+1) / (√(4π)·Γ(σ+3/2))`.
pub fn lt_constant_1(sigma: f64) -> f64 {
    tgamma(sigma + 1.0) / ((4.0 * PI).sqrt() * tgamma(sigma + 1.5))
}

/// `1 / (4π(σ+1))`.
pub fn lt_constant_2(sigma: f64) -> f64 {
    1.0 / (4.0 * PI * (sigma + 1.0))
}

/// What to do when the positive part of the integrand survives the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailCut {
    /// Fit a power law `f ≈ C θ^{-q}` near the horizon and add its tail.
    #[default]
    PowerLaw,
    /// Demand that the positive part vanishes before the horizon.
    Certified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub sigma: f64,
    /// Threshold Λ; `None` means `1/(4a0²)`.
    pub threshold: Option<f64>,
    /// Factor `r(σ,1)`; `None` means 1 for σ ≥ 3/2 and 2 below.
    pub r_factor: Option<f64>,
    pub quad_rel_tol: f64,
    pub tail_cut: TailCut,
}

impl BoundParams {
    pub fn new(sigma: f64) -> Self {
        Self { sigma, threshold: None, r_factor: None, quad_rel_tol: 1e-8, tail_cut: TailCut::PowerLaw }
    }

    pub fn lambda(&self, a0: f64) -> f64 {
        self.threshold.unwrap_or(1.0 / (4.0 * a0 * a0))
    }

    pub fn r_factor_value(&self) -> f64 {
        self.r_factor.unwrap_or(if self.sigma >= 1.5 { 1.0 } else { 2.0 })
    }

    /// `r(σ,1)·L_{σ,1}`.
    pub fn semiclassical_prefactor(&self) -> f64 {
        self.r_factor_value() * lt_constant_1(self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRoutine {
    Main,
    LowSigma,
}

/// Power-law extrapolation of the integrand beyond the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub theta_start: f64,
    pub exponent: f64,
    pub value: f64,
    pub uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub sigma: f64,
    pub routine: BoundRoutine,
    pub lambda: f64,
    pub integral_term: f64,
    pub omega2_term: f64,
    pub omega2_volume: f64,
    pub total: f64,
    /// Quadrature error over the window; the tail carries its own uncertainty.
    pub quad_error_estimate: f64,
    /// Last arc length where the positive part is nonzero.
    pub s_star: Option<f64>,
    /// Curve-parameter intervals where the positive part is nonzero.
    pub support_theta: Vec<(f64, f64)>,
    pub tail: Option<TailEstimate>,
}

impl BoundResult {
    /// Quadrature error plus the extrapolation uncertainty of the tail.
    pub fn total_uncertainty(&self) -> f64 {
        self.quad_error_estimate + self.tail.map_or(0.0, |t| t.uncertainty)
    }
}

/// One evaluation of the bound integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrandPoint {
    pub theta: f64,
    pub d: f64,
    pub w_eff: f64,
    /// `W̃ + Λ - (π/d)²`.
    pub gap: f64,
    /// Integrand per unit arc length.
    pub per_s: f64,
    /// Integrand per unit curve parameter.
    pub per_theta: f64,
}

/// Integrand evaluator sharing the constants of one bound.
struct Integrand<'a> {
    window: &'a GeometryWindow,
    coef: f64,
    lambda: f64,
    power: f64,
}

impl Integrand<'_> {
    fn gap(&self, g: &LocalGeometry) -> Result<(f64, f64)> {
        let w = w_effective(g.gamma, g.dgamma, g.ddgamma, g.d)?;
        let k = PI / g.d;
        Ok((w, w + self.lambda - k * k))
    }

    fn point(&self, g: &LocalGeometry) -> Result<IntegrandPoint> {
        let (w, gap) = self.gap(g)?;
        let per_s = if gap > 0.0 { self.coef * (w + self.lambda).sqrt() * gap.powf(self.power) * g.d } else { 0.0 };
        Ok(IntegrandPoint { theta: g.theta, d: g.d, w_eff: w, gap, per_s, per_theta: per_s * g.speed })
    }

    fn at(&self, theta: f64) -> Result<IntegrandPoint> {
        let g = self.window.local_at_theta(theta)?;
        self.point(&g)
    }

    /// Root of the gap in `[a, b]` given opposite signs at the ends.
    fn refine_root(&self, mut a: f64, mut b: f64, gap_a: f64) -> Result<f64> {
        let positive_at_a = gap_a > 0.0;
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let (_, gm) = self.gap(&self.window.local_at_theta(m)?)?;
            if (gm > 0.0) == positive_at_a {
                a = m;
            } else {
                b = m;
            }
            if b - a <= 1e-13 * b {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma >= 0.5) {
        return Err(Error::InvalidParameter(format!("σ must be at least 1/2, got {sigma}")));
    }
    Ok(())
}

/// Evaluates the integrand of the bound with the given prefactor at θ.
pub fn integrand_at(window: &GeometryWindow, params: &BoundParams, theta: f64) -> Result<IntegrandPoint> {
    check_sigma(params.sigma)?;
    let ig = Integrand {
        window,
        coef: 2.0 * params.semiclassical_prefactor() / PI,
        lambda: params.lambda(window.spec.a0),
        power: params.sigma + 0.5,
    };
    ig.at(theta)
}

/// Region enclosed by the spiral arc from `τ*` to `θ0` and the normal segment
/// of length `d(θ0)` closing it.
pub fn omega2_volume_at(spec: &SpiralSpec, theta0: f64, opts: &GeometryOptions) -> Result<f64> {
    const N: usize = 4096;
    let crossing = coil_crossing(spec, theta0, opts)?;
    let tau_star = crossing.tau;
    let polygon = |n: usize| -> Vec<[f64; 2]> {
        (0..=n)
            .map(|i| fermi_map(spec, tau_star + (theta0 - tau_star) * i as f64 / n as f64, 0.0))
            .collect()
    };
    let area = |pts: &[[f64; 2]]| -> f64 {
        let n = pts.len();
        let mut acc = 0.0;
        for i in 0..n {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            acc += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * acc.abs()
    };
    let coarse = polygon(N);
    // The closing edge runs from c(θ0) back to c(τ*) along the normal.
    let last = coarse[N];
    let first = coarse[0];
    for i in 1..N - 1 {
        if segments_cross(last, first, coarse[i], coarse[i + 1]) {
            return Err(Error::SelfIntersection(theta0));
        }
    }
    let a_n = area(&coarse);
    let a_2n = area(&polygon(2 * N));
    let value = (4.0 * a_2n - a_n) / 3.0;
    debug!("Ω2 area at θ0 = {theta0}: {value} (τ* = {tau_star}, Richardson change {})", value - a_2n);
    Ok(value)
}

pub fn omega2_volume(window: &GeometryWindow) -> Result<f64> {
    omega2_volume_at(&window.spec, window.theta0, &window.options)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Proper crossing test for two closed segments.
fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// Dispatches on σ: [`bound_main`] for σ ≥ 3/2, [`bound_low_sigma`] below.
pub fn bound(window: &GeometryWindow, params: &BoundParams) -> Result<BoundResult> {
    check_sigma(params.sigma)?;
    if params.sigma >= 1.5 {
        bound_main(window, params)
    } else {
        bound_low_sigma(window, params)
    }
}

pub fn bound_main(window: &GeometryWindow, params: &BoundParams) -> Result<BoundResult> {
    check_sigma(params.sigma)?;
    if params.sigma < 1.5 {
        return Err(Error::InvalidParameter(format!("main bound needs σ ≥ 3/2, got {}", params.sigma)));
    }
    if params.r_factor_value() != 1.0 {
        return Err(Error::InvalidParameter("r(σ,1) equals 1 for σ ≥ 3/2".into()));
    }
    let lambda = params.lambda(window.spec.a0);
    let vol_coef = 2.0 * lt_constant_2(params.sigma) * lambda.powf(params.sigma + 1.0);
    evaluate(window, params, BoundRoutine::Main, vol_coef)
}

pub fn bound_low_sigma(window: &GeometryWindow, params: &BoundParams) -> Result<BoundResult> {
    check_sigma(params.sigma)?;
    let sigma = params.sigma;
    if sigma >= 1.5 {
        return Err(Error::InvalidParameter(format!("low-σ bound needs σ < 3/2, got {sigma}; use the main bound")));
    }
    let r = params.r_factor_value();
    if !(r > 0.0 && r <= 2.0) {
        return Err(Error::InvalidParameter(format!("r(σ,1) must lie in (0, 2], got {r}")));
    }
    let lambda = params.lambda(window.spec.a0);
    let vol_coef = 4.0 * (sigma / (sigma + 1.0)).powf(sigma) * lt_constant_2(sigma) * lambda.powf(sigma + 1.0);
    evaluate(window, params, BoundRoutine::LowSigma, vol_coef)
}

fn evaluate(window: &GeometryWindow, params: &BoundParams, routine: BoundRoutine, vol_coef: f64) -> Result<BoundResult> {
    let lambda = params.lambda(window.spec.a0);
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("threshold Λ must be positive, got {lambda}")));
    }
    let ig = Integrand {
        window,
        coef: 2.0 * params.semiclassical_prefactor() / PI,
        lambda,
        power: params.sigma + 0.5,
    };

    let volume = omega2_volume(window)?;
    let omega2_term = vol_coef * volume;

    // Sign pattern of the gap on the admissible rows.
    let rows = window.admissible();
    let mut gaps = Vec::with_capacity(rows.len());
    for r in rows {
        gaps.push(ig.gap(&r.geom)?.1);
    }
    let mut support = Vec::new();
    let mut open: Option<f64> = (gaps[0] > 0.0).then_some(rows[0].theta());
    for k in 1..rows.len() {
        let (a, b) = (rows[k - 1].theta(), rows[k].theta());
        match (gaps[k - 1] > 0.0, gaps[k] > 0.0) {
            (false, true) => open = Some(ig.refine_root(a, b, gaps[k - 1])?),
            (true, false) => {
                let end = ig.refine_root(a, b, gaps[k - 1])?;
                support.push((open.take().expect("segment opened"), end));
            }
            _ => {}
        }
    }
    let theta_h = window.theta_horizon;
    let unbounded = open.is_some();
    if let Some(start) = open {
        support.push((start, theta_h));
    }

    // Curvature derivatives jump where the profile or its image one coil
    // later is only finitely smooth.
    let mut knots: Vec<f64> = window.spec.breakpoints();
    knots.extend(window.spec.breakpoints().iter().map(|b| b + TAU));

    let quad = QuadratureOptions {
        rel_tol: params.quad_rel_tol,
        abs_tol: 1e-3 * params.quad_rel_tol * omega2_term,
        max_subdivisions: 2000,
    };
    let mut integral = 0.0;
    let mut error = 0.0;
    for &(a, b) in &support {
        let mut pts = vec![a];
        pts.extend(knots.iter().copied().filter(|&t| t > a && t < b));
        pts.push(b);
        for w in pts.windows(2) {
            let r = integrate_fallible(|t| ig.at(t).map(|p| p.per_theta), w[0], w[1], quad)?;
            integral += r.value;
            error += r.error;
        }
    }

    let mut tail = None;
    if unbounded {
        match params.tail_cut {
            TailCut::Certified => return Err(Error::SupportNotLocalized { s: window.horizon }),
            TailCut::PowerLaw => {
                let t = power_law_tail(&ig, window)?;
                info!(
                    "positive part persists to the horizon; power-law tail θ^-{:.3} adds {:.3e} (±{:.1e})",
                    t.exponent, t.value, t.uncertainty
                );
                integral += t.value;
                tail = Some(t);
            }
        }
    } else {
        log_negative_tail(&ig, window, &gaps);
    }

    let s_star = match support.last() {
        None => None,
        Some(_) if unbounded => Some(window.horizon),
        Some(&(_, end)) => Some(window.s_of_theta(end)?),
    };
    let total = integral + omega2_term;
    debug!(
        "σ = {}: integral {integral:.6e} (err {error:.1e}), volume term {omega2_term:.6e}, {} support segments",
        params.sigma,
        support.len()
    );
    Ok(BoundResult {
        sigma: params.sigma,
        routine,
        lambda,
        integral_term: integral,
        omega2_term,
        omega2_volume: volume,
        total,
        quad_error_estimate: error,
        s_star,
        support_theta: support,
        tail,
    })
}

fn power_law_tail(ig: &Integrand<'_>, window: &GeometryWindow) -> Result<TailEstimate> {
    let tb = window.theta_horizon;
    let ta = 0.5 * tb;
    let not_localized = || Error::SupportNotLocalized { s: window.horizon };
    if ta < window.theta0 {
        return Err(not_localized());
    }
    let fb = ig.at(tb)?.per_theta;
    let fa = ig.at(ta)?.per_theta;
    if !(fa > 0.0 && fb > 0.0) {
        return Err(not_localized());
    }
    let q = (fa / fb).ln() / (tb / ta).ln();
    if !(q > 1.05) {
        return Err(not_localized());
    }
    let value = fb * tb / (q - 1.0);
    let tc = 0.25 * tb;
    let uncertainty = if tc >= window.theta0 {
        let fc = ig.at(tc)?.per_theta;
        let q2 = (fc / fa).ln() / (ta / tc).ln();
        if q2 > 1.0 {
            (value - fb * tb / (q2 - 1.0)).abs()
        } else {
            value
        }
    } else {
        value
    };
    Ok(TailEstimate { theta_start: tb, exponent: q, value, uncertainty })
}

fn log_negative_tail(ig: &Integrand<'_>, window: &GeometryWindow, gaps: &[f64]) {
    let rows = window.admissible();
    let start = rows.len().saturating_sub(rows.len().max(8) / 4);
    let pts: Vec<(f64, f64)> = rows[start..]
        .iter()
        .zip(&gaps[start..])
        .map(|(r, g)| (r.theta(), -g))
        .collect();
    if let Some(slope) = log_log_slope(&pts) {
        info!("gap stays negative to the horizon and decays like θ^{slope:.3} (Λ = {})", ig.lambda);
    }
}
