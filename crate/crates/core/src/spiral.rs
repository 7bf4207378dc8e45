//! Spiral curves `r(θ) = a0·θ + ρ(θ)` and their pointwise geometry.
//!
//! Everything here is a pure function of a [`SpiralSpec`] and scalar
//! arguments: radial jets, the width function, curvature and its angular
//! derivatives, arc length and its inverse, the Fermi (parallel) map and the
//! coil width measured along the inward normal.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

/// Largest value of `|P'(x)|` for `P(x) = (1 - x²)^5` on `[-1, 1]`,
/// attained at `x = 1/3`.
const BUMP_SLOPE_MAX: f64 = 10.0 / 3.0 * (64.0 / 81.0) * (64.0 / 81.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Perturbation {
    /// `ρ ≡ 0`.
    Pure,
    /// `ρ(θ) = c/(p-1)·(1+θ)^(1-p)`, so that `ρ'(θ) = -c(1+θ)^(-p)`.
    PowerTail { c: f64, p: f64 },
    /// `ρ(θ) = A·(1 - x²)^5` with `x = (2θ - θ1 - θ2)/(θ2 - θ1)` on
    /// `[θ1, θ2]` and zero elsewhere. The profile is C⁴, so the curvature
    /// and its first two derivatives stay continuous.
    Bump { amplitude: f64, theta1: f64, theta2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralSpec {
    pub a0: f64,
    pub perturbation: Perturbation,
}

/// Radial function and its first four angular derivatives at one θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub r: f64,
    pub dr: f64,
    pub ddr: f64,
    pub d3r: f64,
    pub d4r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryOptions {
    pub quadrature: QuadratureOptions,
    /// Root tolerance, relative to `a0` for lengths and to `max(1, s)` for
    /// arc-length inversion.
    pub root_tol: f64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        Self { quadrature: QuadratureOptions::default(), root_tol: 1e-12 }
    }
}

/// Result of marching along the inward normal to the previous coil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoilCrossing {
    /// Normal length `d`.
    pub d: f64,
    /// Curve parameter of the hit point on the previous coil.
    pub tau: f64,
}

impl SpiralSpec {
    pub fn pure(a0: f64) -> Result<Self> {
        Self::new(a0, Perturbation::Pure)
    }

    pub fn power_tail(a0: f64, c: f64, p: f64) -> Result<Self> {
        Self::new(a0, Perturbation::PowerTail { c, p })
    }

    pub fn bump(a0: f64, amplitude: f64, theta1: f64, theta2: f64) -> Result<Self> {
        Self::new(a0, Perturbation::Bump { amplitude, theta1, theta2 })
    }

    pub fn new(a0: f64, perturbation: Perturbation) -> Result<Self> {
        let spec = Self { a0, perturbation };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.a0.is_finite() && self.a0 > 0.0) {
            return bad(format!("a0 must be positive and finite, got {}", self.a0));
        }
        match self.perturbation {
            Perturbation::Pure => Ok(()),
            Perturbation::PowerTail { c, p } => {
                if !(c.is_finite() && c > 0.0) {
                    return bad(format!("power-tail c must be positive, got {c}"));
                }
                if !(p > 1.0 && p < 2.0) {
                    return bad(format!("power-tail exponent must satisfy 1 < p < 2, got {p}"));
                }
                if c >= self.a0 {
                    return bad(format!("power-tail c = {c} must stay below a0 = {} for monotonicity", self.a0));
                }
                Ok(())
            }
            Perturbation::Bump { amplitude, theta1, theta2 } => {
                if !(amplitude.is_finite() && theta1.is_finite() && theta2.is_finite()) {
                    return bad("bump parameters must be finite".into());
                }
                if !(theta1 >= 0.0 && theta2 > theta1) {
                    return bad(format!("bump support must satisfy 0 <= θ1 < θ2, got [{theta1}, {theta2}]"));
                }
                let slope = amplitude.abs() * BUMP_SLOPE_MAX * 2.0 / (theta2 - theta1);
                if slope >= self.a0 {
                    return bad(format!(
                        "bump slope {slope:.6} reaches a0 = {}; widen the support or lower the amplitude",
                        self.a0
                    ));
                }
                Ok(())
            }
        }
    }

    /// Upper bound on `sup_τ |ρ(τ+2π) - ρ(τ)|`.
    pub fn coil_excess_bound(&self) -> f64 {
        match self.perturbation {
            Perturbation::Pure => 0.0,
            Perturbation::PowerTail { .. } => self.rho_jet(0.0)[0] - self.rho_jet(TAU)[0],
            Perturbation::Bump { amplitude, .. } => amplitude.abs(),
        }
    }

    /// Angles where the profile is only finitely smooth. Quadrature splits here.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.perturbation {
            Perturbation::Bump { theta1, theta2, .. } => vec![theta1, theta2],
            _ => Vec::new(),
        }
    }

    /// `ρ` and its first four derivatives.
    pub fn rho_jet(&self, theta: f64) -> [f64; 5] {
        match self.perturbation {
            Perturbation::Pure => [0.0; 5],
            Perturbation::PowerTail { c, p } => {
                let t = 1.0 + theta;
                let tp = t.powf(-p);
                [
                    c / (p - 1.0) * t * tp,
                    -c * tp,
                    c * p * tp / t,
                    -c * p * (p + 1.0) * tp / (t * t),
                    c * p * (p + 1.0) * (p + 2.0) * tp / (t * t * t),
                ]
            }
            Perturbation::Bump { amplitude, theta1, theta2 } => {
                if theta <= theta1 || theta >= theta2 {
                    return [0.0; 5];
                }
                let w = theta2 - theta1;
                let x = (2.0 * theta - theta1 - theta2) / w;
                let k = 2.0 / w;
                let p = bump_poly_jet(x);
                [
                    amplitude * p[0],
                    amplitude * p[1] * k,
                    amplitude * p[2] * k * k,
                    amplitude * p[3] * k * k * k,
                    amplitude * p[4] * k * k * k * k,
                ]
            }
        }
    }

    /// Full radial jet without the monotonicity check.
    pub fn radial_jet(&self, theta: f64) -> RadialJet {
        let rho = self.rho_jet(theta);
        RadialJet {
            r: self.a0 * theta + rho[0],
            dr: self.a0 + rho[1],
            ddr: rho[2],
            d3r: rho[3],
            d4r: rho[4],
        }
    }

    /// Radius only; used in inner loops where the jet is not needed.
    pub fn radius(&self, theta: f64) -> f64 {
        self.a0 * theta + self.rho_jet(theta)[0]
    }
}

/// Coefficients of `(1 - x²)^5` in powers `x^0, x^2, ..., x^10`.
const BUMP_COEFFS: [f64; 6] = [1.0, -5.0, 10.0, -10.0, 5.0, -1.0];

/// Value and first four derivatives of `(1 - x²)^5`.
fn bump_poly_jet(x: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (k, &c) in BUMP_COEFFS.iter().enumerate() {
        let n = 2 * k as i32;
        for (order, slot) in out.iter_mut().enumerate() {
            let order = order as i32;
            if n < order {
                continue;
            }
            let falling: f64 = (0..order).map(|i| (n - i) as f64).product();
            *slot += c * falling * x.powi(n - order);
        }
    }
    out
}

fn check_angle(theta: f64) -> Result<()> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::NegativeAngle(theta));
    }
    Ok(())
}

/// `(r, ṙ, r̈)` at θ, rejecting angles where `r` fails to increase.
pub fn radial_profile(spec: &SpiralSpec, theta: f64) -> Result<(f64, f64, f64)> {
    check_angle(theta)?;
    let j = spec.radial_jet(theta);
    if j.dr <= 0.0 {
        return Err(Error::NotMonotone { theta, slope: j.dr });
    }
    Ok((j.r, j.dr, j.ddr))
}

/// `a(θ) = (r(θ+2π) - r(θ)) / 2π`.
pub fn width_function(spec: &SpiralSpec, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    let a = (spec.radius(theta + TAU) - spec.radius(theta)) / TAU;
    if a <= 0.0 {
        return Err(Error::NonPositiveWidth { theta, width: a });
    }
    Ok(a)
}

/// Speed of the parametrization θ ↦ (r cos θ, r sin θ), i.e. `ds/dθ`.
pub fn speed(spec: &SpiralSpec, theta: f64) -> f64 {
    let j = spec.radial_jet(theta);
    j.r.hypot(j.dr)
}

/// Signed curvature `(r² + 2ṙ² - r r̈) / (r² + ṙ²)^{3/2}`.
pub fn curvature_theta(spec: &SpiralSpec, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    let j = spec.radial_jet(theta);
    let q = j.r * j.r + j.dr * j.dr;
    if q == 0.0 {
        return Err(Error::DegenerateCurvature(theta));
    }
    Ok((j.r * j.r + 2.0 * j.dr * j.dr - j.r * j.ddr) / (q * q.sqrt()))
}

/// `(γ, dγ/dθ, d²γ/dθ²)` by exact differentiation of the curvature formula.
pub fn curvature_theta_derivs(spec: &SpiralSpec, theta: f64) -> Result<[f64; 3]> {
    check_angle(theta)?;
    let RadialJet { r, dr, ddr, d3r, d4r } = spec.radial_jet(theta);
    let q = r * r + dr * dr;
    if q == 0.0 {
        return Err(Error::DegenerateCurvature(theta));
    }
    let n = r * r + 2.0 * dr * dr - r * ddr;
    let n1 = 2.0 * r * dr + 3.0 * dr * ddr - r * d3r;
    let n2 = 2.0 * dr * dr + 2.0 * r * ddr + 3.0 * ddr * ddr + 2.0 * dr * d3r - r * d4r;
    let q1 = 2.0 * (r * dr + dr * ddr);
    let q2 = 2.0 * (dr * dr + r * ddr + ddr * ddr + dr * d3r);
    let qm32 = q.powf(-1.5);
    let qm52 = qm32 / q;
    let qm72 = qm52 / q;
    let g = n * qm32;
    let g1 = n1 * qm32 - 1.5 * n * q1 * qm52;
    let g2 = n2 * qm32 - 3.0 * n1 * q1 * qm52 - 1.5 * n * q2 * qm52 + 3.75 * n * q1 * q1 * qm72;
    Ok([g, g1, g2])
}

/// Same as [`curvature_theta_derivs`] but from Richardson-extrapolated
/// central differences of [`curvature_theta`] with base step `h`.
pub fn curvature_theta_derivs_fd(spec: &SpiralSpec, theta: f64, h: f64) -> Result<[f64; 3]> {
    check_angle(theta)?;
    let h = if theta > 0.0 { h.min(0.5 * theta) } else { h };
    let g0 = curvature_theta(spec, theta)?;
    let diffs = |h: f64| -> Result<(f64, f64)> {
        let gp = curvature_theta(spec, theta + h)?;
        let gm = curvature_theta(spec, (theta - h).max(0.0))?;
        Ok(((gp - gm) / (2.0 * h), (gp - 2.0 * g0 + gm) / (h * h)))
    };
    let (d1h, d2h) = diffs(h)?;
    let (d1h2, d2h2) = diffs(0.5 * h)?;
    Ok([g0, (4.0 * d1h2 - d1h) / 3.0, (4.0 * d2h2 - d2h) / 3.0])
}

/// Arc length `∫_a^b √(r² + ṙ²) dθ`, split at the profile's breakpoints.
pub fn arc_length_between(spec: &SpiralSpec, a: f64, b: f64, opts: &GeometryOptions) -> Result<f64> {
    let mut knots = vec![a];
    knots.extend(spec.breakpoints().into_iter().filter(|&t| t > a && t < b));
    knots.push(b);
    let mut total = 0.0;
    for w in knots.windows(2) {
        total += integrate(|t| speed(spec, t), w[0], w[1], opts.quadrature)?.value;
    }
    Ok(total)
}

/// `s(θ)`, the arc length from the origin of the parametrization.
pub fn arc_length(spec: &SpiralSpec, theta: f64, opts: &GeometryOptions) -> Result<f64> {
    check_angle(theta)?;
    arc_length_between(spec, 0.0, theta, opts)
}

/// Signed arc length from `a` to `b`.
fn arc_between_signed(spec: &SpiralSpec, a: f64, b: f64, opts: &GeometryOptions) -> Result<f64> {
    if b >= a {
        arc_length_between(spec, a, b, opts)
    } else {
        Ok(-arc_length_between(spec, b, a, opts)?)
    }
}

/// θ with `s(θ) = s`, by safeguarded Newton on incremental arc-length
/// integrals starting from the reference point `(theta_ref, s_ref)`.
pub fn invert_arc_length_from(
    spec: &SpiralSpec,
    s: f64,
    theta_ref: f64,
    s_ref: f64,
    opts: &GeometryOptions,
) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(Error::InvalidParameter(format!("arc length must be non-negative, got {s}")));
    }
    if s == s_ref {
        return Ok(theta_ref);
    }
    let tol = opts.root_tol * s.max(1.0);
    if s < s_ref {
        let s_at_zero = s_ref - arc_length_between(spec, 0.0, theta_ref, opts)?;
        if s <= s_at_zero {
            return Ok(0.0);
        }
    }

    // Archimedean guess, then Newton steps each integrated from the previous
    // iterate so that only a handful of short increments accumulate.
    let mut t = (theta_ref * theta_ref + 2.0 * (s - s_ref) / spec.a0).max(0.0).sqrt();
    let mut st = s_ref + arc_between_signed(spec, theta_ref, t, opts)?;
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..200 {
        let f = st - s;
        if f.abs() <= tol {
            return Ok(t);
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - f / speed(spec, t);
        if !(next > lo && next < hi) {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * t + 1.0 };
        }
        st += arc_between_signed(spec, t, next, opts)?;
        t = next;
        if hi.is_finite() && hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(t);
        }
    }
    Ok(t)
}

/// θ with `s(θ) = s`.
pub fn invert_arc_length(spec: &SpiralSpec, s: f64, opts: &GeometryOptions) -> Result<f64> {
    invert_arc_length_from(spec, s, 0.0, 0.0, opts)
}

/// Point at signed distance `u` along the inward unit normal at θ.
pub fn fermi_map(spec: &SpiralSpec, theta: f64, u: f64) -> [f64; 2] {
    let j = spec.radial_jet(theta);
    let (sin, cos) = theta.sin_cos();
    let norm = j.r.hypot(j.dr);
    let k = if norm > 0.0 { u / norm } else { 0.0 };
    [
        j.r * cos - k * (j.dr * sin + j.r * cos),
        j.r * sin + k * (j.dr * cos - j.r * sin),
    ]
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        y + TAU
    } else {
        y
    }
}

/// Tracks the continuously unwound polar angle of the marching point.
struct NormalRay<'a> {
    spec: &'a SpiralSpec,
    theta: f64,
}

impl NormalRay<'_> {
    /// Unwound angle at `u_to`, given the angle at `u_from`. Sub-steps keep
    /// each angular increment well below π even close to the origin.
    fn advance(&self, u_from: f64, angle_from: f64, u_to: f64) -> f64 {
        let mut u = u_from;
        let mut angle = angle_from;
        loop {
            let x = fermi_map(self.spec, self.theta, u);
            let radius = x[0].hypot(x[1]);
            let max_step = (0.25 * radius).max(1e-9 * self.spec.a0);
            let step = (u_to - u).clamp(-max_step, max_step);
            let next = if (u_to - u).abs() <= max_step { u_to } else { u + step };
            let y = fermi_map(self.spec, self.theta, next);
            angle += wrap_angle(y[1].atan2(y[0]) - angle);
            u = next;
            if u == u_to {
                return angle;
            }
        }
    }

    /// Crossing function `‖x(u)‖ - r(Θ(u) - 2π)`.
    fn crossing(&self, u: f64, angle: f64) -> f64 {
        let x = fermi_map(self.spec, self.theta, u);
        x[0].hypot(x[1]) - self.spec.radius((angle - TAU).max(0.0))
    }
}

/// First intersection of the inward normal at θ with the previous coil.
pub fn coil_crossing(spec: &SpiralSpec, theta: f64, opts: &GeometryOptions) -> Result<CoilCrossing> {
    check_angle(theta)?;
    if theta < TAU {
        return Err(Error::NoPreviousCoil(theta));
    }
    let ray = NormalRay { spec, theta };
    let step = spec.a0 * PI / 4.0;
    let limit = TAU * spec.a0 + spec.coil_excess_bound() + PI * spec.a0;
    let ftol = opts.root_tol * spec.a0;

    let mut u0 = 0.0;
    let mut ang0 = theta;
    let mut f0 = ray.crossing(u0, ang0);
    let (mut u1, mut ang1, mut f1);
    loop {
        u1 = (u0 + step).min(limit);
        ang1 = ray.advance(u0, ang0, u1);
        f1 = ray.crossing(u1, ang1);
        if f1 <= 0.0 {
            break;
        }
        if u1 >= limit {
            return Err(Error::NoCrossing { theta, limit });
        }
        u0 = u1;
        ang0 = ang1;
        f0 = f1;
    }
    if f1 == 0.0 {
        return Ok(CoilCrossing { d: u1, tau: ang1 - TAU });
    }

    // Illinois-modified regula falsi on [u0, u1], angles unwound from u0.
    let (mut a, mut fa, mut b, mut fb) = (u0, f0, u1, f1);
    let mut side = 0i8;
    for _ in 0..200 {
        let mut m = (a * fb - b * fa) / (fb - fa);
        if !(m > a && m < b) {
            m = 0.5 * (a + b);
        }
        let ang_m = ray.advance(u0, ang0, m);
        let fm = ray.crossing(m, ang_m);
        if fm.abs() <= ftol || (b - a) <= 4.0 * f64::EPSILON * b {
            return Ok(CoilCrossing { d: m, tau: ang_m - TAU });
        }
        if fm > 0.0 {
            a = m;
            fa = fm;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        } else {
            b = m;
            fb = fm;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    let m = 0.5 * (a + b);
    let ang_m = ray.advance(u0, ang0, m);
    Ok(CoilCrossing { d: m, tau: ang_m - TAU })
}

/// Coil width `d` at the curve point with parameter θ.
pub fn coil_width(spec: &SpiralSpec, theta: f64, opts: &GeometryOptions) -> Result<f64> {
    coil_crossing(spec, theta, opts).map(|c| c.d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> GeometryOptions {
        GeometryOptions::default()
    }

    #[test]
    fn bump_poly_derivatives_match_finite_differences() {
        let x = 0.37;
        let h = 1e-5;
        let j = bump_poly_jet(x);
        let jp = bump_poly_jet(x + h);
        let jm = bump_poly_jet(x - h);
        for k in 0..4 {
            let fd = (jp[k] - jm[k]) / (2.0 * h);
            assert!((fd - j[k + 1]).abs() < 1e-6 * (1.0 + j[k + 1].abs()), "order {k}");
        }
        assert!((j[0] - (1.0 - x * x).powi(5)).abs() < 1e-15);
    }

    #[test]
    fn bump_slope_constant() {
        let fine = (0..=100_000)
            .map(|i| bump_poly_jet(i as f64 / 100_000.0)[1].abs())
            .fold(0.0, f64::max);
        assert!((fine - BUMP_SLOPE_MAX).abs() < 1e-8);
    }

    #[test]
    fn power_tail_jet_is_consistent() {
        let spec = SpiralSpec::power_tail(1.0, 0.5, 1.5).unwrap();
        let h = 1e-5;
        let t = 3.0;
        let j = spec.rho_jet(t);
        let jp = spec.rho_jet(t + h);
        let jm = spec.rho_jet(t - h);
        for k in 0..4 {
            let fd = (jp[k] - jm[k]) / (2.0 * h);
            assert!((fd - j[k + 1]).abs() < 1e-7, "order {k}");
        }
    }

    #[test]
    fn validation_rejects_bad_specs() {
        assert!(SpiralSpec::pure(0.0).is_err());
        assert!(SpiralSpec::power_tail(1.0, 0.5, 2.0).is_err());
        assert!(SpiralSpec::power_tail(1.0, 1.5, 1.5).is_err());
        assert!(SpiralSpec::bump(1.0, 5.0, 10.0, 12.0).is_err());
        assert!(SpiralSpec::bump(1.0, 0.1, 12.0, 10.0).is_err());
    }

    #[test]
    fn analytic_and_difference_curvature_derivatives_agree() {
        let specs = [
            SpiralSpec::pure(1.0).unwrap(),
            SpiralSpec::power_tail(1.0, 0.5, 1.5).unwrap(),
            SpiralSpec::bump(1.0, 1.0, 6.0 * PI, 8.0 * PI).unwrap(),
        ];
        for spec in &specs {
            for theta in [7.0, 21.0, 23.5, 40.0] {
                let a = curvature_theta_derivs(spec, theta).unwrap();
                let f = curvature_theta_derivs_fd(spec, theta, 1e-3).unwrap();
                for k in 0..3 {
                    assert!((a[k] - f[k]).abs() < 1e-7 * (1.0 + a[k].abs()), "{spec:?} θ={theta} k={k}: {a:?} {f:?}");
                }
            }
        }
    }

    #[test]
    fn fermi_map_normal_is_orthogonal_to_tangent() {
        let spec = SpiralSpec::power_tail(1.0, 0.3, 1.2).unwrap();
        let theta = 9.0;
        let p0 = fermi_map(&spec, theta, 0.0);
        let p1 = fermi_map(&spec, theta, 1.0);
        let h = 1e-6;
        let a = fermi_map(&spec, theta + h, 0.0);
        let b = fermi_map(&spec, theta - h, 0.0);
        let t = [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)];
        let n = [p1[0] - p0[0], p1[1] - p0[1]];
        assert!((n[0] * t[0] + n[1] * t[1]).abs() < 1e-6 * t[0].hypot(t[1]));
        // The normal points towards the origin side.
        assert!(p1[0].hypot(p1[1]) < p0[0].hypot(p0[1]));
    }

    #[test]
    fn coil_crossing_lands_on_previous_coil() {
        let spec = SpiralSpec::bump(1.0, 1.0, 6.0 * PI, 8.0 * PI).unwrap();
        for theta in [TAU, 8.0, 20.0, 23.0, 27.0, 60.0] {
            let c = coil_crossing(&spec, theta, &opts()).unwrap();
            let p = fermi_map(&spec, theta, c.d);
            let q = fermi_map(&spec, c.tau, 0.0);
            assert!((p[0] - q[0]).hypot(p[1] - q[1]) < 1e-9, "θ={theta}");
            assert!(c.tau >= theta - TAU && c.tau < theta);
        }
    }

    #[test]
    fn coil_width_needs_previous_coil() {
        let spec = SpiralSpec::pure(1.0).unwrap();
        assert!(matches!(coil_width(&spec, 5.0, &opts()), Err(Error::NoPreviousCoil(_))));
    }

    #[test]
    fn inversion_from_reference_point() {
        let spec = SpiralSpec::pure(1.0).unwrap();
        let s20 = arc_length(&spec, 20.0, &opts()).unwrap();
        let s30 = arc_length(&spec, 30.0, &opts()).unwrap();
        let t = invert_arc_length_from(&spec, s30, 20.0, s20, &opts()).unwrap();
        assert!((t - 30.0).abs() < 1e-9);
        let t = invert_arc_length_from(&spec, s20, 30.0, s30, &opts()).unwrap();
        assert!((t - 20.0).abs() < 1e-9, "{t}");
    }
}
