//! The admissible Fermi window `[s0, horizon]` and its cached sample table.
//!
//! Rows start one full turn into the spiral (θ = 2π, the first angle with a
//! previous coil) and grow geometrically with ratio 1.05, with the angular
//! step capped at π/8 so localized perturbations are always resolved.

use std::f64::consts::{PI, TAU};

use log::{debug, info, warn};

use crate::error::{Error, Result};
use crate::spiral::{
    arc_length, arc_length_between, coil_crossing, curvature_theta_derivs, invert_arc_length,
    invert_arc_length_from, GeometryOptions, SpiralSpec,
};

/// Growth ratio of consecutive sample angles.
pub const SAMPLE_RATIO: f64 = 1.05;
/// Upper bound on the angular step between sample rows.
pub const SAMPLE_MAX_STEP: f64 = PI / 8.0;

/// Geometry at one curve parameter, independent of the arc-length offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalGeometry {
    pub theta: f64,
    /// `ds/dθ`.
    pub speed: f64,
    pub gamma: f64,
    /// `dγ/ds`.
    pub dgamma: f64,
    /// `d²γ/ds²`.
    pub ddgamma: f64,
    /// Coil width along the inward normal.
    pub d: f64,
    /// Parameter of the hit point on the previous coil.
    pub tau: f64,
}

/// Curvature with its arc-length derivatives at θ, by the chain rule.
pub fn curvature_s_at_theta(spec: &SpiralSpec, theta: f64) -> Result<(f64, [f64; 3])> {
    let [g, g1, g2] = curvature_theta_derivs(spec, theta)?;
    let j = spec.radial_jet(theta);
    let q = j.r * j.r + j.dr * j.dr;
    let v = q.sqrt();
    let v1 = (j.r * j.dr + j.dr * j.ddr) / v;
    Ok((v, [g, g1 / v, (g2 * v - g1 * v1) / (v * v * v)]))
}

pub fn local_geometry(spec: &SpiralSpec, theta: f64, opts: &GeometryOptions) -> Result<LocalGeometry> {
    let (speed, [gamma, dgamma, ddgamma]) = curvature_s_at_theta(spec, theta)?;
    let c = coil_crossing(spec, theta, opts)?;
    Ok(LocalGeometry { theta, speed, gamma, dgamma, ddgamma, d: c.d, tau: c.tau })
}

/// One row of the window table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSample {
    pub s: f64,
    pub geom: LocalGeometry,
}

impl WindowSample {
    pub fn theta(&self) -> f64 {
        self.geom.theta
    }

    pub fn d_gamma(&self) -> f64 {
        self.geom.d * self.geom.gamma
    }
}

#[derive(Debug, Clone)]
pub struct GeometryWindow {
    pub spec: SpiralSpec,
    pub options: GeometryOptions,
    pub margin: f64,
    pub s0: f64,
    pub theta0: f64,
    /// Index of the first row at or beyond `s0`.
    pub s0_index: usize,
    pub horizon: f64,
    pub theta_horizon: f64,
    /// All rows from θ = 2π to the horizon, including those below `s0`.
    pub samples: Vec<WindowSample>,
}

/// Sample angles from 2π to `theta_end` inclusive.
pub fn sample_angles(theta_end: f64) -> Vec<f64> {
    let mut out = vec![TAU];
    let mut t = TAU;
    while t < theta_end {
        t = (t * SAMPLE_RATIO).min(t + SAMPLE_MAX_STEP);
        if t >= theta_end * (1.0 - 1e-12) {
            break;
        }
        out.push(t);
    }
    if theta_end > TAU {
        out.push(theta_end);
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn find_s0(spec: &SpiralSpec, horizon: f64, margin: f64) -> Result<GeometryWindow> {
    find_s0_with(spec, horizon, margin, &GeometryOptions::default())
}

/// Builds the sample table up to `horizon` and picks the smallest sampled
/// `s0` such that `d·γ ≤ 1 - margin` on every later row.
pub fn find_s0_with(spec: &SpiralSpec, horizon: f64, margin: f64, opts: &GeometryOptions) -> Result<GeometryWindow> {
    spec.validate()?;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidParameter(format!("margin must lie in (0, 1), got {margin}")));
    }
    let s_first = arc_length(spec, TAU, opts)?;
    if horizon <= s_first {
        return Err(Error::NoAdmissibleS0 { horizon, margin });
    }
    let theta_horizon = invert_arc_length_from(spec, horizon, TAU, s_first, opts)?;
    let angles = sample_angles(theta_horizon);

    let d_cap = TAU * spec.a0 + spec.coil_excess_bound();
    let mut samples = Vec::with_capacity(angles.len());
    let mut s = s_first;
    let mut prev = TAU;
    for (k, &theta) in angles.iter().enumerate() {
        if k > 0 {
            s += arc_length_between(spec, prev, theta, opts)?;
        }
        prev = theta;
        let geom = local_geometry(spec, theta, opts)?;
        if geom.d > d_cap * (1.0 + 1e-9) {
            warn!("coil width {} at θ = {theta} exceeds the a-priori cap {d_cap}", geom.d);
        }
        samples.push(WindowSample { s, geom });
    }
    // Pin the final row exactly on the requested horizon.
    if let Some(last) = samples.last_mut() {
        last.s = horizon;
    }

    let limit = 1.0 - margin;
    let mut s0_index = None;
    for k in (0..samples.len()).rev() {
        if samples[k].d_gamma() <= limit {
            s0_index = Some(k);
        } else {
            break;
        }
    }
    let s0_index = s0_index.ok_or(Error::NoAdmissibleS0 { horizon, margin })?;
    let row0 = samples[s0_index];

    let tail_start = samples.len().saturating_sub(samples.len().max(8) / 4).max(s0_index);
    let tail: Vec<(f64, f64)> = samples[tail_start..].iter().map(|r| (r.s, r.d_gamma())).collect();
    match log_log_slope(&tail) {
        Some(slope) => {
            info!("d·γ decays like s^{slope:.4} near the horizon (expected about -0.5)");
            if !(slope < -0.25) {
                warn!("d·γ decay exponent {slope:.4} is slower than expected; validity beyond the horizon is doubtful");
            }
        }
        None => warn!("not enough rows to fit the d·γ decay near the horizon"),
    }
    debug!(
        "window: {} rows, s0 = {} (θ0 = {}), horizon = {horizon} (θ = {theta_horizon})",
        samples.len(),
        row0.s,
        row0.theta()
    );

    Ok(GeometryWindow {
        spec: *spec,
        options: *opts,
        margin,
        s0: row0.s,
        theta0: row0.theta(),
        s0_index,
        horizon,
        theta_horizon,
        samples,
    })
}

impl GeometryWindow {
    /// Rows with `s ≥ s0`.
    pub fn admissible(&self) -> &[WindowSample] {
        &self.samples[self.s0_index..]
    }

    fn check_s(&self, s: f64) -> Result<()> {
        let slack = 1e-12 * self.s0.max(1.0);
        if s.is_nan() || s < self.s0 - slack {
            return Err(Error::BelowS0 { s, s0: self.s0 });
        }
        if s > self.horizon * (1.0 + 1e-12) {
            return Err(Error::BeyondHorizon { s, horizon: self.horizon });
        }
        Ok(())
    }

    /// θ(s) for `s` inside the window, inverted from the nearest table row.
    pub fn theta_of_s(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        let rows = &self.samples;
        let k = rows.partition_point(|r| r.s <= s).saturating_sub(1);
        let row = rows[k];
        if row.s == s {
            return Ok(row.theta());
        }
        invert_arc_length_from(&self.spec, s, row.theta(), row.s, &self.options)
    }

    pub fn check_theta(&self, theta: f64) -> Result<()> {
        if theta < self.theta0 * (1.0 - 1e-14) {
            return Err(Error::BelowS0 { s: f64::NAN, s0: self.s0 });
        }
        Ok(())
    }

    /// Local geometry at arc length `s ≥ s0`.
    pub fn local_at_s(&self, s: f64) -> Result<LocalGeometry> {
        let theta = self.theta_of_s(s)?;
        local_geometry(&self.spec, theta, &self.options)
    }

    /// Local geometry at curve parameter `θ ≥ θ0`.
    pub fn local_at_theta(&self, theta: f64) -> Result<LocalGeometry> {
        self.check_theta(theta)?;
        local_geometry(&self.spec, theta, &self.options)
    }

    /// Arc length at θ, integrated from the nearest table row.
    pub fn s_of_theta(&self, theta: f64) -> Result<f64> {
        let rows = &self.samples;
        let k = rows.partition_point(|r| r.theta() <= theta);
        if k == 0 {
            return arc_length(&self.spec, theta, &self.options);
        }
        let row = rows[k - 1];
        Ok(row.s + arc_length_between(&self.spec, row.theta(), theta, &self.options)?)
    }

    /// θ(s) without the window restriction; used for diagnostics only.
    pub fn theta_of_s_unchecked(&self, s: f64) -> Result<f64> {
        invert_arc_length(&self.spec, s, &self.options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_angles_are_increasing_and_capped() {
        let a = sample_angles(200.0);
        assert_eq!(a[0], TAU);
        assert_eq!(*a.last().unwrap(), 200.0);
        for w in a.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] <= SAMPLE_MAX_STEP + 1e-12);
            assert!(w[1] <= w[0] * SAMPLE_RATIO + 1e-12);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..10).map(|k| (k as f64, 3.0 * (k as f64).powf(-1.5))).collect();
        assert!((log_log_slope(&pts).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn window_rejects_out_of_range_queries() {
        let spec = SpiralSpec::pure(1.0).unwrap();
        let w = find_s0(&spec, 500.0, 0.1).unwrap();
        assert!(matches!(w.theta_of_s(w.s0 * 0.5), Err(Error::BelowS0 { .. })));
        assert!(matches!(w.theta_of_s(600.0), Err(Error::BeyondHorizon { .. })));
        let t = w.theta_of_s(300.0).unwrap();
        assert!((w.s_of_theta(t).unwrap() - 300.0).abs() < 1e-8);
    }

    #[test]
    fn window_rows_satisfy_margin() {
        let spec = SpiralSpec::power_tail(1.0, 0.5, 1.5).unwrap();
        let w = find_s0(&spec, 2000.0, 0.2).unwrap();
        for r in w.admissible() {
            assert!(r.d_gamma() <= 0.8);
        }
        for pair in w.samples.windows(2) {
            assert!(pair[1].s > pair[0].s);
        }
    }
}
