//! Uniform grids masked to a truncated spiral domain or to simple test shapes.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spiral_core::SpiralSpec;

use crate::error::{FdError, Result};

/// Smallest number of interior nodes allowed across one coil.
pub const MIN_NODES_ACROSS_COIL: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Interior,
    DirichletCurve,
    DirichletOuter,
}

#[derive(Debug, Clone)]
pub struct GridDomain {
    pub h: f64,
    /// Truncation radius, or the circumradius of the bounding box for test shapes.
    pub radius: f64,
    pub nx: usize,
    pub ny: usize,
    /// Coordinates of node `(0, 0)`.
    pub origin: [f64; 2],
    /// Row-major status of every node.
    pub mask: Vec<NodeStatus>,
    /// Row-major map from node to unknown number.
    pub index: Vec<Option<u32>>,
    /// Grid coordinates `(i, j)` of each unknown, in unknown order.
    pub interior: Vec<(u32, u32)>,
    /// Distance from each node to the curve, for spiral grids.
    pub curve_distance: Option<Vec<f64>>,
}

impl GridDomain {
    /// Grid of `nx × ny` nodes whose interior is decided by `inside(x, y)`.
    /// Nodes on the outer frame are always Dirichlet.
    pub fn from_predicate(
        h: f64,
        origin: [f64; 2],
        nx: usize,
        ny: usize,
        inside: impl Fn(f64, f64) -> bool + Sync,
    ) -> Result<Self> {
        if !(h > 0.0) || nx < 3 || ny < 3 {
            return Err(FdError::InvalidParameter(format!("grid {nx}×{ny} with spacing {h}")));
        }
        let mask: Vec<NodeStatus> = (0..nx * ny)
            .into_par_iter()
            .map(|n| {
                let (i, j) = (n % nx, n / nx);
                let on_frame = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
                let (x, y) = (origin[0] + i as f64 * h, origin[1] + j as f64 * h);
                if !on_frame && inside(x, y) {
                    NodeStatus::Interior
                } else {
                    NodeStatus::DirichletOuter
                }
            })
            .collect();
        let x_extent = (nx - 1) as f64 * h;
        let y_extent = (ny - 1) as f64 * h;
        Self::finish(h, 0.5 * x_extent.hypot(y_extent), nx, ny, origin, mask, None)
    }

    /// Unit square `(0,1)²` with nodes on its boundary.
    pub fn unit_square(h: f64) -> Result<Self> {
        let n = (1.0 / h).round() as usize;
        if n < 2 || ((n as f64) * h - 1.0).abs() > 1e-12 {
            return Err(FdError::InvalidParameter(format!("1/h must be an integer ≥ 2, got h = {h}")));
        }
        let eps = 1e-9 * h;
        Self::from_predicate(h, [0.0, 0.0], n + 1, n + 1, |x, y| {
            x > eps && y > eps && x < 1.0 - eps && y < 1.0 - eps
        })
    }

    /// Disk of radius `radius` centred at the origin; nodes with `|x| < radius` are interior.
    pub fn disk(h: f64, radius: f64) -> Result<Self> {
        let m = (radius / h).ceil() as usize + 1;
        let n = 2 * m + 1;
        let o = -(m as f64) * h;
        Self::from_predicate(h, [o, o], n, n, |x, y| x.hypot(y) < radius)
    }

    fn finish(
        h: f64,
        radius: f64,
        nx: usize,
        ny: usize,
        origin: [f64; 2],
        mask: Vec<NodeStatus>,
        curve_distance: Option<Vec<f64>>,
    ) -> Result<Self> {
        let mut index = vec![None; nx * ny];
        let mut interior = Vec::new();
        for (n, status) in mask.iter().enumerate() {
            if *status == NodeStatus::Interior {
                index[n] = Some(interior.len() as u32);
                interior.push(((n % nx) as u32, (n / nx) as u32));
            }
        }
        if interior.is_empty() {
            return Err(FdError::EmptyGrid);
        }
        Ok(Self { h, radius, nx, ny, origin, mask, index, interior, curve_distance })
    }

    pub fn unknowns(&self) -> usize {
        self.interior.len()
    }

    pub fn node_position(&self, i: usize, j: usize) -> [f64; 2] {
        [self.origin[0] + i as f64 * self.h, self.origin[1] + j as f64 * self.h]
    }

    pub fn status(&self, i: usize, j: usize) -> NodeStatus {
        self.mask[j * self.nx + i]
    }

    pub fn count(&self, status: NodeStatus) -> usize {
        self.mask.iter().filter(|&&s| s == status).count()
    }

    /// Lengths of interior runs along the grid row or column through node
    /// `(i, j)` that are bounded by curve nodes at both ends.
    fn bounded_runs(&self, line: impl Iterator<Item = (usize, usize)>) -> Vec<(usize, (usize, usize))> {
        let mut runs = Vec::new();
        let mut current = 0usize;
        let mut opened_by_curve = false;
        let mut start = (0, 0);
        for (i, j) in line {
            match self.status(i, j) {
                NodeStatus::Interior => {
                    if current == 0 {
                        start = (i, j);
                    }
                    current += 1;
                }
                NodeStatus::DirichletCurve => {
                    if current > 0 && opened_by_curve {
                        runs.push((current, start));
                    }
                    current = 0;
                    opened_by_curve = true;
                }
                NodeStatus::DirichletOuter => {
                    current = 0;
                    opened_by_curve = false;
                }
            }
        }
        runs
    }
}

/// Curve point and its first two θ-derivatives.
fn curve_jet(spec: &SpiralSpec, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let j = spec.radial_jet(t);
    let (s, c) = t.sin_cos();
    let p = [j.r * c, j.r * s];
    let d1 = [j.dr * c - j.r * s, j.dr * s + j.r * c];
    let d2 = [
        j.ddr * c - 2.0 * j.dr * s - j.r * c,
        j.ddr * s + 2.0 * j.dr * c - j.r * s,
    ];
    (p, d1, d2)
}

/// Local minimizer of `|p - c(t)|` started from `t0`, kept within a quarter
/// turn of the start and at non-negative parameter.
fn project(spec: &SpiralSpec, p: [f64; 2], t0: f64) -> f64 {
    let lo = (t0 - 0.5 * PI).max(0.0);
    let hi = t0 + 0.5 * PI;
    let mut t = t0.max(0.0);
    let dist2 = |t: f64| {
        let (c, _, _) = curve_jet(spec, t);
        (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2)
    };
    for _ in 0..30 {
        let (c, d1, d2) = curve_jet(spec, t);
        let e = [c[0] - p[0], c[1] - p[1]];
        let g = e[0] * d1[0] + e[1] * d1[1];
        let speed2 = d1[0] * d1[0] + d1[1] * d1[1];
        let curv = speed2 + e[0] * d2[0] + e[1] * d2[1];
        let denom = if curv > 0.25 * speed2 { curv } else { speed2 };
        let mut next = (t - g / denom).clamp(lo, hi);
        // Halve the step until the distance does not increase.
        let f0 = dist2(t);
        let mut tries = 0;
        while dist2(next) > f0 && tries < 40 {
            next = 0.5 * (t + next);
            tries += 1;
        }
        let step = next - t;
        t = next;
        if step.abs() <= 1e-14 * (1.0 + t) {
            break;
        }
    }
    t
}

/// Euclidean distance from `p` to the spiral curve.
///
/// The nearest point lies on one of the two coils bracketing `p` radially,
/// so two local projections suffice together with the curve's start point.
pub fn distance_to_curve(spec: &SpiralSpec, p: [f64; 2]) -> f64 {
    let rho = p[0].hypot(p[1]);
    let phi = p[1].atan2(p[0]).rem_euclid(TAU);
    let start = spec.radius(0.0);
    let mut best = (p[0] - start).hypot(p[1]);

    // Largest coil index n with r(φ + 2πn) ≤ ρ, if any.
    let mut n = ((rho / spec.a0 - phi) / TAU).floor().max(0.0) as i64;
    while n > 0 && spec.radius(phi + TAU * n as f64) > rho {
        n -= 1;
    }
    while spec.radius(phi + TAU * (n + 1) as f64) <= rho {
        n += 1;
    }
    let candidates = [n - 1, n, n + 1];
    for m in candidates {
        if m < 0 {
            continue;
        }
        let t0 = phi + TAU * m as f64;
        let t = project(spec, p, t0);
        let (c, _, _) = curve_jet(spec, t);
        best = best.min((c[0] - p[0]).hypot(c[1] - p[1]));
    }
    // The innermost arc: the projection from φ may need to run towards t = 0.
    if phi < 0.5 * PI || rho < spec.radius(phi) {
        let t = project(spec, p, phi.min(0.5 * PI));
        let (c, _, _) = curve_jet(spec, t);
        best = best.min((c[0] - p[0]).hypot(c[1] - p[1]));
    }
    best
}

/// Node classification for the spiral domain truncated to the disk of radius `radius`.
///
/// Nodes within `h/2` of the curve or at distance `≥ radius` from the origin are Dirichlet.
pub fn build_grid(spec: &SpiralSpec, h: f64, radius: f64) -> Result<GridDomain> {
    spec.validate()?;
    let limit = spec.a0 / 8.0;
    if !(h > 0.0) || h > limit * (1.0 + 1e-12) {
        return Err(FdError::SpacingTooCoarse { h, limit });
    }
    let needed = spec.radius(4.0 * TAU);
    if !(radius >= needed) {
        return Err(FdError::RadiusTooSmall { radius, needed });
    }
    let m = (radius / h).ceil() as usize + 1;
    let n = 2 * m + 1;
    let o = -(m as f64) * h;
    let origin = [o, o];

    let classified: Vec<(NodeStatus, f64)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % n, k / n);
            let p = [o + i as f64 * h, o + j as f64 * h];
            let dist = distance_to_curve(spec, p);
            let status = if p[0].hypot(p[1]) >= radius {
                NodeStatus::DirichletOuter
            } else if dist <= 0.5 * h {
                NodeStatus::DirichletCurve
            } else {
                NodeStatus::Interior
            };
            (status, dist)
        })
        .collect();
    let (mask, dist): (Vec<_>, Vec<_>) = classified.into_iter().unzip();
    let grid = GridDomain::finish(h, radius, n, n, origin, mask, Some(dist))?;

    let row = grid.bounded_runs((0..n).map(|i| (i, m)));
    let col = grid.bounded_runs((0..n).map(|j| (m, j)));
    if let Some(&(nodes, (i, j))) = row.iter().chain(&col).min_by_key(|r| r.0) {
        if nodes < MIN_NODES_ACROSS_COIL {
            let [x, y] = grid.node_position(i, j);
            return Err(FdError::CoilUnresolved { nodes, x, y });
        }
    }
    log::info!(
        "spiral grid: {n}×{n} nodes, {} unknowns, h = {h}, R = {radius}",
        grid.unknowns()
    );
    Ok(grid)
}
