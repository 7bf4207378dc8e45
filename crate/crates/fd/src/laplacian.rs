//! Matrix-free five-point Dirichlet Laplacian on the interior nodes of a grid.

use rayon::prelude::*;

use crate::grid::GridDomain;

/// Marker for a neighbour that is a Dirichlet node.
pub const NO_NEIGHBOR: u32 = u32::MAX;

/// Rows per parallel task. Fixed so that reductions do not depend on the thread count.
const CHUNK: usize = 4096;

#[derive(Debug, Clone)]
pub struct Laplacian {
    pub h: f64,
    /// Interior neighbours of each unknown in the order west, east, south, north.
    pub neighbors: Vec<[u32; 4]>,
    /// Grid coordinates of each unknown.
    pub coords: Vec<(u32, u32)>,
}

impl Laplacian {
    pub fn dim(&self) -> usize {
        self.neighbors.len()
    }

    pub fn inv_h2(&self) -> f64 {
        1.0 / (self.h * self.h)
    }

    /// `y = A x` with `(A u)_ij = (4 u_ij - Σ u_neighbours) / h²`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let c = self.inv_h2();
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(b, out)| {
            let base = b * CHUNK;
            for (k, yk) in out.iter_mut().enumerate() {
                let row = base + k;
                let mut acc = 4.0 * x[row];
                for &nb in &self.neighbors[row] {
                    if nb != NO_NEIGHBOR {
                        acc -= x[nb as usize];
                    }
                }
                *yk = c * acc;
            }
        });
    }

    /// Largest Gershgorin bound `max_i Σ_j |a_ij|`.
    pub fn gershgorin_bound(&self) -> f64 {
        let worst = self
            .neighbors
            .iter()
            .map(|nb| 4 + nb.iter().filter(|&&n| n != NO_NEIGHBOR).count())
            .max()
            .unwrap_or(0);
        worst as f64 * self.inv_h2()
    }
}

/// Stencil connectivity of the interior nodes of `grid`.
pub fn assemble_laplacian(grid: &GridDomain) -> Laplacian {
    let nx = grid.nx;
    let lookup = |i: i64, j: i64| -> u32 {
        if i < 0 || j < 0 || i as usize >= nx || j as usize >= grid.ny {
            return NO_NEIGHBOR;
        }
        grid.index[j as usize * nx + i as usize].unwrap_or(NO_NEIGHBOR)
    };
    let neighbors = grid
        .interior
        .par_iter()
        .map(|&(i, j)| {
            let (i, j) = (i as i64, j as i64);
            [lookup(i - 1, j), lookup(i + 1, j), lookup(i, j - 1), lookup(i, j + 1)]
        })
        .collect();
    Laplacian { h: grid.h, neighbors, coords: grid.interior.clone() }
}

/// Deterministic dot product: fixed chunk partials summed in order.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partials.iter().sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_chunks_mut(CHUNK).zip(x.par_chunks(CHUNK)).for_each(|(ys, xs)| {
        for (yi, xi) in ys.iter_mut().zip(xs) {
            *yi += alpha * xi;
        }
    });
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    x.par_chunks_mut(CHUNK).for_each(|xs| xs.iter_mut().for_each(|v| *v *= alpha));
}
