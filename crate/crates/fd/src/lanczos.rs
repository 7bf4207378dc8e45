//! Thick-restart Lanczos for the largest eigenvalues of a symmetric operator.
//!
//! Used on `(A - σI)⁻¹`, where the largest eigenvalues belong to the
//! eigenvalues of `A` closest to and above `σ`. Every new basis vector is
//! orthogonalized twice against the whole basis (classical Gram-Schmidt).

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FdError, Result};
use crate::laplacian::{axpy, dot, norm, scale};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Number of wanted eigenpairs.
    pub nev: usize,
    /// Basis size before a restart.
    pub ncv: usize,
    pub max_restarts: usize,
    /// Ritz pairs with estimated residual `≤ screen_tol · |θ|` are tested by the caller.
    pub screen_tol: f64,
    pub seed: u64,
}

impl LanczosOptions {
    pub fn new(nev: usize, seed: u64) -> Self {
        Self { nev, ncv: (2 * nev + 16).max(32), max_restarts: 300, screen_tol: 1e-10, seed }
    }
}

#[derive(Debug, Clone)]
pub struct RitzPairs {
    /// Largest first.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub restarts: usize,
    pub operator_applications: usize,
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nv = norm(&v);
    scale(1.0 / nv, &mut v);
    v
}

/// Removes the components of `w` along `basis`, twice, and returns the coefficients.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        let c: Vec<f64> = basis.iter().map(|v| dot(v, w)).collect();
        for (v, ci) in basis.iter().zip(&c) {
            axpy(-ci, v, w);
        }
        for (acc, ci) in coeffs.iter_mut().zip(&c) {
            *acc += ci;
        }
    }
    coeffs
}

fn combine(basis: &[Vec<f64>], q: &DMatrix<f64>, col: usize) -> Vec<f64> {
    let mut x = vec![0.0; basis[0].len()];
    for (k, v) in basis.iter().enumerate() {
        axpy(q[(k, col)], v, &mut x);
    }
    x
}

/// Largest `nev` eigenpairs of the symmetric operator `op` on `ℝⁿ`.
///
/// `accept(θ, x)` performs the caller's residual test on a normalized Ritz
/// vector; a pair counts as converged only when it returns `true`.
pub fn largest_eigenpairs(
    n: usize,
    mut op: impl FnMut(&[f64], &mut [f64]),
    mut accept: impl FnMut(f64, &[f64]) -> bool,
    opts: LanczosOptions,
) -> Result<RitzPairs> {
    if opts.nev == 0 || opts.nev > n {
        return Err(FdError::InvalidParameter(format!("cannot compute {} eigenpairs in dimension {n}", opts.nev)));
    }
    let ncv = opts.ncv.max(opts.nev + 2).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut basis = vec![random_unit(n, &mut rng)];
    let mut h = DMatrix::<f64>::zeros(ncv, ncv);
    let mut kept = 0usize;
    let mut applications = 0usize;
    let mut best = vec![f64::INFINITY; opts.nev];
    let mut w = vec![0.0; n];

    for restart in 0..=opts.max_restarts {
        let mut beta = 0.0;
        for j in kept..ncv {
            op(&basis[j], &mut w);
            applications += 1;
            let c = orthogonalize(&basis, &mut w);
            h[(j, j)] = c[j];
            beta = norm(&w);
            if j + 1 == ncv {
                break;
            }
            if beta <= 1e-13 * c[j].abs().max(1.0) {
                // Invariant subspace: continue with a fresh direction.
                let mut v = random_unit(n, &mut rng);
                orthogonalize(&basis, &mut v);
                let nv = norm(&v);
                scale(1.0 / nv, &mut v);
                basis.push(v);
                h[(j, j + 1)] = 0.0;
                h[(j + 1, j)] = 0.0;
            } else {
                let mut v = w.clone();
                scale(1.0 / beta, &mut v);
                basis.push(v);
                h[(j, j + 1)] = beta;
                h[(j + 1, j)] = beta;
            }
        }
        let mut residual = w.clone();
        if beta > 0.0 {
            scale(1.0 / beta, &mut residual);
        }

        let eig = SymmetricEigen::new(h.clone());
        let mut order: Vec<usize> = (0..ncv).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let q = &eig.eigenvectors;
        let estimate = |col: usize| (beta * q[(ncv - 1, col)]).abs();

        let mut all_converged = true;
        let mut vectors = Vec::with_capacity(opts.nev);
        for (rank, &col) in order.iter().take(opts.nev).enumerate() {
            let theta = eig.eigenvalues[col];
            let est = estimate(col);
            best[rank] = best[rank].min(est / theta.abs().max(f64::MIN_POSITIVE));
            if est > opts.screen_tol * theta.abs() {
                all_converged = false;
                break;
            }
            let mut x = combine(&basis, q, col);
            let nx = norm(&x);
            scale(1.0 / nx, &mut x);
            if !accept(theta, &x) {
                all_converged = false;
                break;
            }
            vectors.push(x);
        }
        if all_converged {
            log::debug!("lanczos converged after {restart} restarts, {applications} applications");
            return Ok(RitzPairs {
                values: order.iter().take(opts.nev).map(|&c| eig.eigenvalues[c]).collect(),
                vectors,
                restarts: restart,
                operator_applications: applications,
            });
        }

        // Thick restart on the leading Ritz vectors plus the residual direction.
        let keep = (opts.nev + (ncv - opts.nev) / 2).min(ncv - 1);
        let mut new_basis: Vec<Vec<f64>> = order.iter().take(keep).map(|&col| combine(&basis, q, col)).collect();
        new_basis.push(residual);
        h.fill(0.0);
        for (k, &col) in order.iter().take(keep).enumerate() {
            h[(k, k)] = eig.eigenvalues[col];
            let b = beta * q[(ncv - 1, col)];
            h[(k, keep)] = b;
            h[(keep, k)] = b;
        }
        basis = new_basis;
        kept = keep;
    }
    Err(FdError::NoConvergence { restarts: opts.max_restarts, residuals: best })
}
