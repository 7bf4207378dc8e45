//! Lowest Dirichlet eigenvalues by shift-invert Lanczos, and eigenvalue moments.

use serde::{Deserialize, Serialize};

use crate::error::{FdError, Result};
use crate::lanczos::{largest_eigenpairs, LanczosOptions};
use crate::laplacian::{axpy, norm, Laplacian};
use crate::ldl::{LdlFactor, SymbolicLdl};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Accepted residual `‖Av - λv‖` for unit `v`.
    pub tol: f64,
    pub seed: u64,
    pub max_restarts: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, seed: 0x5eed, max_restarts: 300 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub sigma: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub k_requested: usize,
    /// `‖Av - λv‖` for each unit eigenvector.
    pub residuals: Vec<f64>,
    pub h: f64,
    pub radius: Option<f64>,
    pub unknowns: usize,
    /// Shift used by the shift-invert iteration.
    pub shift: f64,
    pub threshold: Option<f64>,
    /// Eigenvalues strictly below the threshold, counted by inertia.
    pub count_below_threshold: Option<usize>,
    pub moments: Vec<Moment>,
}

#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub result: SpectrumResult,
    /// Unit eigenvectors in unknown order, matching `result.eigenvalues`.
    pub vectors: Vec<Vec<f64>>,
}

/// Factorization-backed solver for one operator.
pub struct Oracle<'a> {
    op: &'a Laplacian,
    symbolic: SymbolicLdl,
}

impl<'a> Oracle<'a> {
    pub fn new(op: &'a Laplacian) -> Self {
        Self { op, symbolic: SymbolicLdl::analyze(op) }
    }

    /// Factors `A - shift·I`, nudging the shift away from an exact zero pivot.
    fn factor_near(&self, shift: f64) -> Result<LdlFactor<'_>> {
        let mut s = shift;
        for _ in 0..8 {
            match self.symbolic.factor(s) {
                Err(FdError::ZeroPivot { .. }) => s += 1e-10 * shift.abs().max(1.0),
                other => return other,
            }
        }
        self.symbolic.factor(s)
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> Result<usize> {
        Ok(self.factor_near(lambda)?.negative_pivots())
    }

    /// Upper estimate of the lowest eigenvalue from a short Krylov run on `A⁻¹`.
    fn lowest_upper_estimate(&self, base: &LdlFactor<'_>, seed: u64) -> f64 {
        let n = self.op.dim();
        let steps = 24.min(n);
        let opts = LanczosOptions { nev: 1, ncv: steps.max(3).min(n), max_restarts: 0, screen_tol: f64::INFINITY, seed };
        let mut best = 0.0f64;
        let _ = largest_eigenpairs(
            n,
            |x, y| base.solve(x, y),
            |theta, _| {
                best = best.max(theta);
                false
            },
            opts,
        );
        if best > 0.0 {
            1.0 / best
        } else {
            self.op.gershgorin_bound()
        }
    }

    /// Shift strictly below the lowest eigenvalue and reasonably close to it.
    fn shift_below_spectrum(&self, seed: u64) -> Result<LdlFactor<'_>> {
        let base = self.factor_near(0.0)?;
        let upper = self.lowest_upper_estimate(&base, seed);
        let mut gap = 0.02;
        while gap < 1.0 {
            let f = self.factor_near(upper * (1.0 - gap))?;
            if f.negative_pivots() == 0 {
                return Ok(f);
            }
            gap *= 2.0;
        }
        Ok(base)
    }

    /// Lowest `k` eigenpairs.
    pub fn lowest(&self, k: usize, opts: &SolverOptions) -> Result<EigenSolution> {
        let n = self.op.dim();
        if k == 0 || k > n {
            return Err(FdError::InvalidParameter(format!("k = {k} outside 1..={n}")));
        }
        let factor = self.shift_below_spectrum(opts.seed)?;
        let shift = factor.shift;
        let mut scratch = vec![0.0; n];
        let op = self.op;
        let residual = |lambda: f64, x: &[f64], buf: &mut [f64]| {
            op.apply(x, buf);
            axpy(-lambda, x, buf);
            norm(buf)
        };
        let mut lanczos = LanczosOptions::new(k, opts.seed);
        lanczos.max_restarts = opts.max_restarts;
        let pairs = largest_eigenpairs(
            n,
            |x, y| factor.solve(x, y),
            |theta, x| residual(shift + 1.0 / theta, x, &mut scratch) <= opts.tol,
            lanczos,
        )?;

        let mut entries: Vec<(f64, Vec<f64>)> = pairs
            .values
            .iter()
            .zip(pairs.vectors)
            .map(|(&theta, v)| (shift + 1.0 / theta, v))
            .collect();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let residuals: Vec<f64> = entries.iter().map(|(l, v)| residual(*l, v, &mut scratch)).collect();
        log::info!(
            "lowest {k} eigenvalues from shift {shift:.6}: {:?} ({} restarts)",
            entries.iter().map(|e| e.0).collect::<Vec<_>>(),
            pairs.restarts
        );
        let result = SpectrumResult {
            eigenvalues: entries.iter().map(|e| e.0).collect(),
            k_requested: k,
            residuals,
            h: op.h,
            radius: None,
            unknowns: n,
            shift,
            threshold: None,
            count_below_threshold: None,
            moments: Vec::new(),
        };
        Ok(EigenSolution { result, vectors: entries.into_iter().map(|e| e.1).collect() })
    }

    /// All eigenvalues below `lambda` plus the next one, with moments for each σ.
    ///
    /// The inertia of `A - Λ` fixes how many eigenvalues must be found.
    pub fn below_threshold(
        &self,
        lambda: f64,
        k_min: usize,
        sigmas: &[f64],
        opts: &SolverOptions,
    ) -> Result<EigenSolution> {
        let count = self.count_below(lambda)?;
        let k = k_min.max(count + 1).min(self.op.dim());
        let mut sol = self.lowest(k, opts)?;
        sol.result.threshold = Some(lambda);
        sol.result.count_below_threshold = Some(count);
        let moments = sigmas
            .iter()
            .map(|&sigma| moment_sum(&sol.result, sigma, lambda).map(|value| Moment { sigma, value }))
            .collect::<Result<Vec<_>>>()?;
        sol.result.moments = moments;
        Ok(sol)
    }
}

/// Lowest `k` eigenvalues of `op`.
pub fn lowest_eigenvalues(op: &Laplacian, k: usize, opts: &SolverOptions) -> Result<SpectrumResult> {
    Ok(Oracle::new(op).lowest(k, opts)?.result)
}

/// `Σ_k (Λ - λ_k)₊^σ` over the computed eigenvalues.
///
/// The largest computed eigenvalue must reach `Λ`, otherwise eigenvalues
/// below the threshold may be missing.
pub fn moment_sum(result: &SpectrumResult, sigma: f64, lambda: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !lambda.is_finite() {
        return Err(FdError::InvalidParameter(format!("moment with σ = {sigma}, Λ = {lambda}")));
    }
    let largest = result.eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
    if largest < lambda {
        return Err(FdError::WindowNotExhausted {
            computed: result.eigenvalues.len(),
            threshold: lambda,
            largest,
        });
    }
    let below: Vec<f64> = result.eigenvalues.iter().copied().filter(|&l| l < lambda).collect();
    if let (Some(t), Some(expected)) = (result.threshold, result.count_below_threshold) {
        if t == lambda && expected != below.len() {
            return Err(FdError::MissedEigenvalues { expected, found: below.len(), threshold: lambda });
        }
    }
    Ok(below.iter().fold(0.0, |acc, &l| acc + (lambda - l).powf(sigma)))
}
