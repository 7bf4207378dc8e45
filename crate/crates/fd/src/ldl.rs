//! Sparse `LDLᵀ` factorization of shifted Laplacians, with inertia.
//!
//! Up-looking row factorization driven by the elimination tree, on a nested
//! dissection ordering. No pivoting is done; the number of negative pivots
//! counts the eigenvalues below the shift (Sylvester's law of inertia).

use crate::error::{FdError, Result};
use crate::laplacian::{Laplacian, NO_NEIGHBOR};
use crate::ordering::{invert, nested_dissection};

const NONE: usize = usize::MAX;

/// Pattern analysis shared by all shifts of one operator.
#[derive(Debug, Clone)]
pub struct SymbolicLdl {
    n: usize,
    perm: Vec<usize>,
    iperm: Vec<usize>,
    /// Strictly upper part of the permuted matrix in compressed columns.
    ap: Vec<usize>,
    ai: Vec<u32>,
    parent: Vec<usize>,
    lp: Vec<usize>,
    inv_h2: f64,
}

impl SymbolicLdl {
    pub fn analyze(op: &Laplacian) -> Self {
        let n = op.dim();
        let perm = nested_dissection(&op.coords);
        let iperm = invert(&perm);

        let mut ap = Vec::with_capacity(n + 1);
        let mut ai = Vec::with_capacity(2 * n);
        ap.push(0);
        for k in 0..n {
            let old = perm[k];
            let mut rows: Vec<u32> = op.neighbors[old]
                .iter()
                .filter(|&&nb| nb != NO_NEIGHBOR)
                .map(|&nb| iperm[nb as usize] as u32)
                .filter(|&r| (r as usize) < k)
                .collect();
            rows.sort_unstable();
            ai.extend(rows);
            ap.push(ai.len());
        }

        let mut parent = vec![NONE; n];
        let mut flag = vec![NONE; n];
        let mut lnz = vec![0usize; n];
        for k in 0..n {
            flag[k] = k;
            for &i in &ai[ap[k]..ap[k + 1]] {
                let mut i = i as usize;
                while flag[i] != k {
                    if parent[i] == NONE {
                        parent[i] = k;
                    }
                    lnz[i] += 1;
                    flag[i] = k;
                    i = parent[i];
                }
            }
        }
        let mut lp = Vec::with_capacity(n + 1);
        lp.push(0);
        for k in 0..n {
            lp.push(lp[k] + lnz[k]);
        }
        log::debug!("ldl symbolic: n = {n}, nnz(L) = {}", lp[n]);
        Self { n, perm, iperm, ap, ai, parent, lp, inv_h2: op.inv_h2() }
    }

    pub fn nnz(&self) -> usize {
        self.lp[self.n]
    }

    /// Numeric factorization of `A - shift·I`.
    pub fn factor(&self, shift: f64) -> Result<LdlFactor<'_>> {
        let n = self.n;
        let nnz = self.nnz();
        let mut li = vec![0u32; nnz];
        let mut lx = vec![0.0f64; nnz];
        let mut d = vec![0.0f64; n];
        let mut y = vec![0.0f64; n];
        let mut pattern = vec![0usize; n];
        let mut flag = vec![NONE; n];
        let mut lnz = vec![0usize; n];
        let off = -self.inv_h2;
        let diag = 4.0 * self.inv_h2 - shift;

        for k in 0..n {
            y[k] = 0.0;
            let mut top = n;
            flag[k] = k;
            for &i in &self.ai[self.ap[k]..self.ap[k + 1]] {
                let mut i = i as usize;
                y[i] += off;
                let mut len = 0;
                while flag[i] != k {
                    pattern[len] = i;
                    len += 1;
                    flag[i] = k;
                    i = self.parent[i];
                }
                while len > 0 {
                    top -= 1;
                    len -= 1;
                    pattern[top] = pattern[len];
                }
            }
            d[k] = diag + y[k];
            y[k] = 0.0;
            for &i in &pattern[top..n] {
                let yi = y[i];
                y[i] = 0.0;
                let start = self.lp[i];
                let end = start + lnz[i];
                for p in start..end {
                    y[li[p] as usize] -= lx[p] * yi;
                }
                let l_ki = yi / d[i];
                d[k] -= l_ki * yi;
                li[end] = k as u32;
                lx[end] = l_ki;
                lnz[i] += 1;
            }
            if d[k] == 0.0 || !d[k].is_finite() {
                return Err(FdError::ZeroPivot { row: k, shift });
            }
        }
        Ok(LdlFactor { symbolic: self, li, lx, d, shift })
    }
}

/// Numeric factors `P (A - σI) Pᵀ = L D Lᵀ`.
#[derive(Debug)]
pub struct LdlFactor<'a> {
    symbolic: &'a SymbolicLdl,
    li: Vec<u32>,
    lx: Vec<f64>,
    d: Vec<f64>,
    pub shift: f64,
}

impl LdlFactor<'_> {
    /// Number of eigenvalues of `A` strictly below the shift.
    pub fn negative_pivots(&self) -> usize {
        self.d.iter().filter(|&&v| v < 0.0).count()
    }

    /// Solves `(A - σI) x = b`.
    pub fn solve(&self, b: &[f64], x: &mut [f64]) {
        let s = self.symbolic;
        let mut w: Vec<f64> = s.perm.iter().map(|&old| b[old]).collect();
        for j in 0..s.n {
            let wj = w[j];
            if wj != 0.0 {
                for p in s.lp[j]..s.lp[j + 1] {
                    w[self.li[p] as usize] -= self.lx[p] * wj;
                }
            }
        }
        for (wj, dj) in w.iter_mut().zip(&self.d) {
            *wj /= dj;
        }
        for j in (0..s.n).rev() {
            let mut acc = w[j];
            for p in s.lp[j]..s.lp[j + 1] {
                acc -= self.lx[p] * w[self.li[p] as usize];
            }
            w[j] = acc;
        }
        for (old, xo) in x.iter_mut().enumerate() {
            *xo = w[s.iperm[old]];
        }
    }
}
