//! Conjugate gradients for the screened-Poisson systems of the Newton steps.
//!
//! Every linear solve in this crate has the form `(−Δ_h + c(z)) x = b` with
//! `c ≥ 0` on a masked subset of grid nodes (Dirichlet elsewhere), which is
//! symmetric positive definite; Jacobi-preconditioned CG with fixed
//! sequential reduction order keeps runs bitwise reproducible.

use alloc::vec;
use alloc::vec::Vec;


use crate::grid::Grid;

#[derive(Clone, Copy, Debug)]
pub struct CgResult {
    pub iterations: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

/// Apply `y = (−Δ_h + c) x` on the unknown set; `x` is read as zero at
/// non-unknown nodes (boundary data is folded into the right-hand side by
/// the caller).
fn apply(grid: &Grid, unknown: &[bool], c: &[f64], x: &[f64], y: &mut [f64]) {
    let n = grid.n;
    let h2inv = 1.0 / (grid.h * grid.h);
    for idx in 0..grid.len() {
        if !unknown[idx] {
            y[idx] = 0.0;
            continue;
        }
        let take = |j: usize| if unknown[j] { x[j] } else { 0.0 };
        let nbr = take(idx - 1) + take(idx + 1) + take(idx - n) + take(idx + n);
        y[idx] = (4.0 * x[idx] - nbr) * h2inv + c[idx] * x[idx];
    }
}

fn dot(unknown: &[bool], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        if unknown[i] {
            s += a[i] * b[i];
        }
    }
    s
}

/// Solve `(−Δ_h + c) x = b` to relative residual `tol_rel`; `x` holds the
/// initial guess on entry and the solution on exit.
pub fn solve_pcg(
    grid: &Grid,
    unknown: &[bool],
    c: &[f64],
    b: &[f64],
    x: &mut [f64],
    tol_rel: f64,
    max_iter: usize,
) -> CgResult {
    let len = grid.len();
    let h2inv = 1.0 / (grid.h * grid.h);
    let mut r = vec![0.0; len];
    let mut z = vec![0.0; len];
    let mut p = vec![0.0; len];
    let mut ap = vec![0.0; len];

    let minv: Vec<f64> =
        (0..len).map(|i| if unknown[i] { 1.0 / (4.0 * h2inv + c[i]) } else { 0.0 }).collect();

    apply(grid, unknown, c, x, &mut ap);
    for i in 0..len {
        r[i] = if unknown[i] { b[i] - ap[i] } else { 0.0 };
    }
    let bnorm = dot(unknown, b, b).sqrt().max(1e-300);
    let mut rz = {
        for i in 0..len {
            z[i] = minv[i] * r[i];
        }
        p.copy_from_slice(&z);
        dot(unknown, &r, &z)
    };

    let mut rel = dot(unknown, &r, &r).sqrt() / bnorm;
    if rel <= tol_rel {
        return CgResult { iterations: 0, rel_residual: rel, converged: true };
    }

    for it in 1..=max_iter {
        apply(grid, unknown, c, &p, &mut ap);
        let pap = dot(unknown, &p, &ap);
        if pap <= 0.0 {
            return CgResult { iterations: it, rel_residual: rel, converged: false };
        }
        let alpha = rz / pap;
        for i in 0..len {
            if unknown[i] {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
        }
        rel = dot(unknown, &r, &r).sqrt() / bnorm;
        if rel <= tol_rel {
            return CgResult { iterations: it, rel_residual: rel, converged: true };
        }
        for i in 0..len {
            z[i] = minv[i] * r[i];
        }
        let rz_new = dot(unknown, &r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..len {
            if unknown[i] {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
    CgResult { iterations: max_iter, rel_residual: rel, converged: false }
}
