//! ℓ1 solvers: penalised LASSO by proximal gradient and basis pursuit by
//! penalty continuation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LinearOperator, SolverKind, SparseSolution};
use crate::error::{Error, Result};
use crate::linalg::norm2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LassoParams {
    /// Penalty as a fraction of `‖Dᴴy‖∞`.
    pub reg_param: f64,
    pub max_iters: usize,
    /// Relative objective change that stops the iteration.
    pub tol: f64,
}

impl Default for LassoParams {
    fn default() -> Self {
        LassoParams {
            reg_param: 0.6,
            max_iters: 100,
            tol: 1e-4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BpParams {
    /// Residual budget `‖y − Dz‖ ≤ ε`.
    pub epsilon: f64,
    /// Total proximal-gradient iterations across all continuation stages.
    pub max_iters: usize,
    /// Constraint slack relative to `‖y‖`, and inner-loop stopping tolerance.
    pub tol: f64,
}

impl Default for BpParams {
    fn default() -> Self {
        BpParams {
            epsilon: 0.0,
            max_iters: 2000,
            tol: 1e-4,
        }
    }
}

/// Complex soft threshold: shrinks the modulus, keeps the phase.
fn soft(z: Complex64, t: f64) -> Complex64 {
    let a = z.norm();
    if a <= t {
        Complex64::new(0.0, 0.0)
    } else {
        z * ((a - t) / a)
    }
}

fn lipschitz(d: &dyn LinearOperator) -> f64 {
    // Slight inflation keeps the step strictly inside the stable range.
    1.01 * d.norm_sq()
}

fn residual(d: &dyn LinearOperator, y: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
    let dz = d.apply(z);
    y.iter().zip(dz).map(|(a, b)| a - b).collect()
}

fn objective(r: &[Complex64], z: &[Complex64], lam: f64) -> f64 {
    0.5 * r.iter().map(|v| v.norm_sqr()).sum::<f64>() + lam * z.iter().map(|v| v.norm()).sum::<f64>()
}

fn check(d: &dyn LinearOperator, y: &[Complex64]) -> Result<()> {
    if y.len() != d.rows() {
        return Err(Error::DimensionMismatch(format!(
            "measurement length {} vs operator rows {}",
            y.len(),
            d.rows()
        )));
    }
    Ok(())
}

/// `min ½‖y − Dz‖² + λ‖z‖₁` with `λ = reg_param·‖Dᴴy‖∞`, by ISTA with step `1/L`.
/// The step guarantees a non-increasing objective; `history` records it.
pub fn lasso(y: &[Complex64], d: &dyn LinearOperator, params: &LassoParams) -> Result<SparseSolution> {
    check(d, y)?;
    if !(params.reg_param > 0.0) {
        return Err(Error::invalid("reg_param", "must be > 0"));
    }
    let n = d.cols();
    let aty = d.adjoint(y);
    let lam = params.reg_param * aty.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut r = y.to_vec();
    let mut f = objective(&r, &z, lam);
    let mut history = vec![f];
    if lam == 0.0 {
        return Ok(SparseSolution::empty(SolverKind::Lasso, norm2(y)));
    }
    let l = lipschitz(d);
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..params.max_iters {
        iterations += 1;
        let g = d.adjoint(&r);
        for (zi, gi) in z.iter_mut().zip(&g) {
            *zi = soft(*zi + gi / l, lam / l);
        }
        r = residual(d, y, &z);
        let f_new = objective(&r, &z, lam);
        history.push(f_new);
        let rel = (f - f_new).abs() / f.max(f64::MIN_POSITIVE);
        f = f_new;
        if rel < params.tol {
            converged = true;
            break;
        }
    }
    let mut sol = SparseSolution::from_dense(&z, SolverKind::Lasso);
    sol.residual_norm = norm2(&r);
    sol.history = history;
    sol.iterations = iterations;
    sol.converged = converged;
    Ok(sol)
}

/// `min ‖z‖₁ s.t. ‖y − Dz‖ ≤ ε`, approached through a decreasing sequence of
/// penalised problems solved by FISTA with warm starts. Stops once the residual
/// is within `ε + tol·‖y‖`. On budget exhaustion the last iterate is returned
/// with `converged = false`.
pub fn basis_pursuit(y: &[Complex64], d: &dyn LinearOperator, params: &BpParams) -> Result<SparseSolution> {
    check(d, y)?;
    if !(params.epsilon >= 0.0) {
        return Err(Error::invalid("epsilon", "must be >= 0"));
    }
    let n = d.cols();
    let y_norm = norm2(y);
    let target = params.epsilon + params.tol * y_norm;
    if y_norm <= target {
        return Ok(SparseSolution::empty(SolverKind::BasisPursuit, y_norm));
    }
    let l = lipschitz(d);
    let aty = d.adjoint(y);
    let mut lam = 0.5 * aty.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut r = y.to_vec();
    let mut history = Vec::new();
    let mut used = 0;
    let mut converged = false;
    while used < params.max_iters {
        // FISTA on the current penalty, warm-started.
        let mut x_prev = z.clone();
        let mut r_prev = r.clone();
        let mut v = z.clone();
        let mut rv = r.clone();
        let mut t = 1.0f64;
        let mut f_prev = f64::INFINITY;
        while used < params.max_iters {
            used += 1;
            let g = d.adjoint(&rv);
            let x: Vec<Complex64> = v.iter().zip(&g).map(|(vi, gi)| soft(vi + gi / l, lam / l)).collect();
            let rx = residual(d, y, &x);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            let w = (t - 1.0) / t_next;
            // The residual is affine in the iterate, so the extrapolated one is free.
            v = x.iter().zip(&x_prev).map(|(a, b)| a + (a - b) * w).collect();
            rv = rx.iter().zip(&r_prev).map(|(a, b)| a + (a - b) * w).collect();
            let f = objective(&rx, &x, lam);
            x_prev = x;
            r_prev = rx;
            t = t_next;
            history.push(f);
            if (f_prev - f).abs() <= params.tol * f.max(f64::MIN_POSITIVE) {
                break;
            }
            f_prev = f;
        }
        z = x_prev;
        r = r_prev;
        if norm2(&r) <= target {
            converged = true;
            break;
        }
        lam *= 0.3;
    }
    let mut sol = SparseSolution::from_dense(&z, SolverKind::BasisPursuit);
    sol.residual_norm = norm2(&r);
    sol.history = history;
    sol.iterations = used;
    sol.converged = converged;
    Ok(sol)
}
