//! Orthogonal matching pursuit, on an explicit dictionary and on the
//! Kronecker-factored 2D model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SolverKind, SparseSolution};
use crate::error::{Error, Result};
use crate::linalg::{norm2, CMatrix, IncrementalQr};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmpParams {
    pub k_max: usize,
    /// Stop once `‖r‖ ≤ residual_tol · ‖y‖`.
    pub residual_tol: f64,
}

impl Default for OmpParams {
    fn default() -> Self {
        OmpParams {
            k_max: 20,
            residual_tol: 1e-6,
        }
    }
}

/// Shared greedy loop. `correlate` fills normalised correlation magnitudes of the
/// residual against every atom; `atom` materialises a column.
fn greedy(
    y: &[Complex64],
    n_atoms: usize,
    params: &OmpParams,
    solver: SolverKind,
    mut correlate: impl FnMut(&[Complex64], &mut [f64]),
    atom: impl Fn(usize) -> Vec<Complex64>,
) -> Result<SparseSolution> {
    if params.k_max < 1 {
        return Err(Error::invalid("k_max", "must be >= 1"));
    }
    let y_norm = norm2(y);
    if y_norm == 0.0 || n_atoms == 0 {
        return Ok(SparseSolution::empty(solver, y_norm));
    }
    let mut qr = IncrementalQr::new();
    let mut atoms: Vec<usize> = Vec::new();
    let mut r = y.to_vec();
    let mut history = vec![y_norm];
    let mut corr = vec![0.0; n_atoms];
    let mut converged = false;
    while atoms.len() < params.k_max.min(y.len()) {
        if norm2(&r) <= params.residual_tol * y_norm {
            converged = true;
            break;
        }
        correlate(&r, &mut corr);
        // Lowest index wins ties.
        let mut best = usize::MAX;
        let mut best_val = 0.0;
        for (i, &v) in corr.iter().enumerate() {
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best == usize::MAX || best_val <= 1e-13 * y_norm || atoms.contains(&best) {
            converged = true;
            break;
        }
        if !qr.push(&atom(best)) {
            converged = true;
            break;
        }
        atoms.push(best);
        qr.deflate_last(&mut r);
        history.push(norm2(&r));
    }
    if !converged && norm2(&r) <= params.residual_tol * y_norm {
        converged = true;
    }
    let coefficients = qr.solve(y);
    let residual = qr.residual(y);
    Ok(SparseSolution {
        iterations: atoms.len(),
        atoms,
        coefficients,
        residual_norm: norm2(&residual),
        history,
        converged,
        solver,
    })
}

fn checked_norms(norms: &[f64], what: &str) -> Result<()> {
    if let Some(j) = norms.iter().position(|&n| n == 0.0) {
        return Err(Error::invalid(what, format!("column {j} is zero")));
    }
    Ok(())
}

/// OMP with normalised-correlation selection and a joint least-squares refit
/// after every selection.
pub fn omp_1d(y: &[Complex64], d: &CMatrix, params: &OmpParams) -> Result<SparseSolution> {
    if y.len() != d.rows() {
        return Err(Error::DimensionMismatch(format!(
            "measurement length {} vs dictionary rows {}",
            y.len(),
            d.rows()
        )));
    }
    let norms = d.column_norms();
    checked_norms(&norms, "dictionary")?;
    greedy(
        y,
        d.cols(),
        params,
        SolverKind::Omp,
        |r, out| {
            for (j, o) in out.iter_mut().enumerate() {
                let c: Complex64 = d.col(j).iter().zip(r).map(|(a, b)| a.conj() * b).sum();
                *o = c.norm() / norms[j];
            }
        },
        |j| d.col(j).to_vec(),
    )
}

/// OMP on `Y = C Z Bᵀ` using matrix projections `Cᴴ R B*` for atom selection.
/// Selection order, tie-breaking and refits match [`omp_1d`] on `(vec(Y), B ⊗ C)`.
pub fn omp_2d(y: &CMatrix, c: &CMatrix, b: &CMatrix, params: &OmpParams) -> Result<SparseSolution> {
    if y.rows() != c.rows() || y.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "Y is {}×{}, C has {} rows, B has {} rows",
            y.rows(),
            y.cols(),
            c.rows(),
            b.rows()
        )));
    }
    let (m, p) = (c.rows(), b.rows());
    let (ga, gd) = (c.cols(), b.cols());
    let cn = c.column_norms();
    let bn = b.column_norms();
    checked_norms(&cn, "angle dictionary")?;
    checked_norms(&bn, "doppler dictionary")?;
    let b_conj = b.conj();
    let mut sol = greedy(
        y.as_slice(),
        ga * gd,
        params,
        SolverKind::Omp2d,
        |r, out| {
            let rm = CMatrix::from_col_major(m, p, r.to_vec()).expect("shape");
            let t = c.adjoint_mul(&rm).expect("shape");
            let s = t.mul(&b_conj).expect("shape");
            for j in 0..gd {
                for i in 0..ga {
                    out[j * ga + i] = s.get(i, j).norm() / (cn[i] * bn[j]);
                }
            }
        },
        |a| {
            let (i, j) = (a % ga, a / ga);
            let mut v = Vec::with_capacity(m * p);
            for pp in 0..p {
                let bv = b.get(pp, j);
                v.extend(c.col(i).iter().map(|cv| bv * cv));
            }
            v
        },
    )?;
    sol.solver = SolverKind::Omp2d;
    Ok(sol)
}
