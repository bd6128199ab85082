//! Doppler/angle dictionaries and sparse recovery.
//!
//! Per range bin the slice `Y` (virtual channels × chirps) follows
//! `Y = C Z Bᵀ + W`. Vectorising column-major (channels fastest) gives
//! `vec(Y) = (B ⊗ C) vec(Z)`, so the flat atom index is `doppler · G_θ + angle`.

mod dictionary;
mod l1;
mod omp;

pub use dictionary::{
    build_angle_dictionary, build_doppler_dictionary, extract_range_slice, solution_to_estimates, AngleDictionary,
    DopplerAngleEstimate, DopplerDictionary, RangeSliceMeasurement,
};
pub use l1::{basis_pursuit, lasso, BpParams, LassoParams};
pub use omp::{omp_1d, omp_2d, OmpParams};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{power_iteration, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Omp,
    Omp2d,
    BasisPursuit,
    Lasso,
}

/// Recovered atoms and coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseSolution {
    /// Flat dictionary column indices. Greedy solvers list them in selection
    /// order; the convex solvers list non-zeros by increasing index.
    pub atoms: Vec<usize>,
    pub coefficients: Vec<Complex64>,
    pub residual_norm: f64,
    /// Greedy: residual norm before the first and after each iteration.
    /// Convex: objective value per iteration.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub solver: SolverKind,
}

impl SparseSolution {
    pub(crate) fn empty(solver: SolverKind, residual_norm: f64) -> Self {
        SparseSolution {
            atoms: Vec::new(),
            coefficients: Vec::new(),
            residual_norm,
            history: vec![residual_norm],
            iterations: 0,
            converged: true,
            solver,
        }
    }

    /// Builds a solution from a dense coefficient vector, keeping its non-zeros.
    pub(crate) fn from_dense(z: &[Complex64], solver: SolverKind) -> Self {
        let (atoms, coefficients) = z
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(i, c)| (i, *c))
            .unzip();
        SparseSolution {
            atoms,
            coefficients,
            residual_norm: 0.0,
            history: Vec::new(),
            iterations: 0,
            converged: true,
            solver,
        }
    }

    /// Keeps atoms whose modulus is at least `rel` times the largest one.
    pub fn threshold(&self, rel: f64) -> SparseSolution {
        let max = self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut out = self.clone();
        if max == 0.0 {
            out.atoms.clear();
            out.coefficients.clear();
            return out;
        }
        let keep: Vec<usize> = (0..self.atoms.len())
            .filter(|&k| self.coefficients[k].norm() >= rel * max)
            .collect();
        out.atoms = keep.iter().map(|&k| self.atoms[k]).collect();
        out.coefficients = keep.iter().map(|&k| self.coefficients[k]).collect();
        out
    }

    /// Support as `(angle index, doppler index)` pairs.
    pub fn support(&self, angle_count: usize) -> Vec<(usize, usize)> {
        self.atoms.iter().map(|&a| (a % angle_count, a / angle_count)).collect()
    }

    pub fn sorted_atoms(&self) -> Vec<usize> {
        let mut a = self.atoms.clone();
        a.sort_unstable();
        a
    }
}

/// Linear map used by the first-order solvers.
pub trait LinearOperator: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;

    /// Largest eigenvalue of `DᴴD`.
    fn norm_sq(&self) -> f64 {
        power_iteration(self.cols(), 500, |x| self.adjoint(&self.apply(x)))
    }
}

impl LinearOperator for CMatrix {
    fn rows(&self) -> usize {
        CMatrix::rows(self)
    }
    fn cols(&self) -> usize {
        CMatrix::cols(self)
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.mul_vec(x)
    }
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.adjoint_mul_vec(y)
    }
}

/// `B ⊗ C` applied as `X ↦ C X Bᵀ` without forming the Kronecker product.
/// Coefficient vectors use the flat index `doppler · G_θ + angle`.
#[derive(Clone, Debug)]
pub struct KronOperator {
    b: CMatrix,
    c: CMatrix,
    b_t: CMatrix,
    b_conj: CMatrix,
    norm_sq: f64,
}

impl KronOperator {
    pub fn new(b: CMatrix, c: CMatrix) -> Self {
        let nb = b.norm_sq();
        let nc = c.norm_sq();
        let b_t = CMatrix::from_fn(b.cols(), b.rows(), |i, j| b.get(j, i));
        KronOperator {
            b_conj: b.conj(),
            b_t,
            b,
            c,
            norm_sq: nb * nc,
        }
    }

    pub fn doppler(&self) -> &CMatrix {
        &self.b
    }

    pub fn angle(&self) -> &CMatrix {
        &self.c
    }

    fn check(&self, len: usize, want: usize) -> Result<()> {
        if len != want {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {len}, expected {want}"
            )));
        }
        Ok(())
    }
}

impl LinearOperator for KronOperator {
    fn rows(&self) -> usize {
        self.b.rows() * self.c.rows()
    }
    fn cols(&self) -> usize {
        self.b.cols() * self.c.cols()
    }
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.check(x.len(), self.cols()).expect("operator input");
        let xm = CMatrix::from_col_major(self.c.cols(), self.b.cols(), x.to_vec()).expect("shape");
        let t = self.c.mul(&xm).expect("shape");
        t.mul(&self.b_t).expect("shape").as_slice().to_vec()
    }
    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.check(y.len(), self.rows()).expect("operator input");
        let ym = CMatrix::from_col_major(self.c.rows(), self.b.rows(), y.to_vec()).expect("shape");
        let t = self.c.adjoint_mul(&ym).expect("shape");
        t.mul(&self.b_conj).expect("shape").as_slice().to_vec()
    }
    fn norm_sq(&self) -> f64 {
        self.norm_sq
    }
}
