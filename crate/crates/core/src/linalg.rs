//! Small dense complex linear algebra used by the solvers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Wraps column-major data.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Column-major storage, which is also `vec(self)`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r2, c2) = (other.rows, other.cols);
        CMatrix::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self.get(i / r2, j / c2) * other.get(i % r2, j % c2)
        })
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a = self.col(k);
                let o = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for (oi, ai) in o.iter_mut().zip(a) {
                    *oi += ai * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᴴ · other`.
    pub fn adjoint_mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "adjoint of {}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(CMatrix::from_fn(self.cols, other.cols, |i, j| {
            dotc(self.col(i), other.col(j))
        }))
    }

    /// Gram matrix `selfᴴ · self`.
    pub fn gram(&self) -> CMatrix {
        self.adjoint_mul(self).expect("square by construction")
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * xj;
            }
        }
        out
    }

    /// `selfᴴ · v`.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.cols).map(|j| dotc(self.col(j), v)).collect()
    }

    pub fn column_norms(&self) -> Vec<f64> {
        (0..self.cols).map(|j| norm2(self.col(j))).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }
}

/// `aᴴ b`.
pub fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Thin QR of a growing set of columns, by modified Gram–Schmidt with one
/// reorthogonalisation pass. Used for the least-squares refits in OMP.
#[derive(Clone, Debug, Default)]
pub struct IncrementalQr {
    q: Vec<Vec<Complex64>>,
    /// Column `k` of R, entries `0..=k`.
    r: Vec<Vec<Complex64>>,
}

impl IncrementalQr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Appends a column. Returns `false` (and leaves the factorisation unchanged)
    /// if the column is numerically inside the current span.
    pub fn push(&mut self, col: &[Complex64]) -> bool {
        let scale = norm2(col);
        if scale == 0.0 {
            return false;
        }
        let mut v = col.to_vec();
        let mut rcol = vec![Complex64::new(0.0, 0.0); self.q.len() + 1];
        for _ in 0..2 {
            for (i, qi) in self.q.iter().enumerate() {
                let c = dotc(qi, &v);
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk -= qk * c;
                }
                rcol[i] += c;
            }
        }
        let nv = norm2(&v);
        if nv <= 1e-10 * scale {
            return false;
        }
        for vk in v.iter_mut() {
            *vk /= nv;
        }
        rcol[self.q.len()] = Complex64::new(nv, 0.0);
        self.q.push(v);
        self.r.push(rcol);
        true
    }

    /// Removes the component of `v` along the newest basis vector.
    pub fn deflate_last(&self, v: &mut [Complex64]) {
        if let Some(q) = self.q.last() {
            let c = dotc(q, v);
            for (vk, qk) in v.iter_mut().zip(q) {
                *vk -= qk * c;
            }
        }
    }

    /// Least-squares coefficients of `y` on the pushed columns.
    pub fn solve(&self, y: &[Complex64]) -> Vec<Complex64> {
        let k = self.q.len();
        let c: Vec<Complex64> = self.q.iter().map(|q| dotc(q, y)).collect();
        let mut x = vec![Complex64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = c[i];
            for j in i + 1..k {
                s -= self.r[j][i] * x[j];
            }
            x[i] = s / self.r[i][i];
        }
        x
    }

    /// `y` minus its projection on the span.
    pub fn residual(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut v = y.to_vec();
        for _ in 0..2 {
            for q in &self.q {
                let c = dotc(q, &v);
                for (vk, qk) in v.iter_mut().zip(q) {
                    *vk -= qk * c;
                }
            }
        }
        v
    }
}

/// Largest eigenvalue of `AᴴA` by power iteration, given `x ↦ AᴴA x`.
pub fn power_iteration(n: usize, iters: usize, mut normal_op: impl FnMut(&[Complex64]) -> Vec<Complex64>) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // Deterministic, non-degenerate start vector.
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.618_033_988_7).fract(), 0.3 * ((i % 7) as f64)))
        .collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut lambda = 0.0;
    for _ in 0..iters {
        let y = normal_op(&x);
        let ny = norm2(&y);
        if ny == 0.0 {
            return 0.0;
        }
        let next = ny;
        x = y.into_iter().map(|v| v / ny).collect();
        if (next - lambda).abs() <= 1e-9 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}
