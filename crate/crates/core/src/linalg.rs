//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::sqrt;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        Ok(Self { dim, data })
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len());
        for (i, a) in v.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<CMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rhs.dim });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok((0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn off_diagonal_sqr(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi rotations until the off-diagonal mass falls below
/// `(1e-15 |A|_F)^2`. Only the Hermitian part of `a` is used.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.dim;
    let mut m = a.clone();
    for i in 0..n {
        for j in i..n {
            let h = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            m[(i, j)] = h;
            m[(j, i)] = h.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let scale: f64 = m.data.iter().map(|z| z.norm_sqr()).sum();
    let target = scale * 1e-30;

    for _ in 0..MAX_SWEEPS {
        if m.off_diagonal_sqr() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    HermitianEigen { values, vectors }
}

/// Eigenvalues only.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    hermitian_eigen(a).values
}

/// Zeroes `m[p][q]` with `U = diag-phase * Givens`, `m <- U^dag m U`, `v <- v U`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + sqrt(1.0 + zeta * zeta))
    } else {
        -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
    };
    let c = 1.0 / sqrt(1.0 + t * t);
    let s = t * c;
    // Columns p, q of U.
    let u_pp = Complex64::new(c, 0.0);
    let u_qp = -phase.conj() * s;
    let u_pq = Complex64::new(s, 0.0);
    let u_qq = phase.conj() * c;

    let n = m.dim;
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * u_pp + mkq * u_qp;
        m[(k, q)] = mkp * u_pq + mkq * u_qq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = u_pp.conj() * mpk + u_qp.conj() * mqk;
        m[(q, k)] = u_pq.conj() * mpk + u_qq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}
