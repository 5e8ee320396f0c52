//! Reduced density matrices and mixed-state entanglement measures.
//!
//! Reductions read amplitudes directly and never build the `2^L x 2^L` spin
//! density matrix unless a caller asks for a subset that large. Subset
//! matrices order their basis with the first listed site as the most
//! significant bit, so `sites = A ++ B` gives the `A (x) B` layout expected by
//! [`partial_transpose`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use libm::{log, log1p};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernels;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::spin::{check_site, SpinRegister};
use crate::walk::WalkState;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated before a matrix is rejected as non-PSD.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues below `-NEGATIVITY_TOL` count towards the negativity.
pub const NEGATIVITY_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
/// Largest number of spins kept by [`reduced_subset`].
pub const MAX_SUBSET_SITES: usize = 12;
/// Largest kept dimension when the walker is kept alongside spins.
pub const MAX_KEPT_DIM: usize = 1 << 12;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity and trace; positivity is checked by [`Self::validate`].
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("matrix is not Hermitian (error {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        Ok(Self { matrix })
    }

    pub fn pure(v: &[Complex64]) -> Result<Self> {
        Self::new(CMatrix::projector(v))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Full invariant check, including positivity within [`PSD_TOL`].
    pub fn validate(&self) -> Result<()> {
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `Tr(self * other)`.
    pub fn overlap_trace(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let n = self.dim();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += self.matrix[(i, j)] * other.matrix[(j, i)];
            }
        }
        Ok(s.re)
    }
}

/// Single-spin Bloch vector `(<X>, <Y>, <Z>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteBloch {
    pub site: usize,
    pub vector: [f64; 3],
}

impl SiteBloch {
    pub fn norm(&self) -> f64 {
        let [x, y, z] = self.vector;
        libm::sqrt(x * x + y * y + z * z)
    }
}

/// 2x2 reduced density matrix of one spin.
pub fn reduced_single_site<R: SpinRegister + ?Sized>(state: &R, site: usize) -> Result<DensityMatrix> {
    check_site(site, state.sites())?;
    let (rho00, rho11, rho01) = kernels::site_density(state.amplitudes(), site);
    let m = CMatrix::from_rows(
        2,
        vec![Complex64::new(rho00, 0.0), rho01, rho01.conj(), Complex64::new(rho11, 0.0)],
    )?;
    DensityMatrix::new(m)
}

pub fn magnetization<R: SpinRegister + ?Sized>(state: &R, site: usize) -> Result<SiteBloch> {
    Ok(SiteBloch { site, vector: state.bloch_vector(site)? })
}

/// Reduction onto an ordered list of spins, optionally keeping the walker's
/// `(x, c)` degree of freedom (block index `2x + c`) as the most significant
/// factor. Everything else is traced out.
///
/// For a bare spin register there is a single block, so keeping it is a no-op.
pub fn reduced_subset<R: SpinRegister + ?Sized>(
    state: &R,
    sites: &[usize],
    include_particle: bool,
) -> Result<DensityMatrix> {
    let l = state.sites();
    for (i, &s) in sites.iter().enumerate() {
        check_site(s, l)?;
        if sites[..i].contains(&s) {
            return Err(invalid(format!("site {s} listed twice")));
        }
    }
    if sites.len() > MAX_SUBSET_SITES {
        return Err(Error::ResourceLimit(format!(
            "reduction keeps at most {MAX_SUBSET_SITES} spins, asked for {}",
            sites.len()
        )));
    }
    let amps = state.amplitudes();
    let spin_dim = 1usize << l;
    let blocks = amps.len() / spin_dim;
    let sub_dim = 1usize << sites.len();
    let kept_blocks = if include_particle { blocks } else { 1 };
    let dim = kept_blocks * sub_dim;
    if dim > MAX_KEPT_DIM {
        return Err(Error::ResourceLimit(format!("reduced dimension {dim} exceeds {MAX_KEPT_DIM}")));
    }

    let kept_mask: usize = sites.iter().fold(0, |m, &s| m | 1 << s);
    // Offsets of each subset index inside the spin index.
    let scatter: Vec<usize> = (0..sub_dim)
        .map(|i| {
            sites
                .iter()
                .enumerate()
                .filter(|(pos, _)| i >> (sites.len() - 1 - pos) & 1 == 1)
                .fold(0, |m, (_, &s)| m | 1 << s)
        })
        .collect();

    let mut rho = CMatrix::zeros(dim);
    let mut column = vec![Complex64::new(0.0, 0.0); dim];
    let traced_blocks = if include_particle { 1 } else { blocks };
    for rest in (0..spin_dim).filter(|r| r & kept_mask == 0) {
        for env_block in 0..traced_blocks {
            for kept_block in 0..kept_blocks {
                let block = if include_particle { kept_block } else { env_block };
                let base = block * spin_dim + rest;
                for (i, off) in scatter.iter().enumerate() {
                    column[kept_block * sub_dim + i] = amps[base + off];
                }
            }
            for i in 0..dim {
                let a = column[i];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    rho[(i, j)] += a * column[j].conj();
                }
            }
        }
    }
    DensityMatrix::new(rho)
}

/// Walker position marginal (`L x L`), coin traced out.
pub fn reduced_position(state: &WalkState) -> Result<DensityMatrix> {
    let xc = reduced_subset(state, &[], true)?;
    let l = state.sites();
    let mut m = CMatrix::zeros(l);
    for x in 0..l {
        for y in 0..l {
            m[(x, y)] = xc.matrix[(2 * x, 2 * y)] + xc.matrix[(2 * x + 1, 2 * y + 1)];
        }
    }
    DensityMatrix::new(m)
}

/// Coin marginal (2x2).
pub fn reduced_coin(state: &WalkState) -> Result<DensityMatrix> {
    let xc = reduced_subset(state, &[], true)?;
    let mut m = CMatrix::zeros(2);
    for x in 0..state.sites() {
        for c in 0..2 {
            for d in 0..2 {
                m[(c, d)] += xc.matrix[(2 * x + c, 2 * x + d)];
            }
        }
    }
    DensityMatrix::new(m)
}

/// One-tangle `4 det(rho)` of a single spin, clamped to `[0, 1]`.
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: rho.dim() });
    }
    let m = rho.matrix();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    Ok((4.0 * det).clamp(0.0, 1.0))
}

/// Mean single-spin tangle over the chain.
pub fn q_mixed<R: SpinRegister + ?Sized>(state: &R) -> f64 {
    let l = state.sites();
    let total: f64 = (0..l)
        .map(|x| tangle(&reduced_single_site(state, x).expect("site in range")).expect("2x2"))
        .sum();
    total / l as f64
}

/// Rate `-(1/L) ln L_s` with `L_s = Tr rho_s(0) rho_s(t) / Tr rho_s(0)^2`
/// for the product initial marginal `(|+><+|)^L`.
///
/// `L_s = sum_{x,c} |<+^L| psi_{xc}>|^2`, evaluated from amplitudes.
pub fn peres_loschmidt_polarized<R: SpinRegister + ?Sized>(state: &R) -> f64 {
    let l = state.sites();
    let spin_dim = 1usize << l;
    let weight = libm::exp2(-(l as f64) / 2.0);
    let echo: f64 = state
        .amplitudes()
        .chunks_exact(spin_dim)
        .map(|block| (block.iter().sum::<Complex64>() * weight).norm_sqr())
        .sum();
    rate_from_echo(echo, l)
}

/// General form from two explicit spin density matrices.
pub fn peres_loschmidt(initial: &DensityMatrix, current: &DensityMatrix, sites: usize) -> Result<f64> {
    let num = initial.overlap_trace(current)?;
    let den = initial.overlap_trace(initial)?;
    Ok(rate_from_echo(num / den, sites))
}

fn rate_from_echo(echo: f64, sites: usize) -> f64 {
    if echo <= 0.0 {
        return f64::INFINITY;
    }
    -log(echo) / sites as f64
}

/// Partial transpose on the second factor of an `A (x) B` matrix.
pub fn partial_transpose(rho: &CMatrix, dims: (usize, usize)) -> Result<CMatrix> {
    let (da, db) = dims;
    if da * db != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: da * db });
    }
    let mut out = CMatrix::zeros(rho.dim());
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out[(a * db + b, a2 * db + b2)] = rho[(a * db + b2, a2 * db + b)];
                }
            }
        }
    }
    Ok(out)
}

/// Negativity `ln(1 + 2 sum |lambda_n|)` over negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), dims)?;
    let neg: f64 = hermitian_eigenvalues(&pt).into_iter().filter(|&v| v < -NEGATIVITY_TOL).map(|v| -v).sum();
    Ok(log1p(2.0 * neg))
}

/// Von Neumann entropy `-Tr rho ln rho` (natural log).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let values = rho.eigenvalues();
    if let Some(&min) = values.first() {
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
    }
    Ok(values.into_iter().filter(|&p| p > ENTROPY_CUTOFF).map(|p| -p * log(p)).sum())
}
