//! Exact state-vector engine for the spin chain alone.
//!
//! Basis `|s> = |s_0 ... s_{L-1}>`: site `x` is bit `x` of `s` (bit 0 least
//! significant) and bit value 0 is the `Z = +1` eigenstate.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernels;
use crate::{ModelParams, MAX_SPIN_SITES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Parity operators `P_e = prod_{x even} X_x`, `P_o = prod_{x odd} X_x`, `P = P_e P_o`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Total,
}

impl Parity {
    /// Bit mask flipped by the parity operator on `sites` spins.
    pub fn mask(self, sites: usize) -> usize {
        (0..sites)
            .filter(|x| match self {
                Parity::Even => x % 2 == 0,
                Parity::Odd => x % 2 == 1,
                Parity::Total => true,
            })
            .fold(0, |m, x| m | 1 << x)
    }
}

/// Read access to a register whose low `sites()` index bits are chain spins.
pub trait SpinRegister {
    fn sites(&self) -> usize;
    fn amplitudes(&self) -> &[Complex64];

    fn norm_sqr(&self) -> f64 {
        kernels::norm_sqr(self.amplitudes())
    }

    /// Bloch vector `(<X>, <Y>, <Z>)` of one spin.
    fn bloch_vector(&self, site: usize) -> Result<[f64; 3]> {
        check_site(site, self.sites())?;
        let (rho00, rho11, rho01) = kernels::site_density(self.amplitudes(), site);
        Ok([2.0 * rho01.re, -2.0 * rho01.im, rho00 - rho11])
    }

    fn pauli_expectation(&self, axis: Axis, site: usize) -> Result<f64> {
        let v = self.bloch_vector(site)?;
        Ok(match axis {
            Axis::X => v[0],
            Axis::Y => v[1],
            Axis::Z => v[2],
        })
    }

    fn parity_expectation(&self, which: Parity) -> f64 {
        kernels::flip_expectation(self.amplitudes(), which.mask(self.sites()))
    }
}

pub(crate) fn check_site(site: usize, sites: usize) -> Result<()> {
    if site >= sites {
        return Err(invalid(format!("site {site} out of range for {sites} sites")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    sites: usize,
    amps: Vec<Complex64>,
}

fn check_register_size(l: usize) -> Result<()> {
    if !(2..=MAX_SPIN_SITES).contains(&l) {
        return Err(Error::ResourceLimit(format!(
            "spin register supports 2..={MAX_SPIN_SITES} sites, got {l}"
        )));
    }
    Ok(())
}

impl SpinState {
    /// Wraps raw amplitudes; the length must be `2^sites` and the vector normalized.
    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_register_size(sites)?;
        if amps.len() != 1 << sites {
            return Err(Error::DimensionMismatch { expected: 1 << sites, got: amps.len() });
        }
        let norm = kernels::norm_sqr(&amps);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("state norm^2 is {norm}, expected 1")));
        }
        Ok(Self { sites, amps })
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// `|+>^L`.
    pub fn plus(sites: usize) -> Result<Self> {
        check_register_size(sites)?;
        let a = Complex64::new(libm::exp2(-(sites as f64) / 2.0), 0.0);
        Ok(Self { sites, amps: vec![a; 1 << sites] })
    }

    /// Cluster state `prod_x CZ_{x, x+1} |+>^L` with periodic wrap.
    pub fn cluster(sites: usize) -> Result<Self> {
        let mut state = Self::plus(sites)?;
        for (s, a) in state.amps.iter_mut().enumerate() {
            if adjacent_ones(s, sites) % 2 == 1 {
                *a = -*a;
            }
        }
        Ok(state)
    }

    /// Computational basis state `|s>`.
    pub fn basis(sites: usize, s: usize) -> Result<Self> {
        check_register_size(sites)?;
        if s >= 1 << sites {
            return Err(invalid(format!("basis index {s} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << sites];
        amps[s] = Complex64::new(1.0, 0.0);
        Ok(Self { sites, amps })
    }

    /// One period `F = exp(-i H_C) exp(-i H_B)`.
    pub fn apply_floquet(&mut self, params: &ModelParams) -> Result<()> {
        if params.l != self.sites {
            return Err(Error::DimensionMismatch { expected: self.sites, got: params.l });
        }
        kernels::floquet_step(&mut self.amps, self.sites, params.j, params.b);
        Ok(())
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &SpinState) -> Result<Complex64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Pure-state global entanglement `1 - (1/L) sum_x |<sigma_x>|^2`.
    pub fn q_pure(&self) -> f64 {
        let total: f64 = (0..self.sites)
            .map(|x| {
                let [a, b, c] = self.bloch_vector(x).expect("site in range");
                a * a + b * b + c * c
            })
            .sum();
        1.0 - total / self.sites as f64
    }
}

impl SpinRegister for SpinState {
    fn sites(&self) -> usize {
        self.sites
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Number of periodic nearest-neighbour pairs with both bits set.
pub fn adjacent_ones(s: usize, sites: usize) -> u32 {
    let rotated = (s >> 1) | ((s & 1) << (sites - 1));
    (s & rotated).count_ones()
}
