//! Interacting quantum walk: a walker with a two-level coin hopping on the
//! ring of chain sites and exchanging with the chain spins.
//!
//! Amplitude index: `i = x * (2 * 2^L) + c * 2^L + s` (position-major, then
//! coin, then the spin configuration). Each `(x, c)` block holds a full spin
//! register, so the spin kernels apply to the whole vector at once.
//!
//! One step is `F(J, B) W(J_w) M C(theta)`, applied right to left.
//!
//! Shift convention: `M |x, 1, s> = |x+1, 0, s>` and `M |x+1, 0, s> = |x, 1, s>`.
//! With `theta = pi/2` a walker starting in coin 0 is rotated to coin 1 and
//! then moves one site towards larger `x` every step.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::kernels;
use crate::spin::SpinRegister;
use crate::{CouplingMode, WalkParams, MAX_WALK_SITES};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    sites: usize,
    amps: Vec<Complex64>,
}

impl WalkState {
    /// `|x0, c0> (x) |+>^L`.
    pub fn initial(sites: usize, x0: usize, c0: usize) -> Result<Self> {
        check_sites(sites)?;
        if x0 >= sites || c0 > 1 {
            return Err(invalid(format!("walker start ({x0}, {c0}) out of range for {sites} sites")));
        }
        let spin_dim = 1 << sites;
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * sites * spin_dim];
        let a = Complex64::new(libm::exp2(-(sites as f64) / 2.0), 0.0);
        let start = (2 * x0 + c0) * spin_dim;
        amps[start..start + spin_dim].fill(a);
        Ok(Self { sites, amps })
    }

    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_sites(sites)?;
        let dim = (2 * sites) << sites;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amps.len() });
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

    fn spin_dim(&self) -> usize {
        1 << self.sites
    }

    /// Number of `(x, c)` blocks, `2 L`.
    pub fn blocks(&self) -> usize {
        2 * self.sites
    }

    fn block_range(&self, x: usize, c: usize) -> core::ops::Range<usize> {
        let start = (2 * x + c) * self.spin_dim();
        start..start + self.spin_dim()
    }

    /// Coin rotation `exp(-i theta tau_y)` at every position.
    pub fn apply_coin_rotation(&mut self, theta: f64) {
        let (s, c) = libm::sincos(theta);
        let dim = self.spin_dim();
        for chunk in self.amps.chunks_exact_mut(2 * dim) {
            let (heads, tails) = chunk.split_at_mut(dim);
            for (a0, a1) in heads.iter_mut().zip(tails.iter_mut()) {
                let (u, v) = (*a0, *a1);
                *a0 = u * c - v * s;
                *a1 = u * s + v * c;
            }
        }
    }

    /// Coin-conditioned shift with periodic wrap.
    pub fn apply_shift(&mut self) {
        let l = self.sites;
        let dim = self.spin_dim();
        // Swap coins in place, then rotate the coin-0 column towards larger x
        // and the coin-1 column towards smaller x.
        for chunk in self.amps.chunks_exact_mut(2 * dim) {
            let (heads, tails) = chunk.split_at_mut(dim);
            heads.swap_with_slice(tails);
        }
        let mut carry = vec![Complex64::new(0.0, 0.0); dim];
        carry.copy_from_slice(&self.amps[self.block_range(l - 1, 0)]);
        for x in (1..l).rev() {
            let (dst, src) = (self.block_range(x, 0), self.block_range(x - 1, 0));
            self.amps.copy_within(src, dst.start);
        }
        let first = self.block_range(0, 0);
        self.amps[first].copy_from_slice(&carry);

        carry.copy_from_slice(&self.amps[self.block_range(0, 1)]);
        for x in 0..l - 1 {
            let (dst, src) = (self.block_range(x, 1), self.block_range(x + 1, 1));
            self.amps.copy_within(src, dst.start);
        }
        let last = self.block_range(l - 1, 1);
        self.amps[last].copy_from_slice(&carry);
    }

    /// Coin-spin exchange `prod_x [cos J_w + i sin J_w tau_x X_x]`.
    ///
    /// In [`CouplingMode::Local`] only the factor at the walker position acts.
    pub fn apply_exchange(&mut self, exchange: f64, mode: CouplingMode) {
        let (s, c) = libm::sincos(exchange);
        let is = I * s;
        let l = self.sites;
        let coin_bit = 1usize << l;
        let block = 2 * self.spin_dim();
        match mode {
            CouplingMode::Global => {
                for chunk in self.amps.chunks_exact_mut(block) {
                    for site in 0..l {
                        exchange_pairs(chunk, coin_bit, 1 << site, c, is);
                    }
                }
            }
            CouplingMode::Local => {
                for (x, chunk) in self.amps.chunks_exact_mut(block).enumerate() {
                    exchange_pairs(chunk, coin_bit, 1 << x, c, is);
                }
            }
        }
    }

    /// Spin Floquet operator inside every `(x, c)` block.
    pub fn apply_spin_floquet(&mut self, j: f64, b: f64) {
        kernels::floquet_step(&mut self.amps, self.sites, j, b);
    }

    /// One step `F W M C`.
    pub fn step(&mut self, params: &WalkParams) -> Result<()> {
        if params.sites() != self.sites {
            return Err(Error::DimensionMismatch { expected: self.sites, got: params.sites() });
        }
        self.apply_coin_rotation(params.coin_angle);
        self.apply_shift();
        self.apply_exchange(params.exchange, params.coupling);
        self.apply_spin_floquet(params.model.j, params.model.b);
        Ok(())
    }

    /// Walker position distribution `p(x) = sum_{c,s} |psi_{xcs}|^2`.
    pub fn particle_distribution(&self) -> Vec<f64> {
        self.amps.chunks_exact(2 * self.spin_dim()).map(kernels::norm_sqr).collect()
    }

    /// Probability of each `(x, c)` block, ordered by block index `2x + c`.
    pub fn block_weights(&self) -> Vec<f64> {
        self.amps.chunks_exact(self.spin_dim()).map(kernels::norm_sqr).collect()
    }
}

fn exchange_pairs(chunk: &mut [Complex64], coin_bit: usize, spin_bit: usize, c: f64, is: Complex64) {
    let flip = coin_bit | spin_bit;
    for i in 0..coin_bit {
        let j = i ^ flip;
        let (a, b) = (chunk[i], chunk[j]);
        chunk[i] = a * c + b * is;
        chunk[j] = b * c + a * is;
    }
}

fn check_sites(sites: usize) -> Result<()> {
    if !(4..=MAX_WALK_SITES).contains(&sites) || !sites.is_multiple_of(2) {
        return Err(Error::ResourceLimit(format!(
            "walk engine supports even L in 4..={MAX_WALK_SITES}, got {sites}"
        )));
    }
    Ok(())
}

impl SpinRegister for WalkState {
    fn sites(&self) -> usize {
        self.sites
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ModelParams;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn coin_amplitudes(state: &WalkState, x: usize, s: usize) -> (Complex64, Complex64) {
        let dim = 1 << state.sites;
        (state.amps[(2 * x) * dim + s], state.amps[(2 * x + 1) * dim + s])
    }

    #[test]
    fn initial_state_layout() {
        let st = WalkState::initial(4, 2, 0).unwrap();
        let nonzero: Vec<usize> =
            st.amps.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(i, _)| i).collect();
        assert_eq!(nonzero, (64..80).collect::<Vec<_>>());
        assert!(st.amps[64..80].iter().all(|a| (a.re - 0.25).abs() < 1e-15));
        assert_abs_diff_eq!(st.norm_sqr(), 1.0, epsilon = 1e-14);
        assert_eq!(st.particle_distribution(), [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn initial_state_rejects_out_of_range() {
        assert!(WalkState::initial(4, 4, 0).is_err());
        assert!(WalkState::initial(4, 0, 2).is_err());
        assert!(WalkState::initial(18, 0, 0).is_err());
        assert!(WalkState::initial(5, 0, 0).is_err());
    }

    #[test]
    fn coin_rotation_examples() {
        let mut st = WalkState::initial(4, 1, 0).unwrap();
        let before = st.clone();
        st.apply_coin_rotation(0.0);
        assert_eq!(st, before);

        st.apply_coin_rotation(FRAC_PI_2);
        let (a0, a1) = coin_amplitudes(&st, 1, 3);
        assert_abs_diff_eq!(a0.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a1.re, 0.25, epsilon = 1e-15);

        let mut st = WalkState::initial(4, 1, 0).unwrap();
        st.apply_coin_rotation(FRAC_PI_4);
        let (a0, a1) = coin_amplitudes(&st, 1, 5);
        assert_abs_diff_eq!(a0.re, 0.25 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(a1.re, 0.25 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn shift_moves_blocks_by_coin() {
        let mut st = WalkState::initial(6, 2, 1).unwrap();
        st.apply_shift();
        assert_abs_diff_eq!(st.block_weights()[2 * 3], 1.0, epsilon = 1e-15);

        let mut st = WalkState::initial(6, 2, 0).unwrap();
        st.apply_shift();
        assert_abs_diff_eq!(st.block_weights()[2 * 1 + 1], 1.0, epsilon = 1e-15);

        // Periodic wrap at both ends.
        let mut st = WalkState::initial(6, 5, 1).unwrap();
        st.apply_shift();
        assert_abs_diff_eq!(st.block_weights()[0], 1.0, epsilon = 1e-15);
        let mut st = WalkState::initial(6, 0, 0).unwrap();
        st.apply_shift();
        assert_abs_diff_eq!(st.block_weights()[2 * 5 + 1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn shift_twice_returns_blocks_to_definite_positions() {
        for x0 in 0..6 {
            for c0 in 0..2 {
                let mut st = WalkState::initial(6, x0, c0).unwrap();
                st.apply_shift();
                st.apply_shift();
                let w = st.block_weights();
                assert_abs_diff_eq!(w[2 * x0 + c0], 1.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn zero_exchange_is_identity() {
        let mut st = WalkState::initial(4, 1, 0).unwrap();
        st.apply_coin_rotation(0.3);
        let before = st.clone();
        st.apply_exchange(0.0, CouplingMode::Global);
        assert_eq!(st, before);
        st.apply_exchange(0.0, CouplingMode::Local);
        assert_eq!(st, before);
    }

    #[test]
    fn step_rejects_mismatched_params() {
        let model = ModelParams::new(0.1, 0.2, 6).unwrap();
        let params = WalkParams::new(model, 0.0, 0.0, CouplingMode::Global).unwrap();
        let mut st = WalkState::initial(4, 0, 0).unwrap();
        assert!(st.step(&params).is_err());
    }
}
