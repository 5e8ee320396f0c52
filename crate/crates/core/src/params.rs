use alloc::format;

use crate::error::{invalid, Error, Result};
use crate::MAX_WALK_SITES;

/// Couplings of the driven chain: cluster coupling `j`, transverse field `b`
/// (both in radians per period) and the number of sites `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub b: f64,
    pub l: usize,
}

impl ModelParams {
    pub fn new(j: f64, b: f64, l: usize) -> Result<Self> {
        if !j.is_finite() || !b.is_finite() {
            return Err(invalid(format!("couplings must be finite (J = {j}, B = {b})")));
        }
        if l < 4 || !l.is_multiple_of(2) {
            return Err(invalid(format!("chain length must be even and at least 4, got {l}")));
        }
        Ok(Self { j, b, l })
    }
}

/// How the walker's coin couples to the chain spins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingMode {
    /// Every site exchanges with the coin at every step, whatever the walker position.
    #[default]
    Global,
    /// Only the spin under the walker exchanges with the coin.
    Local,
}

/// Parameters of one interacting-walk step: the spin Floquet couplings plus
/// the coin-spin exchange and the coin rotation angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub model: ModelParams,
    pub exchange: f64,
    pub coin_angle: f64,
    pub coupling: CouplingMode,
}

impl WalkParams {
    pub fn new(model: ModelParams, exchange: f64, coin_angle: f64, coupling: CouplingMode) -> Result<Self> {
        if !exchange.is_finite() || !coin_angle.is_finite() {
            return Err(invalid("walk couplings must be finite"));
        }
        if model.l > MAX_WALK_SITES {
            return Err(Error::ResourceLimit(format!(
                "walk engine supports at most {MAX_WALK_SITES} sites, got {}",
                model.l
            )));
        }
        Ok(Self { model, exchange, coin_angle, coupling })
    }

    pub fn sites(&self) -> usize {
        self.model.l
    }
}
