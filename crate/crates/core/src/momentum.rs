//! Momentum sectors, quasienergy dispersion and band topology of the
//! effective Floquet Hamiltonian.
//!
//! Each pair of momenta `±k` evolves under a 2x2 rotation
//! `exp(i J (cos 2k Z + sin 2k X)) exp(i B Z) = exp(i eps_k n_k . sigma)`.
//! [`ModeData`] stores the quasienergy `eps_k` together with the
//! unnormalized axis `m_k = sin(eps_k) n_k`, which stays finite where the gap
//! closes.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{atan2, cos, sin, sqrt};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::ModelParams;

/// Modes with `|sin eps| < SINGULAR_TOL` are flagged singular.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Fermion-parity sector of the momentum grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Antiperiodic fermions: `k = ±pi n / L`, `n` odd. Holds the polarized state.
    Even,
    /// Periodic fermions: `k = pi n / L`, `n` even, including `0` and `pi`.
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    pub sector: Sector,
    pub values: Vec<f64>,
}

fn check_length(l: usize) -> Result<()> {
    if l < 4 || !l.is_multiple_of(2) {
        return Err(invalid(format!("chain length must be even and at least 4, got {l}")));
    }
    Ok(())
}

/// Builds the `L` momenta of a sector in strictly increasing order within `(-pi, pi]`.
pub fn build_grid(l: usize, sector: Sector) -> Result<MomentumGrid> {
    check_length(l)?;
    let li = l as i64;
    let ns: Vec<i64> = match sector {
        Sector::Even => (-(li - 1)..=(li - 1)).step_by(2).collect(),
        Sector::Odd => (-(li - 2)..=li).step_by(2).collect(),
    };
    let values = ns
        .into_iter()
        .map(|n| if n == li { PI } else { PI * n as f64 / l as f64 })
        .collect();
    Ok(MomentumGrid { sector, values })
}

/// Positive half `e_+` of the even sector: `k = pi n / L` for odd `n < L`.
///
/// Modes `k` and `-k` are paired, so sums over the full even grid are twice
/// sums over this half.
pub fn even_positive_momenta(l: usize) -> impl Iterator<Item = f64> + Clone {
    (1..l).step_by(2).map(move |n| PI * n as f64 / l as f64)
}

/// Mode seen by the fermion of momentum `k` under the chain's Floquet map.
///
/// With `X = 1 - 2 f^dag f` the cluster term becomes hopping of the opposite
/// sign to the field term, so the fermion at `k` rotates as [`mode_data`] at
/// `k + pi/2` (equivalently at `-J`). For `L % 4 == 0` the shift permutes the
/// even grid onto itself and grid sums are unchanged; for `L % 4 == 2` it
/// does not.
pub fn physical_mode(k: f64, params: &ModelParams) -> ModeData {
    let mut mode = mode_data(k + FRAC_PI_2, params);
    mode.k = k;
    mode
}

/// Quasienergy and rotation axis of one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: f64,
    /// Quasienergy in `[0, pi]`.
    pub epsilon: f64,
    /// Unnormalized axis, `|m| = sin(epsilon)`.
    pub m: [f64; 3],
    pub singular: bool,
}

impl ModeData {
    pub fn new(k: f64, params: &ModelParams) -> Self {
        mode_data(k, params)
    }

    pub fn axis_norm(&self) -> f64 {
        let [x, y, z] = self.m;
        sqrt(x * x + y * y + z * z)
    }

    /// Unit axis `n = m / |m|`, `None` on singular modes.
    pub fn unit_axis(&self) -> Option<[f64; 3]> {
        if self.singular {
            return None;
        }
        let norm = self.axis_norm();
        Some([self.m[0] / norm, self.m[1] / norm, self.m[2] / norm])
    }

    /// `1 - n_z^2 = (m_x^2 + m_y^2) / |m|^2`; zero on singular modes.
    pub fn transverse_weight(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let [x, y, z] = self.m;
        let perp = x * x + y * y;
        perp / (perp + z * z)
    }

    /// `1 - n_z` without cancellation when `n_z` is close to one.
    pub fn one_minus_nz(&self) -> Option<f64> {
        if self.singular {
            return None;
        }
        let [x, y, z] = self.m;
        let norm = self.axis_norm();
        Some(if z > 0.0 { (x * x + y * y) / (norm * (norm + z)) } else { (norm - z) / norm })
    }
}

/// Dispersion `cos eps = cos J cos B - sin J sin B cos 2k` and axis numerators.
pub fn mode_data(k: f64, params: &ModelParams) -> ModeData {
    let (sj, cj) = (sin(params.j), cos(params.j));
    let (sb, cb) = (sin(params.b), cos(params.b));
    let (s2k, c2k) = (sin(2.0 * k), cos(2.0 * k));
    let cos_eps = (cj * cb - sj * sb * c2k).clamp(-1.0, 1.0);
    let m = [sj * cb * s2k, sj * sb * s2k, sj * cb * c2k + cj * sb];
    let norm = sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    // |m| = sin(eps) exactly, so atan2 lands on the principal arccos branch
    // without losing digits near eps = 0 or pi.
    let epsilon = atan2(norm, cos_eps);
    ModeData { k, epsilon, m, singular: sin(epsilon).abs() < SINGULAR_TOL }
}

/// Off-diagonal element of the chiral form of the effective Hamiltonian,
/// with the nonnegative factor `eps / sin eps` dropped.
pub fn chiral_g(k: f64, params: &ModelParams) -> Complex64 {
    let (sj, cj) = (sin(params.j), cos(params.j));
    let (sb, cb) = (sin(params.b), cos(params.b));
    Complex64::new(sj * sin(2.0 * k), -(sj * cb * cos(2.0 * k) + cj * sb))
}

/// Below this modulus the chiral vector is considered to touch the origin.
pub const ORIGIN_TOL: f64 = 1e-12;
const MAX_WINDING_MESH: usize = 1 << 22;

/// Winding of `g(k)` around the origin over the Brillouin zone by summing
/// phase increments on a uniform mesh. The mesh is refined until every
/// increment is below `pi / 2`.
pub fn winding_number(params: &ModelParams, resolution: usize) -> Result<i32> {
    if resolution < 64 {
        return Err(invalid(format!("winding mesh needs at least 64 points, got {resolution}")));
    }
    let mut n = resolution;
    loop {
        match accumulate_phase(params, n)? {
            Some(total) => return Ok(libm::round(total / (2.0 * PI)) as i32),
            None if n < MAX_WINDING_MESH => n *= 2,
            None => {
                return Err(Error::DegenerateTopology(format!(
                    "phase of g(k) not resolved with {n} points; (J, B) = ({}, {}) is on or next to a critical line",
                    params.j, params.b
                )))
            }
        }
    }
}

fn accumulate_phase(params: &ModelParams, n: usize) -> Result<Option<f64>> {
    let step = 2.0 * PI / n as f64;
    let sample = |i: usize| chiral_g(-PI + step * i as f64, params);
    let mut prev = sample(0);
    let mut total = 0.0;
    for i in 1..=n {
        let next = sample(i);
        if prev.norm() < ORIGIN_TOL {
            return Err(Error::DegenerateTopology(format!(
                "g(k) vanishes at k = {} for (J, B) = ({}, {})",
                -PI + step * (i - 1) as f64,
                params.j,
                params.b
            )));
        }
        let delta = (next * prev.conj()).arg();
        if delta.abs() > PI / 2.0 {
            return Ok(None);
        }
        total += delta;
        prev = next;
    }
    Ok(Some(total))
}

/// Closed-form winding: `2 sgn(cos B)` when the ellipse traced by `g(k)`
/// encloses the origin (`|tan J| > |tan B|`), zero otherwise.
///
/// Flipping the sign of `J` rotates the ellipse by `pi` and keeps its
/// orientation; the sense of traversal is set by the sign of `cos B`.
pub fn winding_closed_form(params: &ModelParams) -> Result<i32> {
    let (sj, cj) = (sin(params.j), cos(params.j));
    let (sb, cb) = (sin(params.b), cos(params.b));
    // |tan J| vs |tan B| cross-multiplied to stay finite at J, B = pi/2.
    let semi_axis = (sj * cb).abs();
    let offset = (cj * sb).abs();
    if (semi_axis - offset).abs() < ORIGIN_TOL {
        return Err(Error::DegenerateTopology(format!(
            "(J, B) = ({}, {}) lies on a critical line",
            params.j, params.b
        )));
    }
    Ok(if semi_axis > offset { 2 * cb.signum() as i32 } else { 0 })
}

/// Bogoliubov rotation of one mode: `R^dag (d . sigma) R = diag(-eps, eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeDiagonalization {
    pub k: f64,
    /// Row-major 2x2 unitary; columns are the eigenvectors for `-eps` and `+eps`.
    pub r: [[Complex64; 2]; 2],
    pub eigenvalues: (f64, f64),
}

pub fn diagonalize_mode(k: f64, params: &ModelParams) -> Result<ModeDiagonalization> {
    let mode = mode_data(k, params);
    let n = mode.unit_axis().ok_or(Error::SingularMode { k })?;
    let eps = mode.epsilon;
    let one_minus_nz = mode.one_minus_nz().unwrap_or(0.0);
    let n_minus = Complex64::new(n[0], -n[1]);
    let n_plus = n_minus.conj();
    let zero = Complex64::new(0.0, 0.0);
    let r = if n[0] * n[0] + n[1] * n[1] == 0.0 && n[2] > 0.0 {
        // n = +z: d . sigma = diag(eps, -eps); swap columns to keep (-eps, +eps).
        [[zero, Complex64::new(1.0, 0.0)], [Complex64::new(-1.0, 0.0), zero]]
    } else {
        let scale = 1.0 / (sqrt(2.0) * sqrt(one_minus_nz));
        let diag = Complex64::new(one_minus_nz * scale, 0.0);
        [[diag, n_minus * scale], [-n_plus * scale, diag]]
    };
    Ok(ModeDiagonalization { k, r, eigenvalues: (-eps, eps) })
}
