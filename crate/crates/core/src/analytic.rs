//! Closed-form stroboscopic observables of the integrable chain started from
//! the fully polarized state `|+>^L` (the fermion vacuum).
//!
//! Every sum runs over the even momentum sector, each fermion rotating as
//! [`physical_mode`]. Modes `k` and `-k` carry the same occupation, so the
//! sums stream over the positive half `e_+` only and need O(1) memory at any
//! `L`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{log1p, sin};

use crate::error::{invalid, Result};
use crate::momentum::{even_positive_momenta, physical_mode, ModeData};
use crate::ModelParams;

/// Which prefactor multiplies `sin^2(eps t)` in the mode occupation.
///
/// The two forms differ only when `n_z != 0`; the exact state-vector engine
/// accepts [`Transverse`](Self::Transverse) and rejects the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OccupationForm {
    /// `1 - n_z^2`.
    #[default]
    Transverse,
    /// `(1 - n_z)^2`.
    ShiftedSquare,
}

impl OccupationForm {
    fn weight(self, mode: &ModeData) -> f64 {
        match self {
            Self::Transverse => mode.transverse_weight(),
            Self::ShiftedSquare => {
                let w = mode.one_minus_nz().unwrap_or(0.0);
                w * w
            }
        }
    }
}

/// Occupation `<t| f_k^dag f_k |t> = (1 - n_z^2) sin^2(eps_k t)`.
pub fn mode_occupation(mode: &ModeData, t: u64) -> f64 {
    mode_occupation_with(mode, t, OccupationForm::Transverse)
}

pub fn mode_occupation_with(mode: &ModeData, t: u64, form: OccupationForm) -> f64 {
    if mode.singular || t == 0 {
        return 0.0;
    }
    let s = sin(mode.epsilon * t as f64);
    form.weight(mode) * s * s
}

/// Mean fermion density `(1/L) sum_k N_k` over the full even sector.
pub fn mean_occupation(params: &ModelParams, t: u64, form: OccupationForm) -> f64 {
    let half: f64 = even_positive_momenta(params.l)
        .map(|k| mode_occupation_with(&physical_mode(k, params), t, form))
        .sum();
    2.0 * half / params.l as f64
}

/// Site-independent `<X_x>(t) = 1 - (2/L) sum_k N_k`.
pub fn x_magnetization(params: &ModelParams, t: u64) -> f64 {
    1.0 - 2.0 * mean_occupation(params, t, OccupationForm::Transverse)
}

/// Global entanglement `Q0 = (4/L) sum_k N_k [1 - (1/L) sum_k N_k]`.
pub fn global_entanglement_q0(params: &ModelParams, t: u64) -> f64 {
    global_entanglement_q0_with(params, t, OccupationForm::Transverse)
}

pub fn global_entanglement_q0_with(params: &ModelParams, t: u64, form: OccupationForm) -> f64 {
    let n = mean_occupation(params, t, form);
    4.0 * n * (1.0 - n)
}

/// Loschmidt rate `lambda(t) = -(1/L) ln |<0|t>|^2`.
///
/// The echo factorizes over the pairs `(k, -k)`, one factor
/// `1 - (1 - n_z^2) sin^2(eps_k t)` per `k` in `e_+`. An exact zero of the echo
/// yields `f64::INFINITY`.
pub fn loschmidt_rate(params: &ModelParams, t: u64) -> f64 {
    loschmidt_rate_with(params, t, OccupationForm::Transverse)
}

pub fn loschmidt_rate_with(params: &ModelParams, t: u64, form: OccupationForm) -> f64 {
    let mut log_echo = 0.0;
    for k in even_positive_momenta(params.l) {
        let loss = mode_occupation_with(&physical_mode(k, params), t, form);
        if loss >= 1.0 {
            return f64::INFINITY;
        }
        log_echo += log1p(-loss);
    }
    -log_echo / params.l as f64
}

/// Integer time window `t_start < t <= t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    pub start: u64,
    pub end: u64,
}

impl TimeWindow {
    pub fn new(start: u64, end: u64) -> Result<Self> {
        if end <= start {
            return Err(invalid(format!("empty time window ({start}, {end}]")));
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn times(&self) -> impl Iterator<Item = u64> {
        self.start + 1..=self.end
    }
}

/// Mean of `Q0` over the window.
pub fn q0_window_mean(params: &ModelParams, window: TimeWindow) -> f64 {
    let sum: f64 = window.times().map(|t| global_entanglement_q0(params, t)).sum();
    sum / window.len() as f64
}

/// Window-averaged `Q0` on a `(J, B)` grid; rows follow `js`, columns `bs`.
pub fn q0_map(js: &[f64], bs: &[f64], l: usize, window: TimeWindow) -> Result<Vec<Vec<f64>>> {
    js.iter()
        .map(|&j| {
            bs.iter()
                .map(|&b| Ok(q0_window_mean(&ModelParams::new(j, b, l)?, window)))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<u64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl TimeSeries {
    pub fn new(label: impl Into<String>, times: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(invalid(format!(
                "time series has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("time series times must be strictly increasing"));
        }
        Ok(Self { times, values, label: label.into() })
    }

    /// Samples `f` at `t = 0..=t_max`.
    pub fn sample(label: impl Into<String>, t_max: u64, f: impl Fn(u64) -> f64) -> Self {
        let times: Vec<u64> = (0..=t_max).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        Self { times, values, label: label.into() }
    }
}
