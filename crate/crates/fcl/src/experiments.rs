//! Experiment runners: each turns a validated [`Plan`] into result tables.

use std::f64::consts::PI;
use std::path::Path;

use fcl_core::analytic::{global_entanglement_q0, loschmidt_rate, q0_window_mean, x_magnetization};
use fcl_core::momentum::{mode_data, winding_closed_form, winding_number};
use fcl_core::qinfo::{
    negativity, peres_loschmidt_polarized, reduced_coin, reduced_position, reduced_single_site, reduced_subset,
    tangle, von_neumann_entropy,
};
use fcl_core::spin::{Parity, SpinRegister, SpinState};
use fcl_core::walk::WalkState;
use fcl_core::{CouplingMode, Error as CoreError, ModelParams, WalkParams};
use rayon::prelude::*;

use crate::config::{CaseSpec, Engine, Plan, ResumeSpec, SetPair, Settings};
use crate::error::{FclError, Result};
use crate::oracle;
use crate::snapshot;
use crate::table::{Cell, PlotHint, ResultTable};

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub tables: Vec<ResultTable>,
    /// Identities that failed in an oracle check; empty otherwise.
    pub oracle_failures: Vec<String>,
}

pub fn run(plan: &Plan) -> Result<RunOutput> {
    let tables = match &plan.settings {
        Settings::Bands { b, js, ks } => bands(plan, *b, js, ks)?,
        Settings::WindingMap { js, bs, resolution } => vec![winding_map(js, bs, *resolution)?],
        Settings::Q0Map { l, js, bs, window } => {
            let cells: Vec<(f64, f64)> = js.iter().flat_map(|&j| bs.iter().map(move |&b| (j, b))).collect();
            let values: Vec<f64> = cells
                .par_iter()
                .map(|&(j, b)| Ok(q0_window_mean(&ModelParams::new(j, b, *l)?, *window)))
                .collect::<std::result::Result<_, CoreError>>()?;
            let mut t = ResultTable::with_columns("q0", &["j", "b", "q0"], PlotHint::Heatmap { x: 0, y: 1, value: 2 });
            for ((j, b), q) in cells.into_iter().zip(values) {
                t.push(vec![j.into(), b.into(), q.into()])?;
            }
            vec![t]
        }
        Settings::Loschmidt { l, steps, cases, engine, snapshot, resume } => {
            loschmidt(plan, *l, *steps, cases, *engine, snapshot.as_deref(), resume.as_ref())?
        }
        Settings::Walk { params, x0, c0, steps, window, snapshot, resume } => {
            walk(plan, params, (*x0, *c0), *steps, *window, snapshot.as_deref(), resume.as_ref())?
        }
        Settings::NegativitySweep { model, exchange, coupling, x0, c0, thetas, steps, window, sets } => {
            let sweep = NegativitySweep {
                model: *model,
                exchange: *exchange,
                coupling: *coupling,
                start: (*x0, *c0),
                steps: *steps,
                window: *window,
                sets,
            };
            vec![sweep.run(thetas)?]
        }
        Settings::OracleCheck { seed, trials, l_max, steps } => {
            let report = oracle::run(*seed, *trials, *l_max, *steps)?;
            let failures = report.failures();
            return Ok(RunOutput { tables: vec![report.to_table()?], oracle_failures: failures });
        }
    };
    Ok(RunOutput { tables, oracle_failures: Vec::new() })
}

fn bands(plan: &Plan, b: f64, js: &[f64], ks: &[f64]) -> Result<Vec<ResultTable>> {
    let mut out = Vec::new();
    // Only `epsilon` is a function of k; the dispersion needs no chain length.
    let model = |j: f64| ModelParams::new(j, b, 4);
    if plan.wants("epsilon") {
        let mut t = ResultTable::with_columns("epsilon", &["j", "k", "epsilon"], PlotHint::Heatmap { x: 1, y: 0, value: 2 });
        for &j in js {
            let p = model(j)?;
            for &k in ks {
                t.push(vec![j.into(), k.into(), mode_data(k, &p).epsilon.into()])?;
            }
        }
        out.push(t);
    }
    if plan.wants("gap") {
        // Distance of the band from 0 and from pi, minimized over k.
        let mut t = ResultTable::with_columns("gap", &["j", "gap_zero", "gap_pi"], PlotHint::Lines { x: 0 });
        for &j in js {
            let p = model(j)?;
            let eps: Vec<f64> = ks.iter().map(|&k| mode_data(k, &p).epsilon).collect();
            let g0 = eps.iter().copied().fold(f64::INFINITY, f64::min);
            let gpi = eps.iter().map(|e| PI - e).fold(f64::INFINITY, f64::min);
            t.push(vec![j.into(), g0.into(), gpi.into()])?;
        }
        out.push(t);
    }
    Ok(out)
}

/// Winding number on a `(J, B)` grid. Cells on a critical line (the chiral
/// vector crosses the origin) have no winding number and are left out.
pub fn winding_map(js: &[f64], bs: &[f64], resolution: usize) -> Result<ResultTable> {
    let cells: Vec<(f64, f64)> = js.iter().flat_map(|&j| bs.iter().map(move |&b| (j, b))).collect();
    let values: Vec<Option<(i32, i32)>> = cells
        .par_iter()
        .map(|&(j, b)| {
            let p = ModelParams::new(j, b, 4)?;
            // Test criticality first: mesh refinement near the critical lines is costly.
            let closed = match winding_closed_form(&p) {
                Err(CoreError::DegenerateTopology(_)) => return Ok(None),
                other => other?,
            };
            match winding_number(&p, resolution) {
                Ok(w) => Ok(Some((w, closed))),
                Err(CoreError::DegenerateTopology(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<std::result::Result<_, CoreError>>()?;
    let mut t = ResultTable::with_columns("winding", &["j", "b", "winding", "closed_form"], PlotHint::Heatmap { x: 0, y: 1, value: 2 });
    for ((j, b), v) in cells.into_iter().zip(values) {
        if let Some((w, c)) = v {
            t.push(vec![j.into(), b.into(), Cell::Int(w.into()), Cell::Int(c.into())])?;
        }
    }
    Ok(t)
}

fn rate_from_echo(echo: f64, l: usize) -> f64 {
    if echo > 0.0 {
        -echo.ln() / l as f64
    } else {
        f64::INFINITY
    }
}

fn loschmidt(
    plan: &Plan,
    l: usize,
    steps: u64,
    cases: &[CaseSpec],
    engine: Engine,
    snapshot_path: Option<&Path>,
    resume: Option<&ResumeSpec>,
) -> Result<Vec<ResultTable>> {
    let t0 = resume.map_or(0, |r| r.step);
    let times: Vec<u64> = (t0..=t0 + steps).collect();
    // series[case][observable][time]
    let series: Vec<[Vec<f64>; 3]> = match engine {
        Engine::Analytic => cases
            .par_iter()
            .map(|c| {
                let p = ModelParams::new(c.j, c.b, l)?;
                Ok([
                    times.iter().map(|&t| loschmidt_rate(&p, t)).collect(),
                    times.iter().map(|&t| global_entanglement_q0(&p, t)).collect(),
                    times.iter().map(|&t| x_magnetization(&p, t)).collect(),
                ])
            })
            .collect::<std::result::Result<_, CoreError>>()?,
        Engine::Exact => {
            let mut out = Vec::new();
            for c in cases {
                let p = ModelParams::new(c.j, c.b, l)?;
                let plus = SpinState::plus(l)?;
                let mut state = match resume {
                    Some(r) => {
                        let s = snapshot::decode_spin(&snapshot::read(&r.path)?)?;
                        if s.sites() != l {
                            return Err(FclError::Config(format!("snapshot has L = {}, config L = {l}", s.sites())));
                        }
                        s
                    }
                    None => plus.clone(),
                };
                let mut obs = [Vec::new(), Vec::new(), Vec::new()];
                for i in 0..times.len() {
                    if i > 0 {
                        state.apply_floquet(&p)?;
                    }
                    obs[0].push(rate_from_echo(plus.overlap(&state)?.norm_sqr(), l));
                    obs[1].push(state.q_pure());
                    let mx: f64 = (0..l).map(|x| state.bloch_vector(x).map(|v| v[0])).sum::<fcl_core::Result<f64>>()?;
                    obs[2].push(mx / l as f64);
                }
                if let Some(path) = snapshot_path {
                    snapshot::write(path, &snapshot::encode_spin(&state))?;
                }
                out.push(obs);
            }
            out
        }
    };
    let mut columns = vec!["t".to_string()];
    columns.extend(cases.iter().map(|c| c.label.clone()));
    let mut out = Vec::new();
    for (o, name) in ["rate", "q0", "magnetization"].into_iter().enumerate() {
        if !plan.wants(name) {
            continue;
        }
        let mut t = ResultTable::new(name, columns.clone(), PlotHint::Lines { x: 0 });
        for (i, &time) in times.iter().enumerate() {
            let mut row = vec![Cell::from(time)];
            row.extend(series.iter().map(|s| Cell::Real(s[o][i])));
            t.push(row)?;
        }
        out.push(t);
    }
    Ok(out)
}

/// Observables of one walk state.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    pub particle: Vec<f64>,
    pub bloch: Vec<[f64; 3]>,
    pub tangles: Vec<f64>,
    pub qs: f64,
    pub rate: f64,
}

impl WalkSample {
    pub fn of(state: &WalkState) -> Result<Self> {
        let l = state.sites();
        let mut bloch = Vec::with_capacity(l);
        let mut tangles = Vec::with_capacity(l);
        for x in 0..l {
            bloch.push(state.bloch_vector(x)?);
            tangles.push(tangle(&reduced_single_site(state, x)?)?);
        }
        let qs = tangles.iter().sum::<f64>() / l as f64;
        Ok(Self { particle: state.particle_distribution(), bloch, tangles, qs, rate: peres_loschmidt_polarized(state) })
    }

    pub fn mean_bloch(&self) -> [f64; 3] {
        let n = self.bloch.len() as f64;
        let mut m = [0.0; 3];
        for v in &self.bloch {
            for i in 0..3 {
                m[i] += v[i] / n;
            }
        }
        m
    }
}

/// Window averages of a walk trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkSummary {
    pub qs: f64,
    /// Time average of `|(1/L) sum_x <X_x>|`.
    pub abs_x: f64,
    pub rate: f64,
}

pub fn summarize(samples: &[WalkSample]) -> WalkSummary {
    let n = samples.len() as f64;
    WalkSummary {
        qs: samples.iter().map(|s| s.qs).sum::<f64>() / n,
        abs_x: samples.iter().map(|s| s.mean_bloch()[0].abs()).sum::<f64>() / n,
        rate: samples.iter().map(|s| s.rate).sum::<f64>() / n,
    }
}

/// Runs `steps` walk steps from `|x0, c0, +>` and returns the window summary
/// over the last `window` steps.
pub fn walk_summary(params: &WalkParams, start: (usize, usize), steps: u64, window: u64) -> Result<WalkSummary> {
    let mut state = WalkState::initial(params.sites(), start.0, start.1)?;
    let mut tail = Vec::new();
    for t in 1..=steps {
        state.step(params)?;
        if t + window > steps {
            tail.push(WalkSample::of(&state)?);
        }
    }
    Ok(summarize(&tail))
}

fn site_columns(prefix: &str, l: usize) -> Vec<String> {
    std::iter::once("t".to_string()).chain((0..l).map(|x| format!("{prefix}{x}"))).collect()
}

fn walk(
    plan: &Plan,
    params: &WalkParams,
    start: (usize, usize),
    steps: u64,
    window: u64,
    snapshot_path: Option<&Path>,
    resume: Option<&ResumeSpec>,
) -> Result<Vec<ResultTable>> {
    let l = params.sites();
    let (mut state, t0) = match resume {
        Some(r) => {
            let s = snapshot::decode_walk(&snapshot::read(&r.path)?)?;
            if s.sites() != l {
                return Err(FclError::Config(format!("snapshot has L = {}, config L = {l}", s.sites())));
            }
            (s, r.step)
        }
        None => (WalkState::initial(l, start.0, start.1)?, 0),
    };

    let mut particle = ResultTable::new("particle", site_columns("p", l), PlotHint::Grid);
    let mut tangles = ResultTable::new("tangle", site_columns("tau", l), PlotHint::Grid);
    let mut qs = ResultTable::with_columns("qs", &["t", "qs"], PlotHint::Lines { x: 0 });
    let mut mag = ResultTable::with_columns("magnetization", &["t", "x", "y", "z", "abs_x"], PlotHint::Lines { x: 0 });
    let mut mag_sites = ResultTable::new("magnetization-sites", site_columns("x", l), PlotHint::Grid);
    let mut rate = ResultTable::with_columns("loschmidt", &["t", "rate"], PlotHint::Lines { x: 0 });
    let mut entropy = ResultTable::with_columns("entropy", &["t", "spin", "position", "coin"], PlotHint::Lines { x: 0 });
    let mut half = ResultTable::with_columns("half-chain-entropy", &["t", "entropy", "normalized"], PlotHint::Lines { x: 0 });
    let mut norm = ResultTable::with_columns("norm", &["t", "norm", "parity_even", "parity_odd"], PlotHint::Lines { x: 0 });
    let half_sites: Vec<usize> = (0..l / 2).collect();

    let mut tail = Vec::new();
    for t in t0..=t0 + steps {
        if t > t0 {
            state.step(params)?;
        }
        let s = WalkSample::of(&state)?;
        let tc = Cell::from(t);
        let with_t = |values: &[f64]| std::iter::once(tc.clone()).chain(values.iter().map(|&v| Cell::Real(v))).collect();
        if plan.wants("particle") {
            particle.push(with_t(&s.particle))?;
        }
        if plan.wants("tangle") {
            tangles.push(with_t(&s.tangles))?;
        }
        if plan.wants("qs") {
            qs.push(with_t(&[s.qs]))?;
        }
        if plan.wants("magnetization") {
            let [x, y, z] = s.mean_bloch();
            mag.push(with_t(&[x, y, z, x.abs()]))?;
        }
        if plan.wants("magnetization-sites") {
            let xs: Vec<f64> = s.bloch.iter().map(|v| v[0]).collect();
            mag_sites.push(with_t(&xs))?;
        }
        if plan.wants("loschmidt") {
            rate.push(with_t(&[s.rate]))?;
        }
        if plan.wants("entropy") {
            // The spin marginal shares its spectrum with the small (x, c) marginal.
            let spin = von_neumann_entropy(&reduced_subset(&state, &[], true)?)?;
            let position = von_neumann_entropy(&reduced_position(&state)?)?;
            let coin = von_neumann_entropy(&reduced_coin(&state)?)?;
            entropy.push(with_t(&[spin, position, coin]))?;
        }
        if plan.wants("half-chain-entropy") {
            let s_half = von_neumann_entropy(&reduced_subset(&state, &half_sites, false)?)?;
            half.push(with_t(&[s_half, s_half / (half_sites.len() as f64 * std::f64::consts::LN_2)]))?;
        }
        if plan.wants("norm") {
            let pe = state.parity_expectation(Parity::Even);
            let po = state.parity_expectation(Parity::Odd);
            norm.push(with_t(&[state.norm_sqr(), pe, po]))?;
        }
        if t + window > t0 + steps {
            tail.push(s);
        }
    }
    if let Some(path) = snapshot_path {
        snapshot::write(path, &snapshot::encode_walk(&state))?;
    }

    let mut summary = ResultTable::with_columns("summary", &["steps", "window", "qs", "abs_x", "rate"], PlotHint::None);
    let w = summarize(&tail);
    summary.push(vec![steps.into(), window.into(), w.qs.into(), w.abs_x.into(), w.rate.into()])?;

    let all = [particle, tangles, qs, mag, mag_sites, rate, entropy, half, norm, summary];
    Ok(plan.observables.iter().filter_map(|name| all.iter().find(|t| t.observable == *name).cloned()).collect())
}

/// Window-averaged negativity of fixed spin bipartitions as a function of the coin angle.
pub struct NegativitySweep<'a> {
    pub model: ModelParams,
    pub exchange: f64,
    pub coupling: CouplingMode,
    pub start: (usize, usize),
    pub steps: u64,
    pub window: u64,
    pub sets: &'a [SetPair],
}

impl NegativitySweep<'_> {
    /// Mean negativity of each set over the last `window` steps at one angle.
    pub fn at(&self, theta: f64) -> Result<Vec<f64>> {
        let params = WalkParams::new(self.model, self.exchange, theta, self.coupling)?;
        let mut state = WalkState::initial(self.model.l, self.start.0, self.start.1)?;
        let mut sums = vec![0.0; self.sets.len()];
        for t in 1..=self.steps {
            state.step(&params)?;
            if t + self.window > self.steps {
                for (sum, set) in sums.iter_mut().zip(self.sets) {
                    let sites: Vec<usize> = set.a.iter().chain(&set.b).copied().collect();
                    let rho = reduced_subset(&state, &sites, false)?;
                    *sum += negativity(&rho, (1 << set.a.len(), 1 << set.b.len()))?;
                }
            }
        }
        Ok(sums.into_iter().map(|s| s / self.window as f64).collect())
    }

    pub fn run(&self, thetas: &[f64]) -> Result<ResultTable> {
        let rows: Vec<Vec<f64>> = thetas.par_iter().map(|&th| self.at(th)).collect::<Result<_>>()?;
        let mut columns = vec!["theta".to_string()];
        columns.extend(self.sets.iter().map(|s| s.label.clone()));
        let mut t = ResultTable::new("negativity", columns, PlotHint::Lines { x: 0 });
        for (&theta, values) in thetas.iter().zip(rows) {
            let mut row = vec![Cell::Real(theta)];
            row.extend(values.into_iter().map(Cell::Real));
            t.push(row)?;
        }
        Ok(t)
    }
}
