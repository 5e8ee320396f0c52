//! JSON experiment configs and their validation into typed plans.
//!
//! Angles are radians, times are integer Floquet steps. See `configs/README.md`
//! for the schema with examples.

use std::f64::consts::PI;
use std::path::PathBuf;

use fcl_core::analytic::TimeWindow;
use fcl_core::{CouplingMode, ModelParams, WalkParams};
use serde::Deserialize;

use crate::error::{FclError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Bands,
    WindingMap,
    Q0Map,
    Loschmidt,
    Walk,
    NegativitySweep,
    OracleCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::Bands,
        Self::WindingMap,
        Self::Q0Map,
        Self::Loschmidt,
        Self::Walk,
        Self::NegativitySweep,
        Self::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Bands => "bands",
            Self::WindingMap => "winding-map",
            Self::Q0Map => "q0-map",
            Self::Loschmidt => "loschmidt",
            Self::Walk => "walk",
            Self::NegativitySweep => "negativity-sweep",
            Self::OracleCheck => "oracle-check",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Documented observables; the first entries are the defaults when a
    /// config lists none (all of them).
    pub fn observables(self) -> &'static [&'static str] {
        match self {
            Self::Bands => &["epsilon", "gap"],
            Self::WindingMap => &["winding"],
            Self::Q0Map => &["q0"],
            Self::Loschmidt => &["rate", "q0", "magnetization"],
            Self::Walk => &[
                "particle",
                "tangle",
                "qs",
                "magnetization",
                "magnetization-sites",
                "loschmidt",
                "entropy",
                "half-chain-entropy",
                "norm",
                "summary",
            ],
            Self::NegativitySweep => &["negativity"],
            Self::OracleCheck => &["report"],
        }
    }
}

/// Inclusive linear range `start, ..., end` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }

    fn check(&self, name: &str) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(FclError::Config(format!("sweep.{name} has count 0")));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(FclError::Config(format!("sweep.{name} bounds must be finite")));
        }
        Ok(self.values())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub j: Option<f64>,
    pub b: Option<f64>,
    pub l: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingSpec {
    #[default]
    Global,
    Local,
}

impl From<CouplingSpec> for CouplingMode {
    fn from(c: CouplingSpec) -> Self {
        match c {
            CouplingSpec::Global => CouplingMode::Global,
            CouplingSpec::Local => CouplingMode::Local,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkSpec {
    pub exchange: Option<f64>,
    pub coin_angle: Option<f64>,
    #[serde(default)]
    pub coupling: CouplingSpec,
    /// Defaults to `L / 2`.
    pub x0: Option<usize>,
    #[serde(default)]
    pub c0: usize,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub j: Option<Range>,
    pub b: Option<Range>,
    pub k: Option<Range>,
    pub theta: Option<Range>,
}

/// One `(J, B)` trace of a loschmidt run.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub label: String,
    pub j: f64,
    pub b: f64,
}

/// Bipartition `A | B` of a spin subset for the negativity sweep.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetPair {
    pub label: String,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Analytic,
    Exact,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResumeSpec {
    pub path: PathBuf,
    /// Step count already applied to the stored state.
    pub step: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default)]
    pub walk: WalkSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub cases: Vec<CaseSpec>,
    #[serde(default)]
    pub sets: Vec<SetPair>,
    pub steps: Option<u64>,
    pub window: Option<u64>,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    pub trials: Option<usize>,
    pub l_max: Option<usize>,
    pub resolution: Option<usize>,
    #[serde(default)]
    pub engine: Engine,
    pub output_dir: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub resume: Option<ResumeSpec>,
}

/// Largest subset (both halves) the negativity sweep will reduce onto.
pub const MAX_NEGATIVITY_SITES: usize = 6;
/// Largest chain the oracle check will evolve exactly.
pub const MAX_ORACLE_SITES: usize = 12;

#[derive(Debug, Clone)]
pub struct Plan {
    pub kind: ExperimentKind,
    pub observables: Vec<&'static str>,
    pub settings: Settings,
}

impl Plan {
    pub fn wants(&self, observable: &str) -> bool {
        self.observables.contains(&observable)
    }
}

#[derive(Debug, Clone)]
pub enum Settings {
    Bands {
        b: f64,
        js: Vec<f64>,
        ks: Vec<f64>,
    },
    WindingMap {
        js: Vec<f64>,
        bs: Vec<f64>,
        resolution: usize,
    },
    Q0Map {
        l: usize,
        js: Vec<f64>,
        bs: Vec<f64>,
        window: TimeWindow,
    },
    Loschmidt {
        l: usize,
        steps: u64,
        cases: Vec<CaseSpec>,
        engine: Engine,
        snapshot: Option<PathBuf>,
        resume: Option<ResumeSpec>,
    },
    Walk {
        params: WalkParams,
        x0: usize,
        c0: usize,
        steps: u64,
        window: u64,
        snapshot: Option<PathBuf>,
        resume: Option<ResumeSpec>,
    },
    NegativitySweep {
        model: ModelParams,
        exchange: f64,
        coupling: CouplingMode,
        x0: usize,
        c0: usize,
        thetas: Vec<f64>,
        steps: u64,
        window: u64,
        sets: Vec<SetPair>,
    },
    OracleCheck {
        seed: u64,
        trials: usize,
        l_max: usize,
        steps: u64,
    },
}

fn need<T>(value: Option<T>, what: &str) -> Result<T> {
    value.ok_or_else(|| FclError::Config(format!("missing `{what}`")))
}

fn check_label(label: &str) -> Result<()> {
    let ok = !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c));
    if !ok {
        return Err(FclError::Config(format!("label {label:?} must be non-empty [A-Za-z0-9_.-]")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn observables(&self) -> Result<Vec<&'static str>> {
        let known = self.experiment.observables();
        if self.observables.is_empty() {
            return Ok(known.to_vec());
        }
        let mut out = Vec::new();
        for name in &self.observables {
            let found = known.iter().find(|k| *k == name).ok_or_else(|| {
                FclError::Config(format!(
                    "unknown observable {name:?} for {} (known: {})",
                    self.experiment.name(),
                    known.join(", ")
                ))
            })?;
            if !out.contains(found) {
                out.push(*found);
            }
        }
        Ok(out)
    }

    fn steps(&self) -> Result<u64> {
        let steps = need(self.steps, "steps")?;
        if steps == 0 {
            return Err(FclError::Config("steps must be at least 1".into()));
        }
        Ok(steps)
    }

    /// Averaging window over the last steps; defaults to 50 (or all steps if fewer).
    fn window(&self, steps: u64) -> Result<u64> {
        let window = self.window.unwrap_or(50.min(steps));
        if window == 0 || window > steps {
            return Err(FclError::Config(format!("window must be in 1..={steps}, got {window}")));
        }
        Ok(window)
    }

    fn sweep(&self, range: Option<Range>, name: &str) -> Result<Vec<f64>> {
        need(range, &format!("sweep.{name}"))?.check(name)
    }

    fn model(&self) -> Result<ModelParams> {
        let m = &self.model;
        Ok(ModelParams::new(need(m.j, "model.j")?, need(m.b, "model.b")?, need(m.l, "model.l")?)?)
    }

    fn start(&self, l: usize) -> Result<(usize, usize)> {
        let x0 = self.walk.x0.unwrap_or(l / 2);
        if x0 >= l || self.walk.c0 > 1 {
            return Err(FclError::Config(format!(
                "walk start (x0 = {x0}, c0 = {}) out of range for L = {l}",
                self.walk.c0
            )));
        }
        Ok((x0, self.walk.c0))
    }

    pub fn validate(&self) -> Result<Plan> {
        let observables = self.observables()?;
        let settings = match self.experiment {
            ExperimentKind::Bands => {
                let ks = match self.sweep.k {
                    Some(r) => r.check("k")?,
                    None => Range { start: -PI, end: PI, count: 200 }.values(),
                };
                Settings::Bands { b: need(self.model.b, "model.b")?, js: self.sweep(self.sweep.j, "j")?, ks }
            }
            ExperimentKind::WindingMap => {
                let resolution = self.resolution.unwrap_or(1024);
                if resolution < 64 {
                    return Err(FclError::Config(format!("resolution must be at least 64, got {resolution}")));
                }
                Settings::WindingMap {
                    js: self.sweep(self.sweep.j, "j")?,
                    bs: self.sweep(self.sweep.b, "b")?,
                    resolution,
                }
            }
            ExperimentKind::Q0Map => {
                let l = need(self.model.l, "model.l")?;
                ModelParams::new(0.0, 0.0, l)?;
                let steps = self.steps()?;
                let window = TimeWindow::new(steps - self.window(steps)?, steps)?;
                Settings::Q0Map { l, js: self.sweep(self.sweep.j, "j")?, bs: self.sweep(self.sweep.b, "b")?, window }
            }
            ExperimentKind::Loschmidt => {
                let l = need(self.model.l, "model.l")?;
                let cases = if self.cases.is_empty() {
                    vec![CaseSpec { label: "value".into(), j: need(self.model.j, "model.j")?, b: need(self.model.b, "model.b")? }]
                } else {
                    self.cases.clone()
                };
                for (i, case) in cases.iter().enumerate() {
                    check_label(&case.label)?;
                    if cases[..i].iter().any(|c| c.label == case.label) {
                        return Err(FclError::Config(format!("duplicate case label {:?}", case.label)));
                    }
                    ModelParams::new(case.j, case.b, l)?;
                }
                if self.engine == Engine::Analytic && (self.snapshot.is_some() || self.resume.is_some()) {
                    return Err(FclError::Config("snapshots need engine \"exact\"".into()));
                }
                if cases.len() > 1 && (self.snapshot.is_some() || self.resume.is_some()) {
                    return Err(FclError::Config("snapshots need a single case".into()));
                }
                if self.engine == Engine::Exact && l > fcl_core::MAX_SPIN_SITES {
                    return Err(FclError::Resource(format!(
                        "exact engine holds 2^L amplitudes; L = {l} exceeds {}",
                        fcl_core::MAX_SPIN_SITES
                    )));
                }
                Settings::Loschmidt {
                    l,
                    steps: self.steps()?,
                    cases,
                    engine: self.engine,
                    snapshot: self.snapshot.clone(),
                    resume: self.resume.clone(),
                }
            }
            ExperimentKind::Walk => {
                let model = self.model()?;
                let params = WalkParams::new(
                    model,
                    need(self.walk.exchange, "walk.exchange")?,
                    need(self.walk.coin_angle, "walk.coin_angle")?,
                    self.walk.coupling.into(),
                )?;
                let (x0, c0) = self.start(model.l)?;
                let steps = self.steps()?;
                Settings::Walk {
                    params,
                    x0,
                    c0,
                    steps,
                    window: self.window(steps)?,
                    snapshot: self.snapshot.clone(),
                    resume: self.resume.clone(),
                }
            }
            ExperimentKind::NegativitySweep => {
                let model = self.model()?;
                let exchange = need(self.walk.exchange, "walk.exchange")?;
                // Size guard through the walk engine's own limits.
                WalkParams::new(model, exchange, 0.0, self.walk.coupling.into())?;
                let sets = if self.sets.is_empty() { default_sets(model.l)? } else { self.sets.clone() };
                for set in &sets {
                    check_label(&set.label)?;
                    if set.a.is_empty() || set.b.is_empty() {
                        return Err(FclError::Config(format!("set {:?} needs both halves", set.label)));
                    }
                    let all: Vec<usize> = set.a.iter().chain(&set.b).copied().collect();
                    if all.len() > MAX_NEGATIVITY_SITES {
                        return Err(FclError::Resource(format!(
                            "set {:?} spans {} spins; negativity is limited to {MAX_NEGATIVITY_SITES}",
                            set.label,
                            all.len()
                        )));
                    }
                    for (i, s) in all.iter().enumerate() {
                        if *s >= model.l || all[..i].contains(s) {
                            return Err(FclError::Config(format!("set {:?} has a bad or repeated site {s}", set.label)));
                        }
                    }
                }
                let (x0, c0) = self.start(model.l)?;
                let steps = self.steps()?;
                Settings::NegativitySweep {
                    model,
                    exchange,
                    coupling: self.walk.coupling.into(),
                    x0,
                    c0,
                    thetas: self.sweep(self.sweep.theta, "theta")?,
                    steps,
                    window: self.window(steps)?,
                    sets,
                }
            }
            ExperimentKind::OracleCheck => {
                let l_max = self.l_max.unwrap_or(10);
                if !(4..=MAX_ORACLE_SITES).contains(&l_max) {
                    return Err(FclError::Config(format!("l_max must be in 4..={MAX_ORACLE_SITES}, got {l_max}")));
                }
                Settings::OracleCheck {
                    seed: self.seed,
                    trials: self.trials.unwrap_or(20),
                    l_max,
                    steps: self.steps.unwrap_or(50),
                }
            }
        };
        Ok(Plan { kind: self.experiment, observables, settings })
    }
}

/// Connected and disconnected 3 + 3 bipartitions.
fn default_sets(l: usize) -> Result<Vec<SetPair>> {
    if l < 9 {
        return Err(FclError::Config(format!("default negativity sets need L >= 9, got {l}; list `sets`")));
    }
    Ok(vec![
        SetPair { label: "connected".into(), a: vec![0, 1, 2], b: vec![3, 4, 5] },
        SetPair { label: "disconnected".into(), a: vec![0, 1, 2], b: vec![6, 7, 8] },
    ])
}
