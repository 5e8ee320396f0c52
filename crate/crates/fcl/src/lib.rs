//! Experiment runner for the Floquet cluster chain engines in `fcl-core`:
//! JSON configs, CSV tables with provenance, SVG previews, binary snapshots
//! and the cross-engine oracle check.

pub mod config;
mod error;
pub mod experiments;
pub mod oracle;
pub mod snapshot;
pub mod svg;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind, Plan};
pub use error::{FclError, Result};
pub use experiments::RunOutput;
pub use fcl_core;

use table::Provenance;

/// Files written by [`write_outputs`], in write order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

/// Writes one CSV per table (and an SVG next to it when `svg` is set).
pub fn write_outputs(dir: &Path, kind: ExperimentKind, config_bytes: &[u8], output: &RunOutput, svg: bool) -> Result<Written> {
    std::fs::create_dir_all(dir).map_err(|e| FclError::io(dir, e))?;
    let provenance = Provenance::new(kind.name(), config_bytes);
    let mut written = Written::default();
    for table in &output.tables {
        let path = dir.join(table.file_name(kind.name()));
        std::fs::write(&path, table.to_csv(&provenance)).map_err(|e| FclError::io(&path, e))?;
        written.files.push(path.clone());
        if svg {
            let title = format!("{} {}", kind.name(), table.observable);
            if let Some(doc) = svg::render(table, &title) {
                let path = path.with_extension("svg");
                std::fs::write(&path, doc).map_err(|e| FclError::io(&path, e))?;
                written.files.push(path);
            }
        }
    }
    Ok(written)
}

/// Parses, validates and runs a config; the experiment named on the command
/// line must match the config's.
pub fn run_config(kind: ExperimentKind, config_text: &str) -> Result<(Plan, RunOutput)> {
    let config = ExperimentConfig::from_json(config_text)?;
    if config.experiment != kind {
        return Err(FclError::Config(format!(
            "config is for {:?} but {:?} was requested",
            config.experiment.name(),
            kind.name()
        )));
    }
    let plan = config.validate()?;
    let output = experiments::run(&plan)?;
    Ok((plan, output))
}
