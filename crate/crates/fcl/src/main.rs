use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fcl::{ExperimentConfig, ExperimentKind, FclError};

/// Floquet cluster chain laboratory: runs one experiment from a JSON config
/// and writes `<experiment>_<observable>.csv` tables.
///
/// Exit status: 0 success, 1 I/O error, 2 invalid config, 3 resource
/// refusal, 4 oracle-check failure.
#[derive(Debug, Parser)]
#[command(name = "fcl", version)]
struct Cli {
    /// bands, winding-map, q0-map, loschmidt, walk, negativity-sweep or oracle-check.
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output_dir` (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for parameter sweeps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Also write an SVG preview per table.
    #[arg(long)]
    svg: bool,
}

fn run(cli: &Cli) -> fcl::Result<()> {
    let kind = ExperimentKind::parse(&cli.experiment).ok_or_else(|| {
        let known: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
        FclError::Config(format!("unknown experiment {:?} (known: {})", cli.experiment, known.join(", ")))
    })?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(FclError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| FclError::Config(e.to_string()))?;
    }
    let bytes = std::fs::read(&cli.config).map_err(|e| FclError::io(&cli.config, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| FclError::Config(e.to_string()))?;
    let (_, output) = fcl::run_config(kind, &text)?;
    let dir = match &cli.out {
        Some(d) => d.clone(),
        None => ExperimentConfig::from_json(&text)?.output_dir.unwrap_or_else(|| PathBuf::from("out")),
    };
    let written = fcl::write_outputs(&dir, kind, &bytes, &output, cli.svg)?;
    for f in &written.files {
        println!("{}", f.display());
    }
    if !output.oracle_failures.is_empty() {
        return Err(FclError::OracleFailure(output.oracle_failures.join("; ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fcl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
