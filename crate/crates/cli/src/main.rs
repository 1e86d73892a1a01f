use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use microwidth::bounds::Scheme;
use microwidth::experiment::{run_bound, run_count, run_oracle, run_rate, run_verify, ExperimentConfig, Report};

/// Decay exponents and computable width bounds for sequence-space embeddings.
#[derive(Parser)]
#[command(name = "microwidth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Config file of `key = value` lines; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for `report.txt` and the CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the slope tolerance of the config.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Overrides the allocation scheme of the config.
    #[arg(long, global = true)]
    scheme: Option<Scheme>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Decay exponents of all three widths.
    Rate,
    /// Fitted slopes against the predicted exponent.
    Verify,
    /// Cube counts and block sizes against the model.
    Count,
    /// Upper and lower envelopes on the k-grid.
    Bound,
    /// Exact s-numbers of a diagonal embedding.
    Oracle,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            text.parse::<ExperimentConfig>().map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(format!("tolerance must be positive, got {t}"));
        }
        cfg.tolerance = t;
    }
    if let Some(s) = cli.scheme {
        cfg.scheme = s;
    }
    Ok(cfg)
}

fn write_out(dir: &Path, report: &Report) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.txt"), report.to_text())?;
    for (name, csv) in &report.tables {
        fs::write(dir.join(name), csv)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let run = match cli.command {
        Command::Rate => run_rate,
        Command::Verify => run_verify,
        Command::Count => run_count,
        Command::Bound => run_bound,
        Command::Oracle => run_oracle,
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", report.summary());
    if let Some(dir) = &cli.out {
        if let Err(e) = write_out(dir, &report) {
            eprintln!("error: {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    }
    match report.passed {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
