//! `pfsim` command line: `simulate`, `density` and `analyze`.

pub mod config;
pub mod events;
pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiment::{default_workers, Analysis, RunConfig, RunSummary};
use crate::wavefield::DensityMode;

pub use config::ConfigFile;
pub use events::{read_events, write_events, EventFile};

pub const EXIT_OK: i32 = 0;
/// Invalid configuration, unreadable input or digest mismatch.
pub const EXIT_INPUT: i32 = 2;
/// Numerical failure.
pub const EXIT_NUMERIC: i32 = 3;

const DENSITY_PANEL_POINTS: usize = 2001;

#[derive(Debug, Parser)]
#[command(name = "pfsim", version, about = "Particle-field double-slit simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a simulation and write events.csv, summary.json and three SVG panels.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured particle count.
        #[arg(long)]
        particles: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads (the output does not depend on it).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Tabulate the normalised angular density on a uniform grid.
    Density {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1001)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
        /// Override the configured density mode.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<DensityMode>,
    },
    /// Recompute summary.json from a stored event list.
    Analyze {
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Output path; defaults to summary.json next to the events file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> std::result::Result<DensityMode, String> {
    match s {
        "approximate" => Ok(DensityMode::Approximate),
        "exact" => Ok(DensityMode::Exact),
        _ => Err(format!("unknown density mode `{s}` (expected approximate or exact)")),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("pfsim: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Simulate {
            config,
            seed,
            particles,
            out_dir,
            workers,
        } => {
            let mut file = ConfigFile::load(config)?;
            if let Some(seed) = seed {
                file.seed = *seed;
            }
            if let Some(n) = particles {
                file.n_particles = *n;
            }
            let config = file.to_run_config()?;
            simulate(&config, out_dir, workers.unwrap_or_else(default_workers))
        }
        Command::Density {
            config,
            points,
            out,
            mode,
        } => {
            let mut config = ConfigFile::load(config)?.to_run_config()?;
            if let Some(mode) = mode {
                config.density_mode = *mode;
            }
            write_file(out, &density_csv(&config, *points)?)
        }
        Command::Analyze { events, config, out } => {
            let config = ConfigFile::load(config)?.to_run_config()?;
            let text = std::fs::read_to_string(events).map_err(|e| Error::Io(format!("{}: {e}", events.display())))?;
            let summary = analyze_events(&config, &text)?;
            let out = out
                .clone()
                .unwrap_or_else(|| events.parent().unwrap_or(Path::new(".")).join("summary.json"));
            write_file(&out, &summary_json(&summary)?)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn summary_json(summary: &RunSummary) -> Result<String> {
    let mut s = serde_json::to_string_pretty(summary).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Uniform θ grid over `[−θmax, θmax]` as `theta_rad,density_per_rad` rows.
pub fn density_table(config: &RunConfig, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if points < 2 {
        return Err(Error::Config(format!("--points must be at least 2, got {points}")));
    }
    let model = config.model()?;
    let tm = config.theta_max;
    // integer numerator keeps the grid exactly antisymmetric
    let last = (points - 1) as f64;
    let thetas: Vec<f64> = (0..points).map(|i| tm * (2.0 * i as f64 - last) / last).collect();
    let density = thetas.iter().map(|&t| model.density(t)).collect::<Result<Vec<f64>>>()?;
    Ok((thetas, density))
}

pub fn density_csv(config: &RunConfig, points: usize) -> Result<String> {
    let (thetas, density) = density_table(config, points)?;
    let mut out = String::from("theta_rad,density_per_rad\n");
    for (t, d) in thetas.iter().zip(&density) {
        let _ = writeln!(out, "{t:.16e},{d:.16e}");
    }
    Ok(out)
}

pub fn simulate(config: &RunConfig, out_dir: &Path, workers: usize) -> Result<()> {
    let analysis = Analysis::new(config)?;
    let events = analysis.events(config, workers)?;
    let summary = analysis.summarize(config, &events)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    write_file(
        &out_dir.join("events.csv"),
        &write_events(&config.digest(), config.seed, &events),
    )?;
    write_file(&out_dir.join("summary.json"), &summary_json(&summary)?)?;
    let n = events.len();
    write_file(
        &out_dir.join("histogram.svg"),
        &svg::histogram_svg(
            &summary.histogram,
            &format!("Cross section of the pattern, {n} particles"),
        ),
    )?;
    let (thetas, density) = density_table(config, DENSITY_PANEL_POINTS)?;
    write_file(
        &out_dir.join("density.svg"),
        &svg::density_svg(&thetas, &density, "Angular probability density"),
    )?;
    let range = (analysis.edges[0], analysis.edges[analysis.edges.len() - 1]);
    write_file(
        &out_dir.join("impacts.svg"),
        &svg::impacts_svg(
            &events,
            range,
            config.seed,
            &format!("Impacts on the screen, {n} particles"),
        ),
    )?;
    Ok(())
}

/// Summary of a stored event list. The file's digest must match `config`;
/// its seed and particle count replace the configured ones.
pub fn analyze_events(config: &RunConfig, text: &str) -> Result<RunSummary> {
    let file = read_events(text, &config.geometry, config.propagation_mode)?;
    let expected = config.digest();
    if file.config_digest != expected {
        return Err(Error::DigestMismatch {
            expected,
            found: file.config_digest,
        });
    }
    let mut config = config.clone();
    config.seed = file.seed;
    config.n_particles = file.n_particles;
    Analysis::new(&config)?.summarize(&config, &file.events)
}
