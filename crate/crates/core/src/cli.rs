//! Command-line front end. Exit codes: 0 success, 1 invalid input or I/O
//! failure, 2 verification above tolerance, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{find_peaks_with, PeakOptions, DEFAULT_MASS_RADIUS, DEFAULT_MIN_SEP, DEFAULT_REL_THRESHOLD};
use crate::error::{Error, Result};
use crate::export::{export_grid, gnuplot_script, read_grid, render_heatmap, write_bytes, Colormap, GridFormat};
use crate::grid::{GridOptions, SolverMode};
use crate::oracle::IntegrationConfig;
use crate::scenario::{load_scenario, preset, Scenario};
use crate::verify::verify_scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "atomloc", version, about = "2D atom localization filter functions for a driven ladder atom")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a normalized filter-function grid.
    Grid(GridArgs),
    /// Write grid, heatmap, peak report and gnuplot script for a preset.
    Figure(FigureArgs),
    /// Report peaks and pattern of a saved grid.
    Peaks(PeaksArgs),
    /// Compare the closed form with the time-domain oracle.
    Verify(VerifyArgs),
    /// Render a saved grid as a P6 heatmap.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Preset id (fig2a … fig5b) or scenario JSON file.
    #[arg(long)]
    pub scenario: String,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: GridFormat,
    /// Override the scenario's solver (general, paper-form, oracle).
    #[arg(long)]
    pub solver: Option<SolverMode>,
    /// Interpolate from a 1D Ω table.
    #[arg(long)]
    pub fast: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Preset id, fig2a … fig5b.
    pub preset: String,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long, default_value = "gray")]
    pub colormap: Colormap,
    #[command(flatten)]
    pub peaks: PeakFlags,
}

#[derive(Debug, Args)]
pub struct PeakFlags {
    #[arg(long, default_value_t = DEFAULT_REL_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = DEFAULT_MIN_SEP)]
    pub min_sep: f64,
    /// Disk radius for per-peak mass.
    #[arg(long, default_value_t = DEFAULT_MASS_RADIUS)]
    pub radius: f64,
}

impl PeakFlags {
    fn options(&self) -> PeakOptions {
        PeakOptions { rel_threshold: self.threshold, min_sep: self.min_sep, radius: self.radius }
    }
}

#[derive(Debug, Args)]
pub struct PeaksArgs {
    /// Grid file (CSV, or JSON by extension).
    #[arg(long)]
    pub grid: PathBuf,
    #[command(flatten)]
    pub peaks: PeakFlags,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub scenario: String,
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Print every sample as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "gray")]
    pub colormap: Colormap,
}

/// Parse `argv` and run, writing normal output to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn resized(mut s: Scenario, nx: Option<usize>, ny: Option<usize>) -> Scenario {
    if let Some(nx) = nx {
        s.grid.nx = nx;
    }
    if let Some(ny) = ny {
        s.grid.ny = ny;
    }
    s
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Grid(a) => {
            let mut s = resized(load_scenario(&a.scenario)?, a.nx, a.ny);
            if let Some(solver) = a.solver {
                s.solver = solver;
            }
            let grid = s.compute_grid_with(&GridOptions { fast_table: a.fast, ..s.grid_options() })?;
            let bytes = export_grid(&grid, a.format);
            match a.out {
                Some(path) => write_bytes(&path, &bytes)?,
                None => out.write_all(&bytes).map_err(|e| Error::io("<stdout>", e))?,
            }
        }
        Command::Figure(a) => {
            let s = resized(preset(&a.preset)?, a.nx, a.ny);
            let grid = s.compute_grid()?;
            let report = find_peaks_with(&grid, &a.peaks.options())?;
            std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
            let file = |ext: &str| a.out_dir.join(format!("{}{ext}", s.name));
            let csv_name = format!("{}.csv", s.name);
            write_bytes(&file(".csv"), &export_grid(&grid, GridFormat::Csv))?;
            write_bytes(&file(".ppm"), &render_heatmap(&grid, a.colormap))?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_bytes(&file("_peaks.json"), json.as_bytes())?;
            write_bytes(&file(".gp"), gnuplot_script(&grid, &csv_name, &s.name).as_bytes())?;
            emit(out, &format!("{}: {} peak(s), pattern {}\n", s.name, report.peaks.len(), report.pattern))?;
            for p in &report.peaks {
                emit(
                    out,
                    &format!(
                        "  ({:+.4}, {:+.4}) height {:.6e} mass {:.4} basin {:.4}\n",
                        p.u, p.v, p.height, p.mass, p.basin_mass
                    ),
                )?;
            }
        }
        Command::Peaks(a) => {
            let grid = read_grid(&a.grid)?;
            let report = find_peaks_with(&grid, &a.peaks.options())?;
            emit(out, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
        }
        Command::Verify(a) => {
            let s = load_scenario(&a.scenario)?;
            let report = verify_scenario(&s, a.samples, &IntegrationConfig::default())?;
            if a.json {
                emit(out, &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
            }
            emit(out, &format!("{}: max deviation {:.3e} over {} samples\n", s.name, report.max_deviation, a.samples))?;
            if !report.passes(a.tol) {
                emit(out, &format!("FAILED: above tolerance {:e}\n", a.tol))?;
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Render(a) => {
            let grid = read_grid(&a.grid)?;
            write_bytes(&a.out, &render_heatmap(&grid, a.colormap))?;
        }
    }
    Ok(EXIT_OK)
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
