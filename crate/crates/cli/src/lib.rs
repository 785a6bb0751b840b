//! Command-line front end: argument parsing, reports and exit statuses.

pub mod check;
pub mod commands;
pub mod error;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use okounkov_core::geometry::{parse_geometry, GeometrySpec};

use crate::commands::{Command, Options};
use crate::error::CliError;
use crate::report::{Format, Status};

#[derive(Debug, Parser)]
#[command(name = "okounkov", version, about = "Exact Zariski decompositions and polygons on BBF lattices")]
pub struct Cli {
    /// Geometry description (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub geometry: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write an SVG plot of the polygon.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn load_geometry(path: &std::path::Path) -> Result<GeometrySpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_geometry(&text)?)
}

pub fn run_cli(cli: &Cli) -> Output {
    let name = cli.command.name();
    let result = cli.geometry.as_deref().ok_or(CliError::MissingGeometry).and_then(|path| {
        let spec = load_geometry(path)?;
        let opts = Options { svg: cli.svg.as_deref(), samples: cli.samples, seed: cli.seed };
        commands::execute(&spec, &cli.command, &opts)
    });
    match result {
        Ok(report) => Output {
            stdout: report.render(cli.format),
            stderr: String::new(),
            code: if report.status == Status::Failed { 4 } else { 0 },
        },
        Err(e) => {
            let text = report::render_error(name, &e, cli.format);
            let (stdout, stderr) = match cli.format {
                Format::Machine => (text, String::new()),
                Format::Text => (String::new(), text),
            };
            Output { stdout, stderr, code: e.exit_code() }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(&cli),
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            if code == 0 {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
