//! `he4q` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or configuration, 3 numerical
//! non-convergence, 4 I/O failure. Diagnostics go to standard error.

mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::error::ModelError;
pub use config::{OutputFormat, RunConfig};
pub use table::{Cell, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(ModelError::Convergence { .. }) => EXIT_CONVERGENCE,
            CliError::Model(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "he4q", version, about = "Superfluid helium-4 resonator model")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format; overrides the configuration file.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Cell radius, m.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Cell length, m.
    #[arg(long, global = true)]
    pub length: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the attenuation and Q of one mode over temperature (log-spaced).
    Qcurve {
        #[arg(long, default_value_t = 8112.0)]
        freq: f64,
        #[arg(long, default_value_t = 0.04)]
        tmin: f64,
        #[arg(long, default_value_t = 0.7)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// ³He concentration n₃/n₄.
        #[arg(long)]
        x3: Option<f64>,
        /// Container dimension for the ³He regime, m; defaults to the cell diameter.
        #[arg(long)]
        size: Option<f64>,
    },
    /// Helium temperature giving a phonon-limited quality factor.
    InvertQ {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 8112.0)]
        freq: f64,
    },
    /// Acoustic mode table up to a frequency.
    Modes {
        #[arg(long, default_value_t = 20_000.0)]
        fmax: f64,
    },
    /// Radial pressure nodes of mode (m, n).
    Nodes {
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// TE011 microwave resonance of the cell.
    Te011 {
        /// Relative permittivity; defaults to liquid helium.
        #[arg(long)]
        eps_r: Option<f64>,
    },
    /// Kapitza resistance, heat capacity, time constant and heat leak.
    Thermal {
        /// Helium temperature, K. Without it both configured anchors are reported.
        #[arg(long)]
        temperature: Option<f64>,
        /// Plate temperature, K.
        #[arg(long, requires = "temperature")]
        base: Option<f64>,
    },
    /// Intracavity pump photons.
    Photons {
        /// Input power, W.
        #[arg(long)]
        power: f64,
        /// Cavity minus pump frequency, Hz.
        #[arg(long, default_value_t = 8112.0, allow_hyphen_values = true)]
        detuning_hz: f64,
    },
    /// Source phase noise needed to resolve thermal motion.
    NoiseBudget {
        #[arg(long)]
        temperature: f64,
        #[arg(long)]
        q: f64,
    },
    /// Synthesize or fit ringdown traces.
    #[command(subcommand)]
    Ringdown(RingdownCommand),
    /// Configuration utilities.
    #[command(subcommand)]
    Config(ConfigCommand),
}

#[derive(Debug, Subcommand)]
pub enum RingdownCommand {
    /// Write a synthetic trace.
    Simulate {
        #[arg(long, default_value_t = 8112.0)]
        freq: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        a0: f64,
        /// Sample rate, Hz.
        #[arg(long)]
        fs: f64,
        /// Trace length, s.
        #[arg(long)]
        duration: f64,
        /// Additive Gaussian noise RMS.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the envelope instead of the oscillating signal.
        #[arg(long)]
        envelope: bool,
    },
    /// Fit Q to a trace file.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8112.0)]
        freq: f64,
        /// Demodulate a raw trace with this low-pass corner, Hz. Omit for envelopes.
        #[arg(long)]
        demod_bandwidth: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConfigCommand {
    /// Print the fully resolved configuration as JSON.
    Dump,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "he4q: {e}");
            e.exit_code()
        }
    }
}

pub fn main_with_stdio<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

fn load_config(global: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(r) = global.radius {
        cfg.geometry.radius = r;
    }
    if let Some(l) = global.length {
        cfg.geometry.length = l;
    }
    if let Some(f) = global.format {
        cfg.output = f;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(&cli.global)?;
    let text = commands::dispatch(&cli.command, &cfg)?;
    match &cli.global.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}
