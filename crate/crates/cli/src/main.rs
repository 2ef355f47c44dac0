//! `boflow` command-line front end.
//!
//! Exit status: 0 success, 1 failed validation checks, 2 usage or configuration
//! error, 3 numerical failure.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use boflow::Error;
use clap::{Args, Parser, Subcommand};

use commands::{FailureReport, Outcome};
use config::{Method, RunConfig};
use output::OutputDir;

#[derive(Parser)]
#[command(name = "boflow", version, about = "Explicit Benjamin-Ono solutions on the torus and the line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a periodic datum by the explicit formula and/or the reference solver.
    SolveTorus(Overrides),
    /// Evaluate the explicit formula on the line.
    SolveLine(Overrides),
    /// Run the operator-identity and dynamics checks.
    Validate(Overrides),
    /// Tabulate explicit-vs-solver differences over times, resolutions and steps.
    Compare(Overrides),
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// JSON run configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Preset such as `cos`, `twomode:a=1,b=0.5` or `lorentzian:c=1`.
    #[arg(long)]
    preset: Option<String>,
    /// Datum file: torus `.json` coefficients or `.csv` samples; line `.csv` samples.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Comma-separated times.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true)]
    t: Option<Vec<f64>>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    eps: Option<f64>,
    /// Check group for `validate`.
    #[arg(long)]
    only: Option<String>,
}

impl Overrides {
    fn apply(&self, name: &str) -> boflow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        if let Some(v) = &self.preset {
            c.preset = Some(v.clone());
            c.datum_file = None;
        }
        if let Some(v) = &self.datum {
            c.datum_file = Some(v.clone());
            c.preset = None;
        }
        if let Some(v) = &self.t {
            c.times = v.clone();
        }
        if let Some(v) = self.n {
            c.n = v;
            c.modes.clear();
            c.suite.torus_max_mode = v;
        }
        if let Some(v) = self.dt {
            c.dt = v;
            c.dts.clear();
            c.suite.lax.dt = v;
        }
        if let Some(v) = self.method {
            c.method = v;
        }
        if let Some(v) = self.eps {
            c.line.eps = v;
        }
        if let Some(v) = &self.only {
            c.only = Some(v.clone());
        }
        if self.only.is_some() && name != "validate" {
            log::warn!("--only has no effect on {name}");
        }
        c.validate()?;
        Ok(c)
    }
}

fn configure_threads() -> boflow::Result<()> {
    let Ok(v) = std::env::var("BOX_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Configuration(format!("BOX_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Configuration(format!("cannot configure {threads} worker threads: {e}")))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LinearAlgebra { .. } | Error::Conditioning { .. } | Error::BlowUp { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> ExitCode {
    let (name, overrides, run): (&str, &Overrides, fn(&RunConfig, &mut OutputDir) -> boflow::Result<Outcome>) =
        match &cli.command {
            Command::SolveTorus(o) => ("solve-torus", o, commands::solve_torus),
            Command::SolveLine(o) => ("solve-line", o, commands::solve_line),
            Command::Validate(o) => ("validate", o, commands::validate),
            Command::Compare(o) => ("compare", o, commands::compare),
        };
    let setup = configure_threads().and_then(|_| overrides.apply(name)).and_then(|c| {
        let out = OutputDir::prepare(&c.out)?;
        Ok((c, out))
    });
    let (config, mut out) = match setup {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = run(&config, &mut out);
    let code = match &result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::ChecksFailed(k)) => {
            eprintln!("{k} check(s) failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(e);
            if code == 3 {
                let path = out.file("error.json");
                if let Err(w) = boflow::io::write_json(&path, &FailureReport::new(e)) {
                    eprintln!("error: cannot write failure report: {w}");
                }
            }
            code
        }
    };
    if let Err(e) = out.finish(name, &config) {
        eprintln!("error: cannot write manifest: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    run(Cli::parse())
}
