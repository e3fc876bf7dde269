//! Command-line interface: compute spectra and maps, cross-check the
//! closed forms, and analyze stored spectra.
//!
//! Exit codes: 0 success; 2 configuration problems (bad config file,
//! unknown keys, invalid axes); 3 numerical failures (degenerate
//! evaluation points, singular systems, failed verification); 1 I/O
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wgm_scatter::commands::{
    cmd_analyze, cmd_map, cmd_spectrum, cmd_verify, resolve_threads, run_with_threads,
};
use wgm_scatter::config::{self, analyze_config, map_config, spectrum_config, verify_config, Ini};
use wgm_scatter::{Error, Result};

#[derive(Parser)]
#[command(
    name = "wgm-scatter",
    version,
    about = "Single-photon scattering spectra for two dot-loaded ring resonators on a fiber"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one axis and write all six quantities as CSV (optional SVG).
    Spectrum(RunArgs),
    /// Sweep two axes and write one quantity as CSV (optional SVG).
    Map(RunArgs),
    /// Compare the closed forms against the stationary linear system on
    /// randomly drawn parameters; print a JSON report.
    Verify(RunArgs),
    /// Detect dips, contrasts, and the transport regime of a stored
    /// spectrum CSV; print a JSON report.
    Analyze(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// INI config file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Also render an SVG to this path (spectrum and map only).
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Worker threads; falls back to WGM_SCATTER_THREADS, then all cores.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Override a config value (repeatable): --set section.key=value
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    set: Vec<String>,
}

fn load_ini(args: &RunArgs) -> Result<Ini> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        Error::Config(format!(
            "cannot read config `{}`: {e}",
            args.config.display()
        ))
    })?;
    let mut ini = config::parse_ini(&text)?;
    for raw in &args.set {
        ini.apply_override(raw)?;
    }
    Ok(ini)
}

fn reject_svg(args: &RunArgs, command: &str) -> Result<()> {
    if args.svg.is_some() {
        return Err(Error::Config(format!(
            "--svg is not supported by the {command} command"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Spectrum(args) => {
            let ini = load_ini(&args)?;
            let threads = resolve_threads(args.threads)?;
            let mut cfg = spectrum_config(&ini)?;
            if let Some(path) = args.svg {
                cfg.outputs.svg = Some(path);
            }
            run_with_threads(threads, || cmd_spectrum(&cfg))?;
            Ok(0)
        }
        Command::Map(args) => {
            let ini = load_ini(&args)?;
            let threads = resolve_threads(args.threads)?;
            let mut cfg = map_config(&ini)?;
            if let Some(path) = args.svg {
                cfg.outputs.svg = Some(path);
            }
            run_with_threads(threads, || cmd_map(&cfg))?;
            Ok(0)
        }
        Command::Verify(args) => {
            reject_svg(&args, "verify")?;
            let ini = load_ini(&args)?;
            let threads = resolve_threads(args.threads)?;
            let cfg = verify_config(&ini)?;
            let passed = run_with_threads(threads, || cmd_verify(&cfg))?;
            Ok(if passed { 0 } else { 3 })
        }
        Command::Analyze(args) => {
            reject_svg(&args, "analyze")?;
            let ini = load_ini(&args)?;
            let threads = resolve_threads(args.threads)?;
            let cfg = analyze_config(&ini)?;
            run_with_threads(threads, || cmd_analyze(&cfg))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
