//! Front end of the `qtd` command: argument parsing, CSV tables and JSON
//! reports around the model in `qtd_core`. Every subcommand hands its
//! numbers straight to one library call.

pub mod args;
pub mod conversion;
pub mod device;
pub mod dot;
pub mod error;
pub mod report;
pub mod spectra;
pub mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::{CliError, NOT_CONVERGED};
use crate::report::{Json, Report};

#[derive(Debug, Parser)]
#[command(name = "qtd", version, about = "Microwave-optical transduction with a quantum-dot molecule")]
pub struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Line constants of the coplanar waveguide, with optional kinetic inductance.
    Cpw(device::Cpw),
    /// External quality factor and decay rate of the coupling capacitors.
    Qext(device::Qext),
    /// Loaded Q of the lumped loss circuit versus sheet resistance.
    QloadSweep(device::QloadSweep),
    /// Intracavity photon number for a drive power.
    CalibrateNm(device::CalibrateNm),
    /// Theoretical single-photon coupling for a static dipole.
    G0Theory(device::G0Theory),
    /// Exciton branches and effective dipoles versus bias.
    AnticrossingSweep(dot::AnticrossingSweep),
    /// Effective dipole at a bias, or the bias for a dipole.
    Dipole(dot::Dipole),
    /// Excited-state splitting for a barrier Al fraction.
    TunnelSplitting(dot::TunnelSplitting),
    /// Internal conversion efficiency.
    Eta(conversion::Eta),
    /// Internal gain versus microwave photon number.
    GainSweep(conversion::GainSweep),
    /// Near-resonant efficiency versus detuning.
    DetuningSweep(conversion::DetuningSweep),
    /// Conversion bandwidth.
    Bandwidth(conversion::Bandwidth),
    /// Sideband spectrum and Bessel amplitude table.
    SidebandSim(spectra::SidebandSim),
    /// Fit a model to a CSV table.
    Fit(spectra::Fit),
    /// Divide a spectrum by the filter-etalon transmission.
    EtalonNormalize(spectra::EtalonNormalize),
    /// Run the validation checks and print a pass/fail table.
    Reproduce,
}

fn reproduce() -> (Report, bool) {
    let mut r = Report::new("reproduce");
    let results = qtd_core::reproduce::run_all();
    for c in &results {
        println!("{}", c.line());
    }
    let passed = results.iter().filter(|c| c.passed).count();
    println!("{passed} of {} checks passed", results.len());
    let rows = results
        .iter()
        .map(|c| {
            Json::object([
                ("id", Json::from(u32::from(c.id))),
                ("name", c.name.into()),
                ("passed", c.passed.into()),
            ])
        })
        .collect::<Vec<_>>();
    r.output("criteria", Json::Arr(rows))
        .output("passed", passed)
        .output("total", results.len());
    (r, passed == results.len())
}

/// Caps the rayon pool at `QTD_THREADS` when set.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QTD_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("QTD_THREADS: expected a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("QTD_THREADS: {e}")))
}

pub fn run(cli: Cli) -> ExitCode {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    let report = match &cli.command {
        Command::Reproduce => {
            let (r, ok) = reproduce();
            if let Some(path) = &cli.report {
                r.save(path)?;
            }
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Cpw(c) => c.run()?,
        Command::Qext(c) => c.run()?,
        Command::QloadSweep(c) => c.run()?,
        Command::CalibrateNm(c) => c.run()?,
        Command::G0Theory(c) => c.run()?,
        Command::AnticrossingSweep(c) => c.run()?,
        Command::Dipole(c) => c.run()?,
        Command::TunnelSplitting(c) => c.run()?,
        Command::Eta(c) => c.run()?,
        Command::GainSweep(c) => c.run()?,
        Command::DetuningSweep(c) => c.run()?,
        Command::Bandwidth(c) => c.run()?,
        Command::SidebandSim(c) => c.run()?,
        Command::Fit(c) => c.run()?,
        Command::EtalonNormalize(c) => c.run()?,
    };
    print!("{}", report.render());
    if let Some(path) = &cli.report {
        report.save(path)?;
    }
    if report.converged == Some(false) {
        eprintln!("error: fit did not converge; report written");
        return Ok(ExitCode::from(NOT_CONVERGED));
    }
    Ok(ExitCode::SUCCESS)
}
