//! `hsqed`: tables and self-checks for QED near a dielectric half-space.
//!
//! Exit status: 0 success, 1 invalid input, 2 quadrature did not converge,
//! 3 a verification criterion failed.

mod commands;
mod sweep;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use table::Format;

#[derive(Parser, Debug)]
#[command(name = "hsqed", version, about = "Photon modes, propagator and electron self-energy near a dielectric half-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Refractive index, comma-separated list allowed
    #[arg(long, global = true, value_delimiter = ',', default_value = "2")]
    pub n: Vec<f64>,
    /// Dimensionless distance p0 a, comma-separated list allowed
    #[arg(long, global = true, value_delimiter = ',', default_value = "100,200,400")]
    pub p0a: Vec<f64>,
    /// Distance from the surface in units of 1/m (shift, greens)
    #[arg(long, global = true, value_delimiter = ',')]
    pub a: Vec<f64>,
    /// Electron momentum normal to the surface, units of m
    #[arg(long, global = true, value_delimiter = ',', default_value = "0")]
    pub pz: Vec<f64>,
    /// Electron momentum parallel to the surface (along x), units of m
    #[arg(long, global = true, value_delimiter = ',', default_value = "0")]
    pub ppar: Vec<f64>,
    /// Electron mass (sets the energy unit)
    #[arg(long, global = true, default_value_t = 1.0)]
    pub mass: f64,
    /// Packet second moments <pz^2>,<ppar^2>,<px pz>,<py pz>; default is a sharp momentum
    #[arg(long, global = true, value_delimiter = ',')]
    pub moments: Option<Vec<f64>>,
    /// Quadrature tolerance (absolute and relative)
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = halfspace_qed::validation::VerifyConfig::default().seed)]
    pub seed: u64,
    /// Replace a list parameter by a range: NAME=START:STOP:COUNT[:log]
    #[arg(long, global = true)]
    pub sweep: Vec<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Reflection and transmission coefficients over a (k_par, k_z, n) grid
    Fresnel(commands::FresnelArgs),
    /// Reflected propagator kernel or static image potential
    Greens(commands::GreensArgs),
    /// Run the verification suite
    Verify(commands::VerifyArgs),
    /// Energy shift of an electron at distance a
    Shift,
    /// Quadrature against the large-distance expansion
    Asympt,
    /// The two orders of the perfect-reflector limit
    Limits,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<halfspace_qed::Error>() {
        Some(halfspace_qed::Error::NotConverged { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let common = sweep::apply(&cli.common)?;
    let (mut table, code) = commands::dispatch(&cli.command, &common)?;
    table.comments.insert(0, format!("hsqed {}", commands::describe(&cli.command, &common)));
    match &common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(common.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(common.format, &mut w)?;
        }
    }
    Ok(code)
}
