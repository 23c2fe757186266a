//! `polarcrit`: critical points on smooth varieties from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::{Document, Status};

#[derive(Parser, Debug)]
#[command(name = "polarcrit", version, about = "Critical points of polynomials on smooth varieties")]
pub struct Cli {
    /// Work modulo this prime (overrides the FIELD section).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Field override: QQ, GF(p) or `prime p`.
    #[arg(long, global = true, conflicts_with = "prime")]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON document here; `-` prints it instead of the text summary.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = RouteArg::Algorithm1)]
    pub route: RouteArg,
    /// Problem files processed concurrently.
    #[arg(long, short, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Repeat prime-field counts at a second prime and warn on disagreement.
    #[arg(long, global = true)]
    pub cross_check: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteArg {
    Algorithm1,
    Direct,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Polar-degree bound per index, with the naive comparison.
    Bound(BoundArgs),
    /// Generic polar degrees of the variety.
    Delta(FilesArgs),
    /// Critical points of the objective.
    Crit(CritArgs),
    /// Validate a parametrization against a problem.
    Check(CheckArgs),
    /// Lifting fiber of the variety.
    Fiber(FiberArgs),
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Problem file supplying DELTA, or the variety when DELTA is absent.
    pub file: Option<PathBuf>,
    /// Comma-separated polar degrees δ_1,…,δ_{d+1}.
    #[arg(long)]
    pub delta: Option<String>,
    /// Degree D of the objective (defaults to the OBJECTIVE degree).
    #[arg(long)]
    pub degree: Option<u32>,
    /// Only this index i.
    #[arg(long)]
    pub index: Option<usize>,
    /// Generator degrees for the naive comparison.
    #[arg(long)]
    pub degrees: Option<String>,
    /// Ambient dimension n.
    #[arg(long)]
    pub nvars: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FilesArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CritArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Objective polynomial (overrides OBJECTIVE).
    #[arg(long)]
    pub objective: Option<String>,
    /// Comma-separated coefficients of the output separating form.
    #[arg(long)]
    pub u_crit: Option<String>,
    /// Also compute the polar degrees and compare with the bound.
    #[arg(long)]
    pub with_bound: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// JSON parametrization, bare or inside a `crit` document.
    pub parametrization: PathBuf,
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// Also extend the fiber by the graph of the objective.
    #[arg(long)]
    pub extend: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let doc: Document = commands::run(&cli);
    let status = doc.status();
    match &cli.output {
        Some(path) if path.as_os_str() == "-" => println!("{}", doc.to_json()),
        Some(path) => {
            print!("{}", doc.text());
            if let Err(e) = std::fs::write(path, doc.to_json() + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(Status::ParseError.exit_code());
            }
        }
        None => print!("{}", doc.text()),
    }
    ExitCode::from(status.exit_code())
}
