use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use sothardy::cli::{execute, Claim, Command, Format, RunConfig};
use sothardy::{Exponent, C64};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Fourier,
    Poisson,
    Norm,
    Boundary,
    Gallery,
    Verify,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClaimArg {
    Isometry,
    Contraction,
    Adjoint,
    Roundtrip,
    Containment,
    #[value(name = "poisson_convergence")]
    PoissonConvergence,
}

/// Operator-valued Hardy space toolkit: Fourier coefficients, Poisson
/// extensions, norms, radial boundaries, gallery functions and verification
/// reports. Exit status: 0 pass, 1 verification failure, 2 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "sothardy", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// JSON function spec.
    #[arg(long)]
    spec: PathBuf,
    /// Number of circle nodes.
    #[arg(long)]
    grid: Option<usize>,
    /// Radius ladder levels K (radii 1 - 2^-k, k = 1..K).
    #[arg(long)]
    ladder: Option<usize>,
    /// Exponent: 1, 2, inf or a decimal >= 1.
    #[arg(long, default_value = "2")]
    p: Exponent,
    /// Artifact path; without it the artifact goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Seed for random matrix polynomials without their own seed and for probe vectors.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance (boundary extraction, roundtrip, convergence) or net radius (gallery).
    #[arg(long)]
    tol: Option<f64>,
    /// Claim checked by `verify`.
    #[arg(long, value_enum)]
    claim: Option<ClaimArg>,
    /// Point of the open disk, as two decimals.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    zeta: Option<Vec<f64>>,
}

impl From<Args> for RunConfig {
    fn from(a: Args) -> Self {
        let command = match a.command {
            CommandArg::Fourier => Command::Fourier,
            CommandArg::Poisson => Command::Poisson,
            CommandArg::Norm => Command::Norm,
            CommandArg::Boundary => Command::Boundary,
            CommandArg::Gallery => Command::Gallery,
            CommandArg::Verify => Command::Verify,
        };
        RunConfig {
            command,
            spec_path: a.spec,
            grid_n: a.grid,
            ladder_k: a.ladder,
            p: a.p,
            out_path: a.out,
            format: match a.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            },
            seed: a.seed,
            tol: a.tol,
            claim: a.claim.map(|c| match c {
                ClaimArg::Isometry => Claim::Isometry,
                ClaimArg::Contraction => Claim::Contraction,
                ClaimArg::Adjoint => Claim::Adjoint,
                ClaimArg::Roundtrip => Claim::Roundtrip,
                ClaimArg::Containment => Claim::Containment,
                ClaimArg::PoissonConvergence => Claim::PoissonConvergence,
            }),
            zeta: a.zeta.map(|z| C64::new(z[0], z[1])),
        }
    }
}

fn main() -> ExitCode {
    let config = RunConfig::from(Args::parse());
    ExitCode::from(execute(&config) as u8)
}
