//! The `templie` command line.

mod commands;
mod output;
mod parse;

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};

pub use crate::suites::{check_cap, Suite, EXACT_CAP, SWEEP_CAP};
pub use output::{Output, Status, Table};

#[derive(Parser, Debug)]
#[command(name = "templie", version, about = "Temperley-Lieb standard modules, XXZ chains and their intertwiner")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Digits after the decimal point for evaluated numbers.
    #[arg(long, default_value_t = 12, global = true)]
    pub precision: usize,
    /// Leave the timestamp out of JSON output.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Clustering, reality and rank tolerance.
    #[arg(long, default_value_t = crate::spectral::DEFAULT_TOL, global = true)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the ordered link basis of V_{n,d} or a spin sector.
    Basis(BasisArgs),
    /// Print a matrix, exactly or evaluated at a numeric β or q.
    Matrix(MatrixArgs),
    /// Run exact verification suites.
    Verify(VerifyArgs),
    /// Numerical spectral certification.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
    /// Decompose a magnetisation sector into TL modules.
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("kind").required(true).args(["links", "spins"])))]
pub struct BasisArgs {
    /// Links of V_{N,D}.
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    pub links: Option<Vec<usize>>,
    /// Spin states of length L with S^z = S (S may be "-1/2" or "-0.5").
    #[arg(long, num_args = 2, value_names = ["L", "S"], allow_hyphen_values = true)]
    pub spins: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    /// Loop Hamiltonian H_{n,d}.
    Loop,
    /// Hermitian spin Hamiltonian on n spins.
    Spin,
    /// XXZ Hamiltonian on n spins (numeric; needs --q or --beta).
    Xxz,
    /// Intertwiner f_{n,d}.
    F,
    /// Inner product S_{n,d} = fᵀf.
    #[value(name = "S", alias = "s")]
    S,
    /// Gram matrix of V_{n,d}.
    Gram,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    pub kind: MatrixKind,
    pub n: usize,
    pub d: Option<usize>,
    /// Evaluate at this β.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Value of q for the XXZ chain: "i", "-i", "exp(0.4i)", "re,im" or a real number.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Restrict spin and XXZ matrices to the sector S^z = S.
    #[arg(long, allow_hyphen_values = true)]
    pub sector: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: Suite,
    /// Largest n in the sweep.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// A single n (with --d).
    #[arg(long, requires = "d")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub d: Option<usize>,
    #[arg(long)]
    pub p_max: Option<i64>,
    #[arg(long)]
    pub a_max: Option<i64>,
    #[arg(long)]
    pub b_max: Option<i64>,
    /// Largest sublink in the closed-form check.
    #[arg(long)]
    pub max_sub: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).args(["loop_module", "xxz", "spin", "sweep"])))]
pub struct Target {
    /// The loop Hamiltonian H_{N,D}.
    #[arg(long = "loop", num_args = 2, value_names = ["N", "D"])]
    pub loop_module: Option<Vec<usize>>,
    /// The XXZ Hamiltonian on N spins.
    #[arg(long)]
    pub xxz: Option<usize>,
    /// The hermitian spin Hamiltonian on L spins.
    #[arg(long)]
    pub spin: Option<usize>,
    /// Every loop Hamiltonian with n up to this value.
    #[arg(long)]
    pub sweep: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum SpectrumCommand {
    /// Reality of the spectrum, with diagonalisability for loop Hamiltonians.
    Reality {
        #[command(flatten)]
        target: Target,
        /// β values: "lo:hi:step", a comma list, or "default".
        #[arg(long, default_value = "default", allow_hyphen_values = true)]
        beta: String,
        /// A single q for the XXZ chain, overriding --beta.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Positive-definiteness of S_{n,d}.
    Positivity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "default", allow_hyphen_values = true)]
        beta: String,
    },
    /// Compare the spectra of H_XXZ, the loop Hamiltonians and ℍ_{n-1}.
    Inclusion {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "-1,0.7,1.7", allow_hyphen_values = true)]
        beta: String,
    },
    /// Jordan structure from numerical ranks.
    Jordan {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Smallest Gram eigenvalue over a β window and the zeros of det G.
    GramScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// "lo:hi".
        #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    pub n: usize,
    /// Magnetisation s (integer or half-integer).
    #[arg(allow_hyphen_values = true)]
    pub s: String,
    /// "generic" or the order ℓ of the root of unity.
    pub ell: String,
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeCap { .. } => 3,
        Error::InvalidParameters(_) | Error::DimensionMismatch(_) => 2,
        _ => 1,
    }
}

/// Runs one command and writes its output.
pub fn run(cli: &Cli) -> Result<Status> {
    if let Some(j) = cli.jobs {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let out = match &cli.command {
        Command::Basis(a) => commands::basis(a)?,
        Command::Matrix(a) => commands::matrix(a, cli.precision)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Spectrum(c) => commands::spectrum(c, cli.tol)?,
        Command::Decompose(a) => commands::decompose(a)?,
    };
    out.write(cli)?;
    Ok(out.status)
}
