use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod checks;
mod cmd;

#[derive(Parser)]
#[command(name = "divcyl", version, about = "Divisible point sets, cylinders and small divisible codes")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Field modulus as comma-separated GF(p) coefficients, low degree first.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Worker threads.
    #[arg(long, global = true, env = "DIVCYL_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperplane (or codimension-j) spectrum of a point set or code.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        codim: usize,
    },
    /// Test divisibility of every hyperplane multiplicity.
    Divisible {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        delta: u64,
    },
    /// Cylinder construction and recognition.
    #[command(subcommand)]
    Cylinder(CylinderCmd),
    /// Exact solutions of spectrum equations.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Linear code utilities.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Classify (divisible) point sets up to equivalence.
    Enumerate(EnumerateArgs),
    /// Run the reproduction checks.
    VerifyPaper {
        /// Run a single named check.
        #[arg(long)]
        check: Option<String>,
        /// Include long-running checks.
        #[arg(long)]
        stretch: bool,
        /// List the checks and exit.
        #[arg(long)]
        list: bool,
        /// Directory holding the fixture files.
        #[arg(long, env = "DIVCYL_FIXTURES")]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum CylinderCmd {
    /// Look for an r-dimensional axis.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Try every r-space instead of the direction set.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Build the cylinder over a base of q points.
    Make {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
    },
    /// Lift into one dimension higher.
    Lift {
        #[arg(long)]
        input: PathBuf,
    },
    /// Embed into the extension field of degree h.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        h: u32,
    },
}

#[derive(Args, Clone)]
pub struct SolveOpts {
    /// Indices allowed to be nonzero, comma-separated.
    #[arg(long)]
    pub allowed: Option<String>,
    /// Extra constraints such as `a21=0,a5<=1`.
    #[arg(long)]
    pub fix: Option<String>,
    /// Report the LP bound of one variable, e.g. `a5:min`.
    #[arg(long)]
    pub bound: Option<String>,
    /// Express the other variables in these free ones, comma-separated.
    #[arg(long)]
    pub free: Option<String>,
}

#[derive(Subcommand)]
pub enum SolveCmd {
    /// Standard equations of n points in PG(v-1, q).
    Standard {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        n: u64,
        /// Add a_n = 0.
        #[arg(long)]
        spanning: bool,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Equations of a spanning q^r-divisible set of q^(r+1) points.
    Divisible {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Line equations of n points in PG(2, q) with allowed line multiplicities.
    Plane {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Subcommand)]
pub enum CodeCmd {
    /// Weight distribution.
    Weights {
        #[arg(long)]
        input: PathBuf,
    },
    /// Residual code with respect to a codeword.
    Residual {
        #[arg(long)]
        input: PathBuf,
        /// The codeword, as n digits.
        #[arg(long, conflicts_with = "message")]
        codeword: Option<String>,
        /// A message of k digits; the codeword is its encoding.
        #[arg(long)]
        message: Option<String>,
    },
    /// Canonical representative and automorphism group order.
    Canon {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        stretch: bool,
    },
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: u64,
    /// Divisibility exponent.
    #[arg(long)]
    pub r: Option<u32>,
    /// Sets only (the default unless --max-mult is given).
    #[arg(long)]
    pub projective: bool,
    /// Largest point multiplicity.
    #[arg(long)]
    pub max_mult: Option<u32>,
    #[arg(long)]
    pub v_min: Option<usize>,
    #[arg(long)]
    pub v_max: Option<usize>,
    /// Allowed hyperplane multiplicities, comma-separated.
    #[arg(long)]
    pub allowed: Option<String>,
    /// Lift the size guards.
    #[arg(long)]
    pub stretch: bool,
    /// Write one matrix per class and an index.json here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = cmd::Ctx {
        format: cli.format,
        modulus: cli.modulus,
    };
    let res = match cli.command {
        Command::Spectrum { input, codim } => cmd::spectrum(&ctx, &input, codim),
        Command::Divisible { input, delta } => cmd::divisible(&ctx, &input, delta),
        Command::Cylinder(c) => cmd::cylinder(&ctx, c),
        Command::Solve(s) => cmd::solve(&ctx, s),
        Command::Code(c) => cmd::code(&ctx, c),
        Command::Enumerate(a) => cmd::enumerate(&ctx, a),
        Command::VerifyPaper {
            check,
            stretch,
            list,
            fixtures,
        } => checks::verify(&ctx, check.as_deref(), stretch, list, fixtures),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match e.downcast_ref::<divcyl_core::Error>() {
                Some(divcyl_core::Error::Guard(msg)) => eprintln!("guard: {msg}"),
                _ => eprintln!("error: {e:#}"),
            }
            ExitCode::from(2)
        }
    }
}
