//! `qpdnls`: simulation, verification and experiment driver.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpdnls::Error;

#[derive(Parser, Debug)]
#[command(name = "qpdnls", version, about = "Fourier-lattice toolkit for the derivative NLS with quasi-periodic data")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Artifact directory, created if absent.
    #[arg(long, global = true, default_value = "qpdnls-out")]
    pub out: PathBuf,
    /// Overrides the seed of random initial data.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Table format; JSON summaries are always written.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the Fourier system c' = -i<n>^2 c + s eps i<n> N(c) with the
    /// configured scheme: the Picard fixed point of the Duhamel map or the
    /// interaction-picture RK4 integrator. Writes the trajectory, the mass,
    /// momentum and energy monitors, and a decay certificate at rate kappa/2
    /// against the decay constant C.
    Solve,
    /// Write the Picard iterates c_0..c_K on the configured mesh, with
    /// c_0 = e^{-i<n>^2 t} c(n) and c_k the Duhamel map applied to c_{k-1}.
    Picard {
        /// Number of iterates K; defaults to the configured cap.
        #[arg(long)]
        iterates: Option<usize>,
    },
    /// Check the branch-tree identities sigma = ell + 1/2, index length
    /// 2 sigma, index weight ell and the P_k recursion against enumeration
    /// for every branch of depth <= D, the bound M_k <= 3/2 on [0, 4/81],
    /// and the factorial sums met by the G^(k) families.
    VerifyCombinatorics {
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
    },
    /// Check the scalar inequalities y^m e^{-Ky} <= m! K^{-m},
    /// sum e^{-K|m|} <= 3/K and n! >= (n/e)^n, the weighted lattice sums
    /// against e^{-kappa|n|/2}(12/kappa)^{|alpha|+nu r} alpha! and
    /// (6/kappa)^{|alpha|+nu r} alpha!, and the factorial sum over A(N, L)
    /// against (2N)^L for N, L <= 8.
    VerifyBounds,
    /// Print the decay constant C = 3/2 B^{1/2} (12/kappa)^nu, the existence
    /// times t1..t4 and the Cauchy constants C', C'' as JSON.
    Bounds {
        #[arg(long = "B")]
        b: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        nu: usize,
        #[arg(long)]
        omega_norm: f64,
    },
    /// Weak-nonlinearity sweep: integrate to t = |eps|^{-1+eta} for each eps
    /// and compare with the linear flow in the coefficient l1 norm and the
    /// analytic norm of rate varrho, with 0 < kappa/4 - 4 varrho <= 1.
    Asymptotics {
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        /// Defaults to kappa/32.
        #[arg(long)]
        varrho: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
        eps: Vec<f64>,
    },
    /// Compare two solution producers in sup_n e^{kappa|n|/4} |c - d| on the
    /// uniqueness window [0, min(t4, t_end)].
    Uniqueness {
        /// picard, rk4 or picard_double_box.
        #[arg(long, default_value = "picard")]
        first: String,
        #[arg(long, default_value = "rk4")]
        second: String,
    },
    /// Weighted differences of consecutive Picard iterates at rate kappa/4
    /// against C' (12 e C^2 (24/kappa)^{2nu+1} |omega| t)^k.
    Cauchy {
        #[arg(long, default_value_t = 6)]
        iterates: usize,
    },
}

/// Exit status: 0 all assertions pass, 1 an assertion failed, 2 bad input,
/// 3 an enumeration budget was exceeded.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match cli.command {
        Command::Solve => commands::solve(&cli.common),
        Command::Picard { iterates } => commands::picard(&cli.common, iterates),
        Command::VerifyCombinatorics { max_depth } => commands::verify_combinatorics(&cli.common, max_depth),
        Command::VerifyBounds => commands::verify_bounds(&cli.common),
        Command::Bounds { b, kappa, nu, omega_norm } => commands::bounds(&cli.common, b, kappa, nu, omega_norm),
        Command::Asymptotics { eta, varrho, eps } => commands::asymptotics(&cli.common, eta, varrho, &eps),
        Command::Uniqueness { first, second } => commands::uniqueness(&cli.common, &first, &second),
        Command::Cauchy { iterates } => commands::cauchy(&cli.common, iterates),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
