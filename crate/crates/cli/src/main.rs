use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "weyl",
    version,
    about = "Exact Weyl-structure calculus on |k|-graded semisimple Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an algebra in its Chevalley basis
    Algebra,
    /// Grading summary for a set of crossed nodes
    Grade,
    /// Block ranks and cohomology dimensions of the Lie algebra cohomology of g_-
    Cohomology,
    /// Scaling-element verdicts and the scale functional
    Scales,
    /// Change-of-Weyl-structure transforms with oracle residuals
    Transform,
    /// Normalization recursion for the Rho-tensor
    Normalize {
        /// Generate plant-and-recover data from this seed instead of reading `--in`
        #[arg(long)]
        synthetic: Option<u64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Series letter A-G
    #[arg(long, global = true)]
    pub series: Option<char>,
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Crossed nodes, 1-based and comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub cross: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub arity: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 20)]
    pub fixtures: usize,
    /// Worker threads; results do not depend on this
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Run the invariant suite and report pass/fail per invariant
    #[arg(long, global = true)]
    pub check: bool,
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config;
    if let Some(n) = cfg.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let result = match cli.command {
        Command::Algebra => commands::algebra(&cfg),
        Command::Grade => commands::grade(&cfg),
        Command::Cohomology => commands::cohomology(&cfg),
        Command::Scales => commands::scales(&cfg),
        Command::Transform => commands::transform(&cfg),
        Command::Normalize { synthetic } => commands::normalize(&cfg, synthetic),
    };
    match result.and_then(|report| commands::emit(&cfg, &report).map(|()| report.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
