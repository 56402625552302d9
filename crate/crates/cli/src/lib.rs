//! The `neron` command line: problem and certificate files, and the commands
//! `smooth-locus`, `desingularize` and `verify`.

pub mod cert;
pub mod problem;
pub mod text;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::info;

use neron_core::neron::{desingularize, verify_certificate, NeronConfig, DEFAULT_T_MAX};
use neron_core::smooth::{smooth_locus, SmoothOutcome, DEFAULT_SUBSET_BOUND};

pub use cert::{read_certificate, write_certificate};
pub use problem::{parse_problem, parse_problem_with, print_problem};
pub use text::ParseError;

/// The message printed when the gate `(d^3, d'^3) ⊇ (x)^N` fails.
pub const BOUND_TOO_SMALL: &str = "the bound is too small";

#[derive(Debug, Parser)]
#[command(name = "neron", version, about = "Neron desingularization over 2-dimensional local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Override the bound N of the input file.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Seed for the parameter search.
    #[arg(long, global = true, env = "NERON_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Largest relation subset tried in Jacobian searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_BOUND)]
    pub subset_bound: usize,
    /// Largest power t tried when absorbing the parameters.
    #[arg(long, global = true, default_value_t = DEFAULT_T_MAX)]
    pub t_max: u32,
    /// Largest exponent e tried for d = γ^e and radical witnesses.
    #[arg(long, global = true, default_value_t = neron_core::ideal::DEFAULT_E_MAX)]
    pub e_max: u32,
    /// Log per-step timings and ideal sizes to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Elkik ideal of B over A and whether B is standard smooth.
    SmoothLocus { file: PathBuf },
    /// Compute a desingularization certificate.
    Desingularize {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Re-check a certificate and print a pass/fail table.
    Verify { cert: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {err}")]
    Parse { path: String, err: ParseError },
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
    #[error("{0}")]
    Core(neron_core::Error),
    #[error("verification failed: {}", .0.join(", "))]
    VerifyFailed(Vec<&'static str>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(neron_core::Error::BoundTooSmall) => 2,
            _ => 1,
        }
    }
}

impl Cli {
    pub fn config(&self) -> NeronConfig {
        NeronConfig {
            seed: self.seed,
            subset_bound: self.subset_bound,
            t_max: self.t_max,
            e_max: self.e_max,
            ..NeronConfig::default()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|err| CliError::Io { path: path.display().to_string(), err })
}

fn load_problem(path: &Path, bound: Option<u32>) -> Result<neron_core::neron::Problem, CliError> {
    parse_problem_with(&read(path)?, bound).map_err(|err| CliError::Parse { path: path.display().to_string(), err })
}

fn io(path: &str) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |err| CliError::Io { path: path.to_string(), err }
}

/// Runs a command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let stdout = io("<stdout>");
    match &cli.command {
        Command::SmoothLocus { file } => {
            let p = load_problem(file, cli.bound)?;
            let b = &p.algebra;
            let clock = Instant::now();
            let rep = smooth_locus(b, cli.subset_bound);
            info!("smooth locus computed in {:?}", clock.elapsed());
            writeln!(out, "H_B/A has {} generators:", rep.elkik.generators.len()).map_err(&stdout)?;
            for (g, s) in rep.elkik.generators.iter().zip(&rep.elkik.sources) {
                writeln!(out, "  {g}    # f = {:?}, minor on {:?}", s.subset, s.cols).map_err(&stdout)?;
            }
            let gens: Vec<String> = rep.base_part.iter().map(|g| g.to_string()).collect();
            writeln!(out, "H_B/A ∩ A = ({})", gens.join(", ")).map_err(&stdout)?;
            writeln!(out, "dim A = {}, dim A/(H_B/A ∩ A) = {}", rep.dim_base, rep.dim_quotient).map_err(&stdout)?;
            let verdict = match &rep.smooth {
                SmoothOutcome::Smooth(c) => format!("standard smooth (subsystem {:?})", c.subset),
                SmoothOutcome::NotSmooth => "not standard smooth".to_string(),
                SmoothOutcome::Exhausted { bound } => format!("no standard smooth witness among subsets of size <= {bound}"),
            };
            writeln!(out, "B is {verdict}").map_err(&stdout)?;
            Ok(())
        }
        Command::Desingularize { file, output } => {
            let p = load_problem(file, cli.bound)?;
            let clock = Instant::now();
            let cert = desingularize(&p, &cli.config()).map_err(CliError::Core)?;
            info!("desingularization finished in {:?}", clock.elapsed());
            let text = write_certificate(&cert);
            let path = output.display().to_string();
            std::fs::write(output, text).map_err(io(&path))?;
            let kind = if cert.is_trivial() { "trivial certificate (B is standard smooth)" } else { "certificate" };
            writeln!(out, "wrote {kind} to {path}: B' has {} variables and {} relations, N_eff = {}",
                cert.target.nalg(), cert.target.relations.len(), cert.n_eff)
            .map_err(&stdout)?;
            Ok(())
        }
        Command::Verify { cert } => {
            let text = read(cert)?;
            let c = read_certificate(&text).map_err(|err| CliError::Parse { path: cert.display().to_string(), err })?;
            let report = verify_certificate(&c);
            write!(out, "{report}").map_err(&stdout)?;
            if report.all_passed() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed(report.failed()))
            }
        }
    }
}

/// Parses `args`, runs, reports errors on stderr and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp_millis()
        .try_init();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Core(neron_core::Error::BoundTooSmall) => eprintln!("{BOUND_TOO_SMALL}"),
                e => eprintln!("error: {e}"),
            }
            e.exit_code()
        }
    }
}
