//! Argument parsing and dispatch for the `ua` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ua_core::algebra::fuzz::Law;

use crate::commands::{self, FactorTarget, FuzzPlan, Options};
use crate::corpus::Corpus;
use crate::error::{invalid, InputError};
use crate::report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "ua", version, about = "Uniformities, congruences and completions of small algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Text,
    Jsonl,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Corpus document; the shipped standard corpus when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Highest level to evaluate on chains.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: FormatArg,
    #[arg(long, default_value_t = 8)]
    pub max_carrier: usize,
    #[arg(long, default_value_t = 16)]
    pub max_depth: usize,
    /// Record wall time per check; output is then no longer reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the lattice of compatible uniformities of an algebra.
    Lattice {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check a Mal'cev-type identity family; certificate terms by default.
    Verify {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        terms: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check lattice laws on the corpus and run seeded filter trials.
    Fuzz {
        #[arg(long)]
        seed: u64,
        /// Comma-separated law names; all laws when omitted.
        #[arg(long, value_delimiter = ',')]
        laws: Option<Vec<String>>,
        #[arg(long, default_value_t = commands::DEFAULT_TRIALS)]
        trials: usize,
        /// Only algebras whose name has this prefix.
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate an expression in the completion along a chain.
    Complete {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Factor a homomorphism, fill a square, or compare coarsenings.
    Factor {
        #[arg(long, group = "target")]
        hom: Option<String>,
        #[arg(long, group = "target")]
        square: Option<String>,
        #[arg(long, group = "target")]
        coarsening: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Lattice { common, .. }
            | Command::Verify { common, .. }
            | Command::Fuzz { common, .. }
            | Command::Complete { common, .. }
            | Command::Factor { common, .. } => common,
        }
    }
}

fn parse_laws(names: &Option<Vec<String>>) -> Result<Vec<Law>, InputError> {
    match names {
        None => Ok(Law::ALL.to_vec()),
        Some(ns) => ns
            .iter()
            .filter(|n| !n.is_empty())
            .map(|n| Law::from_name(n).ok_or_else(|| invalid(format!("unknown law `{n}`"))))
            .collect(),
    }
}

/// Runs a parsed command line and returns the report with its format.
pub fn execute(cli: &Cli) -> Result<(Report, Format), InputError> {
    let common = cli.command.common();
    let corpus = match &common.input {
        Some(p) => Corpus::read(p)?,
        None => Corpus::standard(),
    };
    let opts = Options {
        depth: common.depth,
        max_carrier: common.max_carrier,
        max_depth: common.max_depth,
        timings: common.timings,
    };
    let format = match common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Jsonl => Format::Jsonl,
    };
    let report = match &cli.command {
        Command::Lattice { algebra, .. } => commands::lattice(&corpus, algebra, &opts)?,
        Command::Verify { algebra, family, terms, .. } => commands::verify(&corpus, algebra, family, terms, &opts)?,
        Command::Fuzz { seed, laws, trials, only, .. } => {
            let laws = parse_laws(laws)?;
            let plan = FuzzPlan { laws: &laws, seed: *seed, trials: *trials, only: only.as_deref() };
            commands::fuzz(&corpus, &plan, &opts)?
        }
        Command::Complete { chain, expr, .. } => commands::complete(&corpus, chain, expr, &opts)?,
        Command::Factor { hom, square, coarsening, .. } => {
            let target = match (hom, square, coarsening) {
                (Some(h), _, _) => FactorTarget::Hom(h),
                (_, Some(s), _) => FactorTarget::Square(s),
                (_, _, Some(c)) => FactorTarget::Coarsening(c),
                _ => return Err(invalid("factor needs one of --hom, --square, --coarsening")),
            };
            commands::factor(&corpus, target, &opts)?
        }
    };
    Ok((report, format))
}

/// Full driver: parse, run, print. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if code == 0 { &mut *out as &mut dyn Write } else { &mut *err as &mut dyn Write }, "{e}");
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, format)) => {
            let _ = out.write_all(report.render(format).as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
