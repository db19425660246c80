//! `apostol`: reproducible tables of Apostol-Bernoulli and Apostol-Euler
//! values, approximation errors, quotients and oscillation diagnostics.
//!
//! Data goes to stdout (or `--output`), logs and errors to stderr. Exit codes:
//! 0 success, 2 invalid input, 3 numerical failure.

mod commands;
mod parse;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use apostol_core::{Error, ParamContext, PrecisionConfig, TruncationKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::commands::Run;
use crate::parse::{
    parse_complex, parse_index_range, parse_range, parse_z, ComplexArg, DegreeRange, IndexRange, ZSpec,
};
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(name = "apostol", version, about = "Apostol-Bernoulli and Apostol-Euler tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits (at least 53).
    #[arg(long, global = true, env = "APOSTOL_PRECISION_BITS", default_value_t = 128)]
    bits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact scaled values B_n(z; lambda) / n!.
    Eval(Common),
    /// Truncated pole sums with certified error bounds.
    Approx(WithSet),
    /// Exact value, pole sum, true error and certified bound per degree.
    ErrorTable(WithSet),
    /// Successive quotients (beta_{n+1} - 1) / (beta_n - 1).
    Quotients(Common),
    /// Leading oscillation of beta_n for real lambda and the residual after it.
    Oscillate(Common),
    /// Fourier coefficients by quadrature against the closed form.
    FourierCheck(Fourier),
    /// Apostol-Euler values E_n(z; lambda) / (2 n!), pole sums and normalization.
    Euler(WithSet),
    /// Residuals of the duplication formula.
    Duplication(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Complex parameter: a, bi, a+bi or polar(r,turns).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: ComplexArg,

    /// A complex point or a real grid from..to[..step].
    #[arg(long, value_parser = parse_z, allow_hyphen_values = true, default_value = "0")]
    z: ZSpec,

    /// Degrees, inclusive: a..b or a single value.
    #[arg(long, value_parser = parse_range)]
    n: DegreeRange,
}

#[derive(Debug, Args)]
struct WithSet {
    #[command(flatten)]
    common: Common,

    /// Truncation size.
    #[arg(long, default_value_t = 0)]
    m: u32,

    /// Truncation kind: Zm, Zm+ or Zm- (default depends on lambda).
    #[arg(long)]
    kind: Option<TruncationKind>,
}

#[derive(Debug, Args)]
struct Fourier {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    lambda: ComplexArg,

    #[arg(long, value_parser = parse_range)]
    n: DegreeRange,

    /// Fourier indices, inclusive.
    #[arg(long, value_parser = parse_index_range, allow_hyphen_values = true, default_value = "-2..2")]
    k: IndexRange,
}

/// A failure reported as JSON on stderr.
struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match &e {
            Error::QuadratureNonConvergence { .. } => ("quadrature_non_convergence", 3),
            Error::ZeroLambda => ("zero_lambda", 2),
            Error::ExcludedPole { .. } => ("excluded_pole", 2),
            Error::InadmissibleKind { .. } => ("inadmissible_kind", 2),
            Error::EmptySet => ("empty_set", 2),
            Error::InvalidArgument(_) => ("invalid_argument", 2),
            Error::InvalidPrecision(_) => ("invalid_precision", 2),
            Error::DomainError(_) => ("domain_error", 2),
            Error::UnitLambda => ("unit_lambda", 2),
            Error::MinusOneLambda => ("minus_one_lambda", 2),
            Error::WrongClass { .. } => ("wrong_class", 2),
            Error::NotReduced { .. } => ("not_reduced", 2),
            Error::NotRationalAngle { .. } => ("not_rational_angle", 2),
            Error::TooCloseToExceptional { .. } => ("too_close_to_exceptional", 2),
        };
        Failure {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

fn usage(kind: &'static str, message: String) -> Failure {
    Failure { kind, message, code: 2 }
}

fn build_run(lambda: &ComplexArg, z: Option<&ZSpec>, n: DegreeRange, bits: u32) -> Result<Run, Failure> {
    let prec = PrecisionConfig::with_bits(bits)?;
    let ctx = ParamContext::with_bits(lambda.to_complex(bits), bits)?;
    let zs = match z {
        Some(z) => z.points(bits).map_err(|m| usage("invalid_argument", m))?,
        None => Vec::new(),
    };
    Ok(Run {
        ctx,
        lambda_text: lambda.canonical(),
        zs,
        n,
        prec,
    })
}

fn table_for(cli: &Cli) -> Result<Table, Failure> {
    let bits = cli.bits;
    let t = match &cli.command {
        Command::Eval(c) => commands::eval(&build_run(&c.lambda, Some(&c.z), c.n, bits)?)?,
        Command::Quotients(c) => commands::quotients(&build_run(&c.lambda, Some(&c.z), c.n, bits)?)?,
        Command::Oscillate(c) => commands::oscillate(&build_run(&c.lambda, Some(&c.z), c.n, bits)?)?,
        Command::Duplication(c) => commands::duplication(&build_run(&c.lambda, Some(&c.z), c.n, bits)?)?,
        Command::Approx(s) => {
            let run = build_run(&s.common.lambda, Some(&s.common.z), s.common.n, bits)?;
            commands::approx(&run, s.kind, s.m)?
        }
        Command::ErrorTable(s) => {
            let run = build_run(&s.common.lambda, Some(&s.common.z), s.common.n, bits)?;
            commands::error_table_cmd(&run, s.kind, s.m)?
        }
        Command::Euler(s) => {
            let run = build_run(&s.common.lambda, Some(&s.common.z), s.common.n, bits)?;
            commands::euler(&run, s.kind, s.m)?
        }
        Command::FourierCheck(f) => commands::fourier_check(&build_run(&f.lambda, None, f.n, bits)?, f.k)?,
    };
    Ok(t)
}

fn emit(cli: &Cli, t: &Table) -> io::Result<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = BufWriter::new(sink);
    match cli.format {
        Format::Json => t.write_json(&mut w)?,
        Format::Csv => t.write_csv(&mut w)?,
    }
    w.flush()
}

fn report(f: &Failure) -> ExitCode {
    let v = json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } });
    eprintln!("{v}");
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&usage("usage", e.render().to_string().trim().to_string())),
    };
    let table = match table_for(&cli) {
        Ok(t) => t,
        Err(f) => return report(&f),
    };
    log::info!("{} rows for {}", table.rows.len(), table.command);
    match emit(&cli, &table) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&usage("io", e.to_string())),
    }
}
