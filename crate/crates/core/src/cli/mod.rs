//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a validation or comparison failure, 2 on a
//! usage error (bad arguments, unreadable files).

pub mod file;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::catalog;
use crate::diversity::{pseudo_period, sweep, Dedup, Ensemble, SweepConfig};
use crate::languages::max_word_difference;
use crate::machines::{classical_analog, Machine};
use crate::matrix::{validate_unitary, ComplexSquareMatrix, TolerancePolicy};
use crate::protocol::{enumerate_language, EnumerationConfig, InitialState, MeasurementProtocol};

pub use file::{parse_machine, serialize_machine, MachineFile};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(crate::Error::InvalidConfig(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "langdiv",
    version,
    about = "Languages and language diversity of quantum and classical finite-state generators"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct LanguageArgs {
    /// Measurement period
    #[arg(long, default_value_t = 1)]
    period: usize,
    /// basis:<i>, uniform, or mixture:<i>,<j>,…
    #[arg(long, default_value = "uniform")]
    initial: String,
    #[arg(long, default_value_t = 8)]
    max_length: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Inclusive period range, `A..B`
    #[arg(long, default_value = "1..20")]
    periods: String,
    /// basis, uniform, basis+uniform or components
    #[arg(long, default_value = "basis")]
    ensemble: String,
    #[arg(long, default_value_t = 8)]
    max_length: usize,
    /// Pool languages by δ-similarity instead of rounded keys
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a machine file
    Validate { file: PathBuf },
    /// Enumerate the language generated under one protocol
    Language {
        file: PathBuf,
        #[command(flatten)]
        args: LanguageArgs,
        #[arg(long)]
        prune: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Sweep measurement periods and compute the language diversity
    Diversity {
        file: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write the classical analog of a quantum machine
    Analog {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smallest k with U^k equal to the identity up to a global phase
    PseudoPeriod {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_k: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check whether two machines generate δ-similar languages
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        args: LanguageArgs,
        #[arg(long, default_value_t = 1e-9)]
        delta: f64,
    },
    /// Write a built-in machine; lists the built-ins when no name is given
    Examples {
        name: Option<String>,
        /// Kicked-top phase parameter
        #[arg(long, default_value_t = catalog::DEFAULT_KICK_PHASE)]
        phase: f64,
        /// Emit the classical analog instead
        #[arg(long)]
        analog: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full report: languages by period, counts under every ensemble, and
    /// the classical analog comparison
    Report {
        file: PathBuf,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Parses `A..B`, `A..=B` or a single period `P`.
pub fn parse_period_range(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid period range `{text}`, expected A..B"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let p = num(text)?;
            (p, p)
        }
    };
    if a == 0 {
        return Err(CliError::Usage("periods start at 1".into()));
    }
    Ok((a, b))
}

fn load(path: &Path) -> Result<Machine, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_machine(&text)
}

fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let (first_period, last_period) = parse_period_range(&args.periods)?;
    let ensemble: Ensemble = args
        .ensemble
        .parse()
        .map_err(|e: crate::Error| CliError::Usage(e.to_string()))?;
    Ok(SweepConfig {
        first_period,
        last_period,
        ensemble,
        max_length: args.max_length,
        dedup: args.delta.map_or(Dedup::CanonicalKey, Dedup::DeltaSimilar),
        ..Default::default()
    })
}

fn protocol(machine: &Machine, args: &LanguageArgs) -> Result<MeasurementProtocol, CliError> {
    let initial = InitialState::parse(&args.initial, machine.dim())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    MeasurementProtocol::new(args.period, initial).map_err(|e| CliError::Usage(e.to_string()))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { file } => {
            let m = load(&file)?;
            writeln!(
                out,
                "ok: {} machine, {} states, alphabet {{{}}}, deterministic: {}",
                m.kind(),
                m.dim(),
                m.alphabet().symbols().join(","),
                if m.is_deterministic() { "yes" } else { "no" }
            )?;
        }
        Command::Language {
            file,
            args,
            prune,
            format,
        } => {
            let m = load(&file)?;
            let p = protocol(&m, &args)?;
            let mut cfg = EnumerationConfig::new(args.max_length);
            if let Some(theta) = prune {
                cfg.prune_threshold = theta;
            }
            let lang = enumerate_language(&m, &p, &cfg)?;
            let text = match format {
                Format::Table => report::language_table(&lang, p.period(), p.initial()),
                Format::Json => report::language_json(&lang, p.period(), p.initial()),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Diversity { file, sweep: s, format } => {
            let m = load(&file)?;
            let rep = sweep(&m, &sweep_config(&s)?)?;
            let text = match format {
                Format::Table => report::diversity_table(&m, &rep),
                Format::Json => report::diversity_json(&m, &rep),
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Analog { file, output } => match load(&file)? {
            Machine::Quantum(q) => {
                let g = Machine::Classical(classical_analog(&q));
                emit(out, output.as_deref(), &serialize_machine(&g))?;
            }
            Machine::Classical(_) => {
                return Err(CliError::Validation(
                    "the classical analog is defined for quantum machines only".into(),
                ))
            }
        },
        Command::PseudoPeriod { file, max_k, tol } => {
            let u = match load(&file)? {
                Machine::Quantum(q) => q.unitary().clone(),
                Machine::Classical(g) => {
                    let t = ComplexSquareMatrix::from_real(g.transition());
                    if !validate_unitary(&t, TolerancePolicy::default().structural) {
                        return Err(CliError::Validation(
                            "transition matrix is not a permutation; no pseudo-period".into(),
                        ));
                    }
                    t
                }
            };
            match pseudo_period(&u, max_k, tol)? {
                Some(k) => writeln!(out, "{k}")?,
                None => writeln!(out, "not detected within k ≤ {max_k}")?,
            }
        }
        Command::Compare {
            first,
            second,
            args,
            delta,
        } => {
            let a = load(&first)?;
            let b = load(&second)?;
            let cfg = EnumerationConfig::new(args.max_length);
            let la = enumerate_language(&a, &protocol(&a, &args)?, &cfg)?;
            let lb = enumerate_language(&b, &protocol(&b, &args)?, &cfg)?;
            let diff = max_word_difference(&la, &lb)?;
            let similar = diff <= delta;
            writeln!(
                out,
                "max word difference {diff:.3e}; {} at δ = {delta:e}",
                if similar { "similar" } else { "not similar" }
            )?;
            return Ok(if similar { 0 } else { 1 });
        }
        Command::Examples {
            name,
            phase,
            analog,
            output,
        } => match name {
            None => {
                for n in catalog::NAMES {
                    writeln!(out, "{n}")?;
                }
            }
            Some(name) => {
                let m = catalog::by_name(&name, phase, analog)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                emit(out, output.as_deref(), &serialize_machine(&m))?;
            }
        },
        Command::Report { file, sweep: s, format } => {
            let m = load(&file)?;
            let cfg = sweep_config(&s)?;
            let main = sweep(&m, &cfg)?;
            let per: Vec<_> = Ensemble::ALL
                .iter()
                .map(|&e| Ok((e, sweep(&m, &SweepConfig { ensemble: e, ..cfg.clone() })?)))
                .collect::<Result<_, CliError>>()?;
            let analog = match &m {
                Machine::Quantum(q) => Some(sweep(&Machine::Classical(classical_analog(q)), &cfg)?),
                Machine::Classical(_) => None,
            };
            let full = report::FullReport {
                machine: &m,
                main: &main,
                per_ensemble: per.iter().map(|(e, r)| (*e, r)).collect(),
                analog: analog.as_ref(),
            };
            let text = match format {
                Format::Table => report::full_report_table(&full),
                Format::Json => report::full_report_json(&full),
            };
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(0)
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
