//! The `weil` command line: `gens`, `image` and `verify`.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 invalid mathematical input
//! (a non-symplectic matrix), 4 failed verification, 1 I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::field::{make_field, Field, FieldError};
use crate::io::{parse_field, parse_sp_matrix, write_gap, write_json, write_magma, IoError, OutputDocument};
use crate::linops::DenseMatrix;
use crate::symplectic::{decompose, decompose_randomized, evaluate_word, SymplecticError};
use crate::verify::{closure_check, run_relation_suite, CheckStatus};
use crate::weilgen::{WeilGeneratorSet, WeilParams};
use crate::weilmodule::{weil_image_irreducible, Irreducible, ModuleError};

#[derive(Debug, Parser)]
#[command(name = "weil", version, about = "Exact Weil representations of Sp(2l, r)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the generators lambda*C_t, D_st, U_t.
    Gens(GensArgs),
    /// Emit the Weil image of a symplectic matrix and the word used.
    Image(ImageArgs),
    /// Run the relation suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Odd prime r.
    #[arg(long)]
    r: u64,
    /// Rank l (the group is Sp(2l, r)).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    l: u64,
    /// cyclotomic | auto-prime | gf:q | gf:p^k | gf2-auto
    #[arg(long, default_value = "auto-prime")]
    field: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Magma,
    Gap,
}

#[derive(Debug, Args)]
struct GensArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also emit A_t, B_t, C_t, E_t and sigma.
    #[arg(long)]
    full: bool,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Constituent {
    Plus,
    Minus,
    Socle,
    Quotient,
}

impl From<Constituent> for Irreducible {
    fn from(c: Constituent) -> Self {
        match c {
            Constituent::Plus => Irreducible::Plus,
            Constituent::Minus => Irreducible::Minus,
            Constituent::Socle => Irreducible::Socle,
            Constituent::Quotient => Irreducible::Quotient,
        }
    }
}

#[derive(Debug, Args)]
struct ImageArgs {
    #[command(flatten)]
    common: Common,
    /// 2l x 2l matrix mod r, inline or a file path; integers separated by
    /// whitespace or commas, row-major.
    #[arg(long)]
    g: String,
    /// Restrict to an irreducible constituent.
    #[arg(long, value_enum)]
    irreducible: Option<Constituent>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Use a randomized factorization seeded by this value.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Also certify |G| = |Sp(2l, r)| by closure.
    #[arg(long)]
    closure: bool,
    /// Largest group the closure will enumerate.
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("verification failed: {0} check(s) failed")]
    Verification(usize),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::InvalidFieldSpec(msg) => CliError::Usage(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(e) => CliError::Io(e.to_string()),
            IoError::Json(e) => CliError::Io(e.to_string()),
            IoError::Symplectic(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<SymplecticError> for CliError {
    fn from(e: SymplecticError) -> Self {
        match e {
            SymplecticError::NotSymplectic => CliError::Math(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Symplectic(e) => e.into(),
            ModuleError::WrongCharacteristic { .. } => CliError::Usage(e.to_string()),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Gens(args) => gens(args, stdout),
        Command::Image(args) => image(args, stdout),
        Command::Verify(args) => verify(args, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

/// Resolves `--field` and runs `body` with the concrete field type.
macro_rules! dispatch {
    ($common:expr, $f:ident, $params:ident => $body:expr) => {{
        let spec = parse_field(&$common.field, $common.r)?;
        let ctx = make_field(&spec)?;
        crate::with_field!(ctx, $f => {
            let $params = WeilParams::new($f.clone(), $common.l as usize).map_err(|e| CliError::Usage(e.to_string()))?;
            $body
        })
    }};
}

fn with_output(out: &Option<PathBuf>, stdout: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let mut w = BufWriter::new(stdout);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn emit<F: Field>(
    w: &mut dyn Write,
    format: Format,
    f: &F,
    doc: &OutputDocument,
    matrices: &[(String, DenseMatrix<F::Elem>)],
) -> Result<(), CliError> {
    match format {
        Format::Json => write_json(w, f, doc, matrices)?,
        Format::Magma => write_magma(w, f, doc, matrices)?,
        Format::Gap => write_gap(w, f, doc, matrices)?,
    }
    Ok(())
}

fn gens(args: GensArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    dispatch!(args.common, f, params => {
        let gens = WeilGeneratorSet::new(&params);
        let doc = OutputDocument::header(f, params.ell(), &gens.lambda);
        let matrices: Vec<_> = gens.named(args.full).into_iter().map(|(n, op)| (n, op.materialize(f))).collect();
        with_output(&args.out, stdout, |w| emit(w, args.format, f, &doc, &matrices))
    })
}

fn read_matrix_arg(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(arg.to_string())
    }
}

fn image(args: ImageArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = read_matrix_arg(&args.g)?;
    dispatch!(args.common, f, params => {
        let g = parse_sp_matrix(&text, params.r(), params.ell())?;
        if !g.is_symplectic() {
            return Err(SymplecticError::NotSymplectic.into());
        }
        let gens = WeilGeneratorSet::new(&params);
        let word = match args.seed {
            Some(seed) => decompose_randomized(&g, seed)?,
            None => decompose(&g)?,
        };
        let matrix = match args.irreducible {
            Some(which) => weil_image_irreducible(&g, &gens, which.into())?,
            None => evaluate_word(&gens, &word)?.materialize(f),
        };
        let mut doc = OutputDocument::header(f, params.ell(), &gens.lambda);
        doc.g = Some(g.rows());
        doc.irreducible = args.irreducible.map(Into::into);
        doc.word = Some(word);
        let matrices = vec![("image".to_string(), matrix)];
        with_output(&args.out, stdout, |w| emit(w, args.format, f, &doc, &matrices))
    })
}

fn verify(args: VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    dispatch!(args.common, f, params => {
        let mut report = run_relation_suite(&params);
        if args.closure {
            report.checks.push(closure_check(&WeilGeneratorSet::new(&params), args.cap));
        }
        match args.format {
            ReportFormat::Text => writeln!(stdout, "{report}")?,
            ReportFormat::Json => {
                let gens = WeilGeneratorSet::new(&params);
                let mut doc = OutputDocument::header(f, params.ell(), &gens.lambda);
                doc.report = Some(serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?);
                write_json(stdout, f, &doc, &[])?;
            }
        }
        match report.count(CheckStatus::Fail) {
            0 => Ok(()),
            n => Err(CliError::Verification(n)),
        }
    })
}
