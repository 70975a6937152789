//! The `polywheel` command line. [`run`] never touches the process: it
//! returns the exit code and both output streams, so tests can drive it
//! directly.
//!
//! Exit codes: 0 success, 1 a verify suite found a violation, 2 malformed
//! input or usage, 3 missing data (absent file, incomplete Chern table),
//! 4 manifold outside the range where the formula holds.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::diagrams::{DiagramError, DiagramSketch, GraphVector};
use crate::polywheels::{monomial_degree, parse_expression, PolywheelError};
use crate::rw::{beta_eval, compute_beta_table, index_records, rw_invariant_b, ChernTable, Manifold, RwError, Series};
use crate::series::{SeriesError, TruncSeries};
use crate::verify::{verify_polywheels, verify_published, verify_sheffer, verify_sl2, SuiteReport, VerifyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            exit_code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "polywheel",
    version,
    about = "Exact Jacobi-diagram, polywheel and Rozansky-Witten computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// β and affine coefficients of every connected polywheel up to a degree.
    Table {
        /// Chern number CSV; defaults to the bundled table.
        #[arg(long)]
        chern: Option<PathBuf>,
        /// Largest ‖λ‖.
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// β of a polywheel expression on Hilb^n or K_n.
    Beta(InvariantArgs),
    /// The integrated invariant b of a homogeneous polywheel expression.
    B(InvariantArgs),
    /// Operations on diagram files.
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Invariant suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Truncated power series in t.
    #[command(subcommand)]
    Series(SeriesCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(clap::Args, Debug)]
struct InvariantArgs {
    /// Expression such as `k[2]^2 - 3*c[4,2]`.
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    #[arg(long)]
    manifold: Series,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    chern: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum DiagramCommand {
    /// Canonical form with sign, or `0`.
    Canon { file: PathBuf },
    /// Sum over pair partitions of all legs.
    Closure {
        file: PathBuf,
        /// Keep only connected diagrams.
        #[arg(long)]
        connected: bool,
    },
    /// Glue two univalent vertices, named by their ids.
    Glue { file: PathBuf, u: String, v: String },
    /// Sum over bijections between the legs of two diagrams.
    Pair { left: PathBuf, right: PathBuf },
    /// Sum over unordered leg pairs of the glued diagrams.
    Partial { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// sl₂ commutators on every canonical diagram within the flag bound.
    Sl2 {
        #[arg(long, default_value_t = 10)]
        max_flags: usize,
    },
    /// Shifted Sheffer identities and reversion on seeded random series.
    Sheffer {
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Moment-cumulant transforms against diagram closures and the published lists.
    Polywheels {
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Diff of computed values against the published tables.
    #[command(name = "against-paper")]
    Published {
        /// Chern number CSV to diff instead of the bundled one.
        #[arg(long)]
        chern: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCommand {
    Exp(SeriesArg),
    Log(SeriesArg),
    Reversion(SeriesArg),
    /// `f(g(t))`.
    Compose {
        #[arg(allow_hyphen_values = true)]
        outer: String,
        #[arg(allow_hyphen_values = true)]
        inner: String,
        #[arg(long)]
        order: usize,
    },
}

#[derive(clap::Args, Debug)]
struct SeriesArg {
    /// Literal such as `1 - 1/2*t + t^3`.
    #[arg(allow_hyphen_values = true)]
    series: String,
    #[arg(long)]
    order: usize,
}

struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl ToString) -> Failure {
    Failure {
        code,
        msg: msg.to_string(),
    }
}

impl From<RwError> for Failure {
    fn from(e: RwError) -> Self {
        let code = match e {
            RwError::MissingChern { .. } | RwError::MissingRecord(_) => 3,
            RwError::OutOfRange { .. } => 4,
            _ => 2,
        };
        fail(code, e)
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        fail(2, e)
    }
}

impl From<PolywheelError> for Failure {
    fn from(e: PolywheelError) -> Self {
        fail(2, e)
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        fail(2, e)
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Rw(e) => e.into(),
            e => fail(2, e),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandResult::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) => r,
        Err(f) => CommandResult {
            exit_code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.msg),
        },
    }
}

fn dispatch(cmd: Command) -> Result<CommandResult, Failure> {
    match cmd {
        Command::Table {
            chern,
            max_degree,
            format,
        } => cmd_table(chern.as_deref(), max_degree, format),
        Command::Beta(a) => cmd_invariant(&a, false),
        Command::B(a) => cmd_invariant(&a, true),
        Command::Diagram(d) => cmd_diagram(d),
        Command::Verify(v) => cmd_verify(v),
        Command::Series(s) => cmd_series(s),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(3, format!("cannot read {}: {e}", path.display())))
}

fn load_chern(path: Option<&Path>) -> Result<ChernTable, Failure> {
    match path {
        None => Ok(ChernTable::bundled()),
        Some(p) => {
            let text = read_file(p)?;
            ChernTable::parse(&text).map_err(|e| fail(2, format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_table(chern: Option<&Path>, max_degree: u32, format: Format) -> Result<CommandResult, Failure> {
    let table = load_chern(chern)?;
    let recs = compute_beta_table(max_degree, &table)?;
    let header = ["partition", "beta_kummer", "beta_hilb", "a", "c"];
    let rows: Vec<[String; 5]> = recs
        .iter()
        .map(|r| {
            [
                r.lambda.encode("+"),
                r.beta_kummer.to_string(),
                r.beta_hilb.to_string(),
                r.a.to_string(),
                r.c.to_string(),
            ]
        })
        .collect();
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in &rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        Format::Text => {
            let mut width = header.map(str::len);
            for r in &rows {
                for (w, cell) in width.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: [&str; 5]| {
                let mut s = format!("{:<w$}", cells[0], w = width[0]);
                for (cell, w) in cells[1..].iter().zip(&width[1..]) {
                    let _ = write!(s, "  {cell:>w$}");
                }
                s + "\n"
            };
            out.push_str(&line(header));
            for r in &rows {
                out.push_str(&line([&r[0], &r[1], &r[2], &r[3], &r[4]].map(String::as_str)));
            }
        }
    }
    Ok(CommandResult::ok(out))
}

fn cmd_invariant(a: &InvariantArgs, integrated: bool) -> Result<CommandResult, Failure> {
    let expr = parse_expression(&a.gamma)?;
    let table = load_chern(a.chern.as_deref())?;
    let max_k = expr.terms().map(|(m, _)| monomial_degree(m) / 2).max().unwrap_or(0);
    let recs = index_records(&compute_beta_table(max_k, &table)?);
    let m = Manifold {
        series: a.manifold,
        n: a.n,
    };
    let v = if integrated {
        rw_invariant_b(&expr, m, &recs)?
    } else {
        beta_eval(&expr, m, &recs)?
    };
    Ok(CommandResult::ok(format!("{v}\n")))
}

fn read_vector(path: &Path) -> Result<(DiagramSketch, GraphVector), Failure> {
    let text = read_file(path)?;
    let wrap = |e: DiagramError| fail(2, format!("{}: {e}", path.display()));
    let sk = DiagramSketch::parse(&text).map_err(wrap)?;
    let v = GraphVector::from_graph(&sk.to_graph().map_err(wrap)?).map_err(wrap)?;
    Ok((sk, v))
}

fn cmd_diagram(d: DiagramCommand) -> Result<CommandResult, Failure> {
    let v = match d {
        DiagramCommand::Canon { file } => read_vector(&file)?.1,
        DiagramCommand::Closure { file, connected } => {
            let c = read_vector(&file)?.1.closure()?;
            if connected {
                c.connected_part()
            } else {
                c
            }
        }
        DiagramCommand::Partial { file } => read_vector(&file)?.1.partial()?,
        DiagramCommand::Pair { left, right } => read_vector(&left)?.1.pairing(&read_vector(&right)?.1)?,
        DiagramCommand::Glue { file, u, v } => {
            let text = read_file(&file)?;
            let sk = DiagramSketch::parse(&text)?;
            let leg = |id: &str| {
                sk.univalent
                    .iter()
                    .position(|(name, _)| name == id)
                    .ok_or_else(|| fail(2, format!("`{id}` is not a univalent vertex of {}", file.display())))
            };
            let (i, j) = (leg(&u)?, leg(&v)?);
            if i == j {
                return Err(fail(2, "cannot glue a leg to itself"));
            }
            let mut g = sk.to_graph()?;
            g.glue_pairs(&[(i, j)]);
            GraphVector::from_graph(&g)?
        }
    };
    Ok(CommandResult::ok(v.render()))
}

fn suite_result(rep: SuiteReport) -> CommandResult {
    let stdout = rep.render();
    match rep.violation {
        None => CommandResult::ok(stdout),
        Some(v) => CommandResult {
            exit_code: 1,
            stdout,
            stderr: format!("violation: {v}\n"),
        },
    }
}

fn cmd_verify(v: VerifyCommand) -> Result<CommandResult, Failure> {
    let rep = match v {
        VerifyCommand::Sl2 { max_flags } => verify_sl2(max_flags)?,
        VerifyCommand::Sheffer { order, trials, seed } => verify_sheffer(order, trials, seed)?,
        VerifyCommand::Polywheels { max_degree } => verify_polywheels(max_degree)?,
        VerifyCommand::Published { chern } => verify_published(&load_chern(chern.as_deref())?)?,
    };
    Ok(suite_result(rep))
}

fn cmd_series(s: SeriesCommand) -> Result<CommandResult, Failure> {
    let out = match s {
        SeriesCommand::Exp(a) => TruncSeries::parse(&a.series, a.order)?.exp()?,
        SeriesCommand::Log(a) => TruncSeries::parse(&a.series, a.order)?.log()?,
        SeriesCommand::Reversion(a) => TruncSeries::parse(&a.series, a.order)?.reversion()?,
        SeriesCommand::Compose { outer, inner, order } => {
            TruncSeries::parse(&outer, order)?.compose(&TruncSeries::parse(&inner, order)?)?
        }
    };
    Ok(CommandResult::ok(format!("{out}\n")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("polywheel").chain(args.iter().copied()))
    }

    #[test]
    fn table_base_row() {
        let r = run_args(&["table", "--max-degree", "1"]);
        assert_eq!(r.exit_code, 0, "{}", r.stderr);
        assert_eq!(r.stdout, "partition,beta_kummer,beta_hilb,a,c\n2,-24,-48,-12,-36\n");
    }

    #[test]
    fn beta_examples() {
        let r = run_args(&["beta", "--gamma", "k[2]", "--manifold", "hilb", "--n", "3"]);
        assert_eq!(r.stdout, "-72\n");
        let r = run_args(&["beta", "--gamma", "k[2]^2", "--manifold", "hilb", "--n", "3"]);
        assert_eq!(r.stdout, "5184\n");
        let r = run_args(&["b", "--gamma", "k[2]", "--manifold", "hilb", "--n", "1"]);
        assert_eq!(r.stdout, "-48\n");
        let r = run_args(&["beta", "--gamma", "k[2,2]", "--manifold", "kummer", "--n", "2"]);
        assert_eq!(r.exit_code, 4);
        assert!(r.stderr.contains("n > k"), "{}", r.stderr);
    }

    #[test]
    fn series_commands() {
        let r = run_args(&["series", "reversion", "t + t^2 + 1/2*t^3 + 1/6*t^4", "--order", "4"]);
        assert_eq!(r.exit_code, 0, "{}", r.stderr);
        assert_eq!(
            r.stdout,
            TruncSeries::parse("t - t^2 + 3/2*t^3 - 8/3*t^4", 4)
                .unwrap()
                .to_string()
                + "\n"
        );
        assert_eq!(run_args(&["series", "log", "2 + t", "--order", "3"]).exit_code, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["frobnicate"]).exit_code, 2);
        assert_eq!(run_args(&["verify", "sheffer"]).exit_code, 2);
        assert_eq!(run_args(&["--help"]).exit_code, 0);
    }
}
