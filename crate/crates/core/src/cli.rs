//! Command-line front end.
//!
//! Exit codes: 0 success, 2 bad input (parse, validation, dimensions),
//! 3 a forced `--method` does not apply, 4 internal invariant failure.
//! A zero probability is a successful result.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::eval::{gf_eval, gf_eval_series, Method, PmfResult, PoissonModel};
use crate::intlinalg::{snf, IntMatrix};
use crate::lattice::SolutionFamily;
use crate::mc::{verify_sharded, SampleReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_METHOD: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "mvpoisson", version, about = "Probabilities of linear combinations of independent Poisson variables")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixFormat {
    /// JSON for `.json` files, whitespace text otherwise.
    Auto,
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    SingleIndex,
    Invertible,
    Enumerate,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::SingleIndex => Method::SingleIndex,
            MethodArg::Invertible => Method::Invertible,
            MethodArg::Enumerate => Method::Enumerate,
        }
    }
}

#[derive(clap::Args, Debug)]
struct ModelArgs {
    /// Model file: JSON with keys `a` and `lambda`, or a text matrix with
    /// `--matrix-format text` and `--lambda`.
    model: PathBuf,

    #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
    matrix_format: MatrixFormat,

    /// Rates, required when the model file is a bare text matrix.
    #[arg(long, num_args = 1..)]
    lambda: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form P·A·Q = D of an integer matrix.
    Snf {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
        matrix_format: MatrixFormat,
    },
    /// Nonnegative integer solutions of A·k = b.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        b: Vec<i64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// P(Y = b).
    Pmf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        b: Vec<i64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Generating function E[Π z_i^{Y_i}].
    Gf {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 1.., required = true)]
        z: Vec<f64>,
        /// Also sum the series over b in [0, B]^m and report the difference.
        #[arg(long, value_name = "B")]
        check_degree: Option<u32>,
    },
    /// Monte Carlo comparison of the empirical frequency of b with P(Y = b).
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        b: Vec<i64>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: u32,
    },
}

#[derive(Debug)]
enum CliError {
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_INPUT,
            CliError::Core(Error::MethodNotApplicable { .. }) => EXIT_METHOD,
            CliError::Core(Error::Invariant(_)) => EXIT_INTERNAL,
            CliError::Core(_) => EXIT_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// On-disk model description.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub a: Vec<Vec<u64>>,
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
}

impl ModelFile {
    pub fn into_model(self) -> crate::error::Result<PoissonModel> {
        let a = IntMatrix::from_rows(&self.a)?;
        PoissonModel::new(a, self.lambda)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path, format: MatrixFormat) -> bool {
    match format {
        MatrixFormat::Json => true,
        MatrixFormat::Text => false,
        MatrixFormat::Auto => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")),
    }
}

fn load_matrix(path: &Path, format: MatrixFormat) -> Result<IntMatrix, CliError> {
    let text = read(path)?;
    if !is_json(path, format) {
        return Ok(text.parse()?);
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum MatrixJson {
        Bare(Vec<Vec<i64>>),
        Keyed { a: Vec<Vec<i64>> },
    }
    let rows = match serde_json::from_str::<MatrixJson>(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    {
        MatrixJson::Bare(r) | MatrixJson::Keyed { a: r } => r,
    };
    Ok(IntMatrix::from_rows(&rows)?)
}

fn load_model(args: &ModelArgs) -> Result<PoissonModel, CliError> {
    if is_json(&args.model, args.matrix_format) {
        let text = read(&args.model)?;
        let mut file: ModelFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", args.model.display())))?;
        if let Some(l) = &args.lambda {
            file.lambda = l.clone();
        }
        return Ok(file.into_model()?);
    }
    let a = load_matrix(&args.model, MatrixFormat::Text)?;
    let lambda = args
        .lambda
        .clone()
        .ok_or_else(|| Error::Parse("--lambda is required with a text matrix".into()))?;
    Ok(PoissonModel::new(a, lambda)?)
}

fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(big).collect()))
            .collect(),
    )
}

fn pmf_json(r: &PmfResult) -> Value {
    json!({
        "log_prob": float(r.log_prob),
        "prob": float(r.prob),
        "method": r.method.as_str(),
        "terms": r.terms,
        "clamped": r.clamped,
    })
}

fn sample_json(r: &SampleReport) -> Value {
    json!({
        "b": r.b,
        "exact_prob": float(r.exact_prob),
        "empirical_prob": float(r.empirical_prob),
        "hits": r.hits,
        "n_samples": r.n_samples,
        "z_score": float(r.z_score),
        "seed": r.seed,
        "shards": r.shards,
    })
}

fn family_json(f: Option<&SolutionFamily>) -> Result<Value, CliError> {
    let Some(f) = f else {
        return Ok(json!({ "kind": "empty", "points": [] }));
    };
    let points = f.points()?;
    Ok(match f {
        SolutionFamily::Empty => json!({ "kind": "empty", "points": points }),
        SolutionFamily::Singleton(_) => json!({ "kind": "singleton", "points": points }),
        SolutionFamily::Finite(_) => json!({ "kind": "finite", "points": points }),
        SolutionFamily::Line {
            base,
            direction,
            j_min,
            j_max,
        } => json!({
            "kind": "line",
            "base": base.iter().map(big).collect::<Vec<_>>(),
            "direction": direction.iter().map(big).collect::<Vec<_>>(),
            "j_min": big(j_min),
            "j_max": big(j_max),
            "points": points,
        }),
    })
}

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn indent(m: &IntMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let json_out = cli.format == Format::Json;
    let mut emit = |text: String, value: Value| -> Result<(), CliError> {
        let s = if json_out {
            serde_json::to_string_pretty(&value).expect("json values serialize") + "\n"
        } else {
            text
        };
        out.write_all(s.as_bytes())
            .map_err(|e| CliError::Io(format!("write failed: {e}")))
    };

    match cli.command {
        Command::Snf {
            matrix,
            matrix_format,
        } => {
            let a = load_matrix(&matrix, matrix_format)?;
            let s = snf(&a);
            s.verify(&a)?;
            let text = format!(
                "rank: {}\ndivisors: {}\nP:\n{}D:\n{}Q:\n{}",
                s.rank,
                fmt_vec(&s.divisors),
                indent(&s.p),
                indent(&s.d),
                indent(&s.q)
            );
            let value = json!({
                "p": matrix_json(&s.p),
                "d": matrix_json(&s.d),
                "q": matrix_json(&s.q),
                "rank": s.rank,
                "divisors": s.divisors.iter().map(big).collect::<Vec<_>>(),
            });
            emit(text, value)
        }
        Command::Solve { model, b, method } => {
            let model = load_model(&model)?;
            let (tag, family) = model.solutions(&b, method.into())?;
            let report = model.report();
            let relations: Vec<String> = report.relations.iter().map(ToString::to_string).collect();
            let mut text = format!("method: {tag}\ncolumns: {}\n", fmt_vec(&report.kept_columns));
            if !report.removed_columns.is_empty() {
                text += &format!("removed zero columns: {}\n", fmt_vec(&report.removed_columns));
            }
            for r in &relations {
                text += &format!("relation: {r}\n");
            }
            match &family {
                None => text += "family: empty (b negative or inconsistent)\n",
                Some(SolutionFamily::Line {
                    base,
                    direction,
                    j_min,
                    j_max,
                }) => {
                    text += &format!(
                        "family: line\nbase: {}\ndirection: {}\nj: [{j_min}, {j_max}]\n",
                        fmt_vec(base),
                        fmt_vec(direction)
                    );
                }
                Some(f) => {
                    let kind = match f {
                        SolutionFamily::Empty => "empty",
                        SolutionFamily::Singleton(_) => "singleton",
                        _ => "finite",
                    };
                    text += &format!("family: {kind}\n");
                }
            }
            let points = family.as_ref().map(SolutionFamily::points).transpose()?.unwrap_or_default();
            text += &format!("solutions: {}\n", points.len());
            for k in &points {
                text += &format!("  {}\n", fmt_vec(k));
            }
            let value = json!({
                "method": tag.as_str(),
                "columns": report.kept_columns,
                "removed_columns": report.removed_columns,
                "relations": relations,
                "family": family_json(family.as_ref())?,
            });
            emit(text, value)
        }
        Command::Pmf { model, b, method } => {
            let model = load_model(&model)?;
            let r = model.pmf_method(&b, method.into())?;
            let text = format!(
                "prob: {:e}\nlog_prob: {}\nmethod: {}\nterms: {}\n{}",
                r.prob,
                r.log_prob,
                r.method,
                r.terms,
                if r.clamped { "clamped: true\n" } else { "" }
            );
            emit(text, pmf_json(&r))
        }
        Command::Gf {
            model,
            z,
            check_degree,
        } => {
            let model = load_model(&model)?;
            let direct = gf_eval(&model, &z)?;
            let mut text = format!("direct: {direct:e}\n");
            let mut value = json!({ "direct": float(direct) });
            if let Some(degree) = check_degree {
                let series = gf_eval_series(&model, &z, degree)?;
                let diff = direct - series;
                text += &format!("series: {series:e}\ndegree: {degree}\ndifference: {diff:e}\n");
                value["series"] = float(series);
                value["degree"] = json!(degree);
                value["difference"] = float(diff);
            }
            emit(text, value)
        }
        Command::Sample {
            model,
            b,
            n,
            seed,
            threads,
        } => {
            let model = load_model(&model)?;
            let r = verify_sharded(&model, &b, n, seed, threads)?;
            let text = format!(
                "b: {}\nexact_prob: {:e}\nempirical_prob: {:e}\nhits: {}\nn_samples: {}\nz_score: {}\nseed: {}\nshards: {}\n",
                fmt_vec(&r.b),
                r.exact_prob,
                r.empirical_prob,
                r.hits,
                r.n_samples,
                r.z_score,
                r.seed,
                r.shards
            );
            emit(text, sample_json(&r))
        }
    }
}

/// Parses `args` (including the program name), runs the command, writes the
/// result to `out` and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
