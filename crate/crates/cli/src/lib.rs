//! Command-line dispatch for `lydim`.
//!
//! [`run`] parses arguments and returns the exit status with everything that
//! would be written to stdout and stderr, so the binary and the tests share
//! one code path. Exit status is 0 on success, 1 when a check fails or the
//! computation is infeasible (reports are still written), and 2 on malformed
//! input.

pub mod format;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lydim_core::dimension::{
    compare_to_moran, estimate_dimension, DimensionEstimate, MoranComparison,
};
use lydim_core::expanding::MapSpec;
use lydim_core::ifs::{moran_root, moran_root_star, IfsSpec, MoranRoot};
use lydim_core::numeric::{ln_exact, parse_rational};
use lydim_core::symbolic::{coding_warning, parse_symbols, phi_inverse_word, phi_word};
use lydim_core::witness::{
    build_witness, delta_k, local_dimension_probe, verify_liyorke_symbolic, DeltaReport, Embedding,
    ProbeReport, SymbolicReport, WitnessSchedule,
};
use lydim_core::{
    Error, Exact, Interval, PiecewiseExpandingMap, Scalar, Sign, SimilarityIFS, Symbol,
    SymbolStream, SymbolWord, TransitionMatrix, DEFAULT_WORD_BUDGET,
};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::format::{float, json};

/// Environment variable capping how many words an enumeration may build.
pub const BUDGET_ENV: &str = "LYDIM_WORD_BUDGET";

const DEFAULT_TOL: f64 = 1e-12;

#[derive(Parser, Debug)]
#[command(
    name = "lydim",
    version,
    about = "Subshifts of finite type, coupled-expanding interval maps, Moran dimensions and Li-Yorke witness pairs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transition matrices of subshifts of finite type.
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Admissible words of a subshift of finite type.
    #[command(subcommand)]
    Words(WordsCmd),
    /// Solve the Moran equation Σ c_i^p = 1, or its first-return form
    /// λ_1^{-p} + Σ_{i≥2} (λ_1 λ_i)^{-p} = 1 for a star matrix.
    Moran(MoranArgs),
    /// Piecewise-affine strictly A-coupled-expanding interval maps.
    #[command(subcommand)]
    Map(MapCmd),
    /// Build a Li-Yorke partner t of s inside the star subshift: t copies s on
    /// a growing window at each sync position u_i, breaks away right after it,
    /// and carries the payload in between. Reports the proximality and
    /// separation distances at every sync block and the length overhead δ(k)
    /// of the embedding.
    Witness(WitnessArgs),
    /// Box-counting dimension of the limit set.
    #[command(subcommand)]
    Dim(DimCmd),
    /// Probes of the measure carried into the Li-Yorke pair set.
    #[command(subcommand)]
    Probe(ProbeCmd),
}

#[derive(Subcommand, Debug)]
enum MatrixCmd {
    /// Irreducibility, branching row, star structure at symbol 1 and the
    /// spectral radius, whose logarithm is the topological entropy.
    Check {
        /// Rows separated by ';', entries by ',' (e.g. "1,1,1;1,0,0;1,0,0").
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
enum WordsCmd {
    /// Exact number of admissible words of a given length.
    Count {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        length: usize,
    },
    /// Every admissible word of a given length, in lexicographic order. The
    /// enumeration refuses to exceed the word budget (env LYDIM_WORD_BUDGET).
    Enumerate {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = ListFormat::Plain)]
        format: ListFormat,
    },
}

#[derive(Args, Debug)]
struct MoranArgs {
    /// Contraction ratios c_i in (0, 1), comma separated.
    #[arg(long, conflicts_with = "lambdas", required_unless_present = "lambdas")]
    ratios: Option<String>,
    /// Expansion factors λ_i > 1, comma separated; ratios are 1/λ_i.
    #[arg(long)]
    lambdas: Option<String>,
    /// Use the first-return equation of a strict star at symbol 1.
    #[arg(long, requires = "lambdas")]
    star: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum MapCmd {
    /// Synthesize affine branches f_i = ±λ_i x + b_i on the pieces V_i so
    /// that f_i(V_i) covers every V_j with (A)_ij = 1 while staying inside the
    /// domain. Prints the map with exact offsets.
    Synth(SynthArgs),
    /// Check the strict coupled-expanding conditions: covering, separated
    /// pieces and expansion.
    Verify {
        #[arg(long)]
        map: String,
    },
    /// Basic sets of all admissible words of a given length, the nested
    /// intervals whose intersections form the limit set. CSV columns: word,
    /// lo, hi, diameter.
    Cover {
        #[arg(long)]
        map: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Itinerary of a point: the pieces visited by x, f(x), f²(x), ….
    Orbit {
        #[arg(long)]
        map: String,
        /// Starting point, decimal or fraction.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Map JSON; branch offsets are ignored if absent and required as a set
    /// if present.
    #[arg(long, conflicts_with_all = ["matrix", "domain", "layout", "lambdas", "signs"])]
    map: Option<String>,
    #[arg(long, required_unless_present = "map")]
    matrix: Option<String>,
    /// "lo,hi"
    #[arg(long, required_unless_present = "map")]
    domain: Option<String>,
    /// Pieces as "a1,b1;a2,b2;…"
    #[arg(long, required_unless_present = "map")]
    layout: Option<String>,
    #[arg(long, required_unless_present = "map")]
    lambdas: Option<String>,
    /// Branch orientations as "+,-,…"; all increasing by default.
    #[arg(long)]
    signs: Option<String>,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    matrix: String,
    /// Base sequence s: "1 2 1 …", a JSON array, or @file.
    #[arg(long)]
    s: String,
    /// Symbols filling the free positions, in the same formats as --s.
    #[arg(long)]
    payload: String,
    /// Gap lengths N_n: "n^k", a constant, or a comma separated list.
    #[arg(long, default_value = "n^2")]
    schedule: String,
    /// Length of the finite prefix of t that is built.
    #[arg(long)]
    horizon: usize,
    /// Last sync block checked; the deepest block that fits by default.
    #[arg(long)]
    depth: Option<usize>,
    /// Repeat --s and --payload periodically up to the horizon.
    #[arg(long)]
    cycle: bool,
    /// Values of k for the δ(k) table, comma separated.
    #[arg(long, default_value = "0,1,2,5,10,20,50,100,200,500,1000,2000")]
    delta_ks: String,
}

#[derive(Subcommand, Debug)]
enum DimCmd {
    /// Box-count the basic-set covers at ε = diam(D)/(min λ)^depth and fit
    /// log N(ε) against log(1/ε). The slope estimates the Hausdorff dimension
    /// p of the limit set, which is compared with the Moran root; the Li-Yorke
    /// pair set then has dimension 2p.
    Estimate {
        #[arg(long)]
        map: String,
        /// Inclusive range "a..b".
        #[arg(long)]
        depths: String,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Also write the JSON summary to this file.
        #[arg(long)]
        summary: Option<String>,
    },
    /// Compare an estimated slope with a Moran root given by ratios or
    /// expansion factors.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long, conflicts_with_all = ["map", "depths"], required_unless_present = "map")]
    slope: Option<f64>,
    #[arg(long, requires = "depths")]
    map: Option<String>,
    #[arg(long)]
    depths: Option<String>,
    #[arg(long, conflicts_with = "lambdas", required_unless_present = "lambdas")]
    ratios: Option<String>,
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long, requires = "lambdas")]
    star: bool,
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum ProbeCmd {
    /// Cylinder-level local dimension ln ν([a_0…a_k]) / ln diam of the image
    /// of the cylinder in the star subshift, where ν is the Bernoulli measure
    /// of maximal dimension. The witness embedding interleaves the cylinder
    /// into a Li-Yorke partner of --base.
    LocalDim(ProbeArgs),
}

#[derive(Args, Debug)]
struct ProbeArgs {
    /// Similarity system JSON.
    #[arg(long)]
    ifs: String,
    #[arg(long)]
    matrix: String,
    /// Full-shift sequence α, in the stream formats.
    #[arg(long)]
    alpha: String,
    /// Repeat α periodically to this length.
    #[arg(long)]
    alpha_len: Option<usize>,
    /// Values of k, comma separated.
    #[arg(long)]
    ks: String,
    #[arg(long, value_enum, default_value_t = EmbeddingKind::Witness)]
    embedding: EmbeddingKind,
    /// Base sequence of the witness embedding; all ones by default.
    #[arg(long)]
    base: Option<String>,
    #[arg(long, default_value = "n^2")]
    schedule: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ListFormat {
    Plain,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EmbeddingKind {
    Identity,
    Witness,
}

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn checked(pass: bool, stdout: String) -> Self {
        Self {
            code: if pass { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<Run, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Infeasible { .. } => ("infeasible", 1),
        Error::Separation { .. } => ("separation", 1),
        Error::EmptyIntersection { .. } => ("empty_intersection", 1),
        Error::Escape { .. } => ("escape", 1),
        Error::Consistency(_) => ("consistency", 1),
        Error::NonConvergence { .. } => ("non_convergence", 1),
        Error::DegenerateFit(_) => ("degenerate_fit", 1),
        Error::NumericGuard(_) => ("numeric_guard", 1),
        Error::PayloadExhausted { .. } => ("payload_exhausted", 1),
        Error::InvalidMatrix(_) => ("invalid_matrix", 2),
        Error::Parse(_) => ("parse", 2),
        Error::SymbolOutOfRange { .. } => ("symbol_out_of_range", 2),
        Error::Empty => ("empty", 2),
        Error::AlphabetMismatch { .. } => ("alphabet_mismatch", 2),
        Error::HorizonMismatch { .. } => ("horizon_mismatch", 2),
        Error::HorizonExhausted { .. } => ("horizon_exhausted", 2),
        Error::NotAdmissible { .. } => ("not_admissible", 2),
        Error::NotStar { .. } => ("not_star", 2),
        Error::BudgetExceeded { .. } => ("budget_exceeded", 2),
        Error::Domain(_) => ("domain", 2),
    }
}

fn failure_run(f: Failure) -> Run {
    let (body, code) = match f {
        Failure::Usage(message) => (
            json!({ "error": { "kind": "usage", "message": message } }),
            2,
        ),
        Failure::Core(e) => {
            let (kind, code) = error_kind(&e);
            let mut err = json!({ "kind": kind, "message": e.to_string() });
            if let Error::Infeasible { row, min_lambda } = e {
                err["row"] = json!(row);
                err["min_lambda"] = json!(min_lambda);
            }
            (json!({ "error": err }), code)
        }
    };
    Run {
        code,
        stdout: String::new(),
        stderr: json(&body),
    }
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                failure_run(usage(rendered.trim_end()))
            } else {
                Run::ok(rendered)
            };
        }
    };
    dispatch(cli).unwrap_or_else(failure_run)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Matrix(MatrixCmd::Check { matrix, tol }) => matrix_check(&matrix, tol),
        Command::Words(cmd) => words(cmd),
        Command::Moran(args) => moran(&args),
        Command::Map(cmd) => map(cmd),
        Command::Witness(args) => witness(&args),
        Command::Dim(cmd) => dim(cmd),
        Command::Probe(ProbeCmd::LocalDim(args)) => probe(&args),
    }
}

fn parse_matrix(text: &str) -> Result<TransitionMatrix, Failure> {
    Ok(text.parse::<TransitionMatrix>()?)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn parse_floats(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|t| {
            <f64 as Scalar>::parse_text(t).map_err(|_| usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn parse_depths(text: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || usage(format!("depths must look like a..b, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn read_source(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
        }
        None => Ok(arg.to_string()),
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
}

/// Space separated symbols or a JSON array, inline or from `@file`.
fn parse_stream_text(arg: &str) -> Result<Vec<Symbol>, Failure> {
    let text = read_source(arg)?;
    let t = text.trim();
    if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| usage(format!("bad symbol array: {e}")))
    } else {
        Ok(parse_symbols(t)?)
    }
}

fn cycled(symbols: &[Symbol], len: usize) -> Result<Vec<Symbol>, Failure> {
    if symbols.is_empty() {
        return Err(Failure::Core(Error::Empty));
    }
    Ok(symbols.iter().copied().cycle().take(len).collect())
}

fn load_map(path: &str) -> Result<PiecewiseExpandingMap<Exact>, Failure> {
    let spec: MapSpec =
        serde_json::from_str(&read_file(path)?).map_err(|e| usage(format!("bad map JSON: {e}")))?;
    Ok(PiecewiseExpandingMap::from_spec(&spec)?)
}

fn word_budget() -> Result<usize, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!(
                "{BUDGET_ENV} must be a positive integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_WORD_BUDGET),
    }
}

fn matrix_check(text: &str, tol: f64) -> Outcome {
    let a = parse_matrix(text)?;
    let irreducible = a.is_irreducible();
    let spectral_radius = if irreducible {
        Some(a.spectral_radius(tol)?)
    } else {
        None
    };
    let report = json!({
        "matrix": a.to_string(),
        "m": a.m(),
        "irreducible": irreducible,
        "branching_row": a.branching_row(),
        "full": a.is_full(),
        "star": a.is_star(1, false),
        "strict_star": a.is_star(1, true),
        "zero_diagonal_star": a.is_zero_diagonal_star(),
        "spectral_radius": spectral_radius,
        "entropy": spectral_radius.map(f64::ln),
        "warnings": coding_warning(&a).into_iter().collect::<Vec<_>>(),
    });
    Ok(Run::ok(json(&report)))
}

fn words(cmd: WordsCmd) -> Outcome {
    match cmd {
        WordsCmd::Count { matrix, length } => {
            let a = parse_matrix(&matrix)?;
            let count = a.count_admissible_words(length)?;
            let growth =
                ln_exact(&Exact::from_integer(BigInt::from(count.clone()))) / length as f64;
            Ok(Run::ok(json(&json!({
                "matrix": a.to_string(),
                "length": length,
                "count": count.to_string(),
                "growth_rate": growth,
            }))))
        }
        WordsCmd::Enumerate {
            matrix,
            length,
            format,
        } => {
            let a = parse_matrix(&matrix)?;
            let words = a.enumerate_admissible_words(length, word_budget()?)?;
            let out = match format {
                ListFormat::Plain => words.iter().fold(String::new(), |mut s, w| {
                    let _ = writeln!(s, "{w}");
                    s
                }),
                ListFormat::Json => {
                    let arrays: Vec<&[Symbol]> = words.iter().map(|w| w.symbols()).collect();
                    json(&arrays)
                }
            };
            Ok(Run::ok(out))
        }
    }
}

fn root_from(
    ratios: Option<&str>,
    lambdas: Option<&str>,
    star: bool,
    tol: f64,
) -> Result<(MoranRoot, &'static str), Failure> {
    match (ratios, lambdas) {
        (Some(r), _) => Ok((moran_root(&parse_floats(r, "ratio")?, tol)?, "plain")),
        (None, Some(l)) => {
            let lambdas = parse_floats(l, "lambda")?;
            if star {
                Ok((moran_root_star(&lambdas, tol)?, "star"))
            } else {
                let ratios: Vec<f64> = lambdas.iter().map(|l| 1.0 / l).collect();
                Ok((moran_root(&ratios, tol)?, "plain"))
            }
        }
        (None, None) => Err(usage("give --ratios or --lambdas")),
    }
}

fn moran(args: &MoranArgs) -> Outcome {
    let (root, equation) = root_from(
        args.ratios.as_deref(),
        args.lambdas.as_deref(),
        args.star,
        args.tol,
    )?;
    Ok(Run::ok(json(&json!({
        "equation": equation,
        "p": root.p,
        "residual": root.residual,
        "bracket": root.bracket,
        "iterations": root.iterations,
        "ly_dimension": 2.0 * root.p,
    }))))
}

fn map(cmd: MapCmd) -> Outcome {
    match cmd {
        MapCmd::Synth(args) => map_synth(&args),
        MapCmd::Verify { map } => {
            let f = load_map(&map)?;
            let report = f.verify();
            Ok(Run::checked(report.passed, json(&report)))
        }
        MapCmd::Cover { map, depth, format } => {
            let f = load_map(&map)?;
            let cover = f.limit_set_cover(depth, word_budget()?)?;
            let rows: Vec<(String, f64, f64, f64)> = cover
                .iter()
                .map(|b| {
                    let iv = b.interval.to_f64();
                    (b.word.to_string(), iv.lo, iv.hi, b.interval.len().to_f64())
                })
                .collect();
            let out = match format {
                TableFormat::Csv => {
                    rows.iter()
                        .fold(String::from("word,lo,hi,diameter\n"), |mut s, r| {
                            let _ =
                                writeln!(s, "{},{},{},{}", r.0, float(r.1), float(r.2), float(r.3));
                            s
                        })
                }
                TableFormat::Json => json(
                    &rows
                        .iter()
                        .map(|r| json!({ "word": r.0, "lo": r.1, "hi": r.2, "diameter": r.3 }))
                        .collect::<Vec<_>>(),
                ),
            };
            Ok(Run::ok(out))
        }
        MapCmd::Orbit { map, x, steps } => {
            let f = load_map(&map)?;
            let x0 = parse_rational(&x)?;
            let word = f.code_orbit(&x0, steps)?;
            let mut points = Vec::with_capacity(steps + 1);
            let mut p = x0;
            for _ in 0..=steps {
                points.push(p.to_f64());
                match f.apply(&p) {
                    Some(next) => p = next,
                    None => break,
                }
            }
            Ok(Run::ok(json(
                &json!({ "word": word.symbols(), "points": points }),
            )))
        }
    }
}

fn map_synth(args: &SynthArgs) -> Outcome {
    let f = if let Some(path) = &args.map {
        let mut spec: MapSpec = serde_json::from_str(&read_file(path)?)
            .map_err(|e| usage(format!("bad map JSON: {e}")))?;
        spec.branches.iter_mut().for_each(|b| b.offset = None);
        PiecewiseExpandingMap::<Exact>::from_spec(&spec)?
    } else {
        let need = |v: &Option<String>, name: &str| {
            v.clone()
                .ok_or_else(|| usage(format!("--{name} is required")))
        };
        let matrix = parse_matrix(&need(&args.matrix, "matrix")?)?;
        let m = matrix.m();
        let domain = parse_interval(&need(&args.domain, "domain")?)?;
        let layout = need(&args.layout, "layout")?
            .split(';')
            .map(parse_interval)
            .collect::<Result<Vec<_>, _>>()?;
        let lambdas = need(&args.lambdas, "lambdas")?
            .split(',')
            .map(|t| Ok(parse_rational(t)?))
            .collect::<Result<Vec<_>, Failure>>()?;
        let signs = match &args.signs {
            Some(s) => s
                .split(',')
                .map(|t| match t.trim() {
                    "+" => Ok(Sign::Plus),
                    "-" => Ok(Sign::Minus),
                    other => Err(usage(format!("sign must be + or -, got {other:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Sign::Plus; m],
        };
        PiecewiseExpandingMap::synthesize(matrix, domain, layout, lambdas, signs)?
    };
    Ok(Run::ok(json(&f.to_spec())))
}

fn parse_interval(text: &str) -> Result<Interval<Exact>, Failure> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| usage(format!("interval must be lo,hi, got {text:?}")))?;
    Ok(Interval::new(parse_rational(a)?, parse_rational(b)?)?)
}

#[derive(Serialize)]
struct WitnessOutput<'a> {
    t: &'a [Symbol],
    sync: Vec<serde_json::Value>,
    delta: Vec<DeltaReport>,
    depth: usize,
    horizon: usize,
    passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn witness(args: &WitnessArgs) -> Outcome {
    let a = parse_matrix(&args.matrix)?;
    let m = a.m();
    let sched = WitnessSchedule::parse(&args.schedule)?;
    let h = args.horizon;
    let stream = |arg: &str| -> Result<SymbolStream, Failure> {
        let symbols = parse_stream_text(arg)?;
        let symbols = if args.cycle {
            cycled(&symbols, h)?
        } else {
            symbols
        };
        Ok(SymbolStream::new(m, symbols)?)
    };
    let s = stream(&args.s)?.truncated(h)?;
    let payload = stream(&args.payload)?;
    let depth = match args.depth {
        Some(d) => d,
        None => (0..)
            .take_while(|&d| sched.sync(d).map(|u| u + d + 2 < h).unwrap_or(false))
            .last()
            .ok_or_else(|| usage(format!("horizon {h} is too short for sync block 0")))?,
    };
    let t = build_witness(&s, &sched, &a, &payload)?;
    let report: SymbolicReport = verify_liyorke_symbolic(&s, &t, &sched, depth)?;
    let mut warnings: Vec<String> = coding_warning(&a).into_iter().collect();
    let delta = if a.is_star(1, true) {
        let ks: Vec<usize> = parse_list(&args.delta_ks, "k")?;
        let usable = payload
            .symbols()
            .iter()
            .rposition(|&x| x == 1)
            .map_or(0, |p| p + 1);
        let alpha = if usable == 0 {
            None
        } else {
            Some(phi_word(
                &SymbolWord::new(m, payload.symbols()[..usable].to_vec())?,
                &a,
            )?)
        };
        match alpha {
            Some(alpha) => ks
                .into_iter()
                .filter(|&k| k < alpha.len())
                .map(|k| delta_k(&alpha.prefix(k + 1)?, &sched))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        }
    } else {
        warnings.push("δ(k) needs a strict star matrix; table omitted".into());
        Vec::new()
    };
    let sync = report
        .rows
        .iter()
        .map(|r| json!({ "i": r.i, "u": r.u, "prox": r.prox, "sep": r.sep, "pass": r.pass }))
        .collect();
    let out = WitnessOutput {
        t: t.symbols(),
        sync,
        delta,
        depth,
        horizon: h,
        passed: report.passed,
        warnings,
    };
    Ok(Run::checked(report.passed, json(&out)))
}

#[derive(Serialize)]
struct DimSummary {
    slope: f64,
    intercept: f64,
    residual: f64,
    moran_root: Option<f64>,
    ly_dimension: Option<f64>,
    gap: Option<f64>,
    tol: f64,
    verdict: &'static str,
}

fn estimate_for(path: &str, depths: &str) -> Result<DimensionEstimate, Failure> {
    let f = load_map(path)?.to_f64();
    Ok(estimate_dimension(
        &f,
        parse_depths(depths)?,
        word_budget()?,
    )?)
}

fn dim(cmd: DimCmd) -> Outcome {
    match cmd {
        DimCmd::Estimate {
            map,
            depths,
            tol,
            format,
            summary,
        } => {
            let f = load_map(&map)?;
            let est = estimate_for(&map, &depths)?;
            let root = f.moran_root(DEFAULT_TOL).ok();
            let cmp: Option<MoranComparison> =
                root.as_ref().map(|r| compare_to_moran(&est, r, tol));
            let verdict = match &cmp {
                Some(c) if c.pass => "pass",
                Some(_) => "fail",
                None => "no reference root",
            };
            let sum = DimSummary {
                slope: est.slope,
                intercept: est.intercept,
                residual: est.residual,
                moran_root: cmp.as_ref().map(|c| c.moran_root),
                ly_dimension: cmp.as_ref().map(|c| c.ly_dimension),
                gap: cmp.as_ref().map(|c| c.gap),
                tol,
                verdict,
            };
            if let Some(path) = summary {
                fs::write(&path, json(&sum))
                    .map_err(|e| usage(format!("cannot write {path}: {e}")))?;
            }
            let out = match format {
                TableFormat::Csv => {
                    est.scales
                        .iter()
                        .fold(String::from("epsilon,count\n"), |mut s, sc| {
                            let _ = writeln!(s, "{},{}", float(sc.epsilon), sc.count);
                            s
                        })
                }
                TableFormat::Json => json(&json!({ "summary": sum, "scales": est.scales })),
            };
            Ok(Run::checked(verdict != "fail", out))
        }
        DimCmd::Compare(args) => {
            let slope = match (args.slope, &args.map, &args.depths) {
                (Some(s), _, _) => s,
                (None, Some(map), Some(depths)) => estimate_for(map, depths)?.slope,
                _ => return Err(usage("give --slope or --map with --depths")),
            };
            let (root, _) = root_from(
                args.ratios.as_deref(),
                args.lambdas.as_deref(),
                args.star,
                DEFAULT_TOL,
            )?;
            let est = DimensionEstimate {
                slope,
                intercept: 0.0,
                residual: 0.0,
                scales: Vec::new(),
            };
            let cmp = compare_to_moran(&est, &root, args.tol);
            Ok(Run::checked(cmp.pass, json(&cmp)))
        }
    }
}

fn probe(args: &ProbeArgs) -> Outcome {
    let spec: IfsSpec = serde_json::from_str(&read_file(&args.ifs)?)
        .map_err(|e| usage(format!("bad IFS JSON: {e}")))?;
    let ifs = SimilarityIFS::from_spec(&spec)?;
    let a = parse_matrix(&args.matrix)?;
    let ks: Vec<usize> = parse_list(&args.ks, "k")?;
    let mut alpha = parse_stream_text(&args.alpha)?;
    if let Some(n) = args.alpha_len {
        alpha = cycled(&alpha, n)?;
    }
    let alpha = SymbolStream::new(ifs.m(), alpha)?;
    let sched = WitnessSchedule::parse(&args.schedule)?;
    let report: ProbeReport = match args.embedding {
        EmbeddingKind::Identity => {
            local_dimension_probe(&ifs, &a, &alpha, &ks, Embedding::Identity)?
        }
        EmbeddingKind::Witness => {
            let base = match &args.base {
                Some(b) => SymbolStream::new(a.m(), parse_stream_text(b)?)?,
                None => {
                    let k_max = ks.iter().copied().max().unwrap_or(0);
                    let lifted = phi_inverse_word(&alpha.prefix(k_max + 1)?).len();
                    let len = sched.payload_position(lifted)? + 1;
                    SymbolStream::constant(a.m(), 1, len)?
                }
            };
            local_dimension_probe(
                &ifs,
                &a,
                &alpha,
                &ks,
                Embedding::Witness {
                    base: &base,
                    schedule: &sched,
                },
            )?
        }
    };
    Ok(Run::ok(json(&report)))
}
