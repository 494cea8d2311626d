//! Command-line front end.
//!
//! Every subcommand builds a [`Report`] holding JSON, CSV and text
//! renderings plus the outcome of its internal cross-checks. Exit codes:
//! 0 when all checks pass, 2 for usage or input errors, 3 for numeric
//! failures (a failed cross-check included).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{
    closed_form_check_p4, compare_tabulated, convergence_study, error_profile, log1p_study, sine_study, AnalysisError,
    TabulatedCell, TaylorComparison, DEFAULT_PROBES,
};
use crate::fixtures::{
    abs_nodes, abs_nodes_symmetric, node_fixture, worked_cases, NodeFixture, TabulatedStudy, WorkedCase, FIXTURE_IDS,
    LOG1P_STUDY, SINE_STUDY, UNIT_SINE_DEGREE6, UNIT_SINE_DEGREE8,
};
use crate::functions::{unit_handle, KnownFunction, RegistryError, RegistryScalar};
use crate::grid::{dyadic, uniform_partition, GridError};
use crate::interp::{
    degree_probe_on, fit, node_residual, reproduces_samples, sample_nodes, InterpError, Polynomial, SampleSet,
    DEFAULT_FIT_MATCH_TOL, DEFAULT_RELATIVE_ZERO_TOL,
};
use crate::io::{parse_node_list, read_partition, read_samples, write_partition, CsvError, ParseScalar};
use crate::scalar::{format_f64, Backend, Field, Rational};
use crate::vandermonde::{
    build_ascending, build_descending, det_product, sign_relation, LinalgError, NodeVector, SquareMatrix,
};

/// Relative tolerance for the float determinant agreement check.
pub const DEFAULT_DET_TOL: f64 = 1e-9;

/// Absolute tolerance when comparing the printed unit-interval sine fits.
pub const UNIT_SINE_TOL: f64 = 5e-3;

pub const EXAMPLE_IDS: &[&str] = &["2.3", "2.4", "2.5", "2.6", "2.7", "2.8"];

#[derive(Parser, Debug)]
#[command(name = "vanderfit", version, about = "Polynomial interpolation through Vandermonde systems")]
pub struct Cli {
    #[command(flatten)]
    pub options: GlobalOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOptions {
    /// Arithmetic backend; defaults to exact wherever the input allows it.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Probe segments for sup-error estimates.
    #[arg(long, global = true, default_value_t = DEFAULT_PROBES)]
    pub probes: usize,
    /// Tolerance override for float checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    /// Rows `(x^m, ..., x, 1)`.
    Descending,
    /// Rows `(1, x, ..., x^m)`.
    Ascending,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Vandermonde determinant by the product formula and by elimination.
    Det(DetArgs),
    /// Interpolating polynomial through a CSV sample set.
    Fit(FitArgs),
    /// Sup-error study over dyadic refinements of [0, 1].
    Converge(ConvergeArgs),
    /// Taylor coefficient estimates from interpolants.
    Taylor(TaylorArgs),
    /// Reproduce a worked example.
    Example(ExampleArgs),
    /// Print a node partition.
    Partition(PartitionArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct NodeSource {
    /// Inline nodes, e.g. `-1,0,1` or `0,1/3,2/3,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub nodes: Option<String>,
    /// Partition CSV with header `x`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Named node set.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Args, Debug)]
pub struct DetArgs {
    #[command(flatten)]
    pub source: NodeSource,
    #[arg(long, value_enum, default_value_t = MatrixKind::Descending)]
    pub matrix: MatrixKind,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Sample CSV with header `x,y`.
    pub input: PathBuf,
    /// Required degree; the sample count must be `degree + 1`.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Registry id: abs, sine, log1p, runge or poly:<c_n,...,c_0>.
    pub function: String,
    #[arg(long, default_value_t = 2)]
    pub n0: u64,
    #[arg(long, default_value_t = 3)]
    pub max_level: u32,
    /// Directory for per-level `x,error` profiles.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TaylorArgs {
    /// sine or log1p.
    pub function: String,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8, 10])]
    pub degrees: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct ExampleArgs {
    /// 2.3, 2.4, 2.5, 2.6, 2.7 or 2.8.
    pub id: String,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct PartitionArgs {
    #[arg(long)]
    pub fixture: Option<String>,
    /// `a,b,n`: n + 1 equispaced nodes on [a, b].
    #[arg(long, allow_hyphen_values = true)]
    pub uniform: Option<String>,
    /// `n0,k`: the dyadic partition of [0, 1] with 2^k n0 segments.
    #[arg(long)]
    pub dyadic: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Singular { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<InterpError> for CliError {
    fn from(e: InterpError) -> Self {
        match e {
            InterpError::Linalg(inner) => inner.into(),
            InterpError::Evaluation { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        match e {
            CsvError::Nodes(inner) => inner.into(),
            CsvError::Samples(inner) => inner.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RegistryError> for CliError {
    fn from(e: RegistryError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Grid(_) | AnalysisError::TooFewProbes(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

/// A rendered command result. `ok` is false when a cross-check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub csv: String,
    pub text: String,
    pub ok: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
            Format::Text => self.text.clone(),
        }
    }
}

/// Scalar text: `p/q` on the exact backend, shortest round-trip decimal on floats.
fn num<T: Field>(x: &T) -> String {
    if T::EXACT {
        x.to_string()
    } else {
        format_f64(x.to_f64())
    }
}

fn nums<'a, T: Field>(xs: impl IntoIterator<Item = &'a T>) -> Vec<String> {
    xs.into_iter().map(num).collect()
}

fn matrix_strings<T: Field>(m: &SquareMatrix<T>) -> Vec<Vec<String>> {
    m.rows().map(|r| nums(r)).collect()
}

fn matrix_text<T: Field>(m: &SquareMatrix<T>) -> String {
    let rows = matrix_strings(m);
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  [ {} ]", cells.join("  "));
    }
    out
}

fn polynomial_text<T: Field>(p: &Polynomial<T>) -> String {
    let n = p.degree();
    p.coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| match n - i {
            0 => num(c),
            1 => format!("({})x", num(c)),
            k => format!("({})x^{k}", num(c)),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parses arguments, runs the command, writes the report and returns the
/// process exit code.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(report) => {
            let rendered = report.render(cli.options.format);
            if let Err(e) = emit(cli.options.out.as_deref(), &rendered) {
                eprintln!("error: {e}");
                return 2;
            }
            if report.ok {
                0
            } else {
                eprintln!("error: cross-checks failed");
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let opts = &cli.options;
    let backend = opts.backend.map(Backend::from);
    match &cli.command {
        Command::Det(args) => match resolve_nodes(&args.source, backend)? {
            Nodes::Exact(n) => Ok(det_report(&n, args.matrix, opts.tol)),
            Nodes::Float(n) => Ok(det_report(&n, args.matrix, opts.tol)),
        },
        Command::Fit(args) => {
            let text = read_file(&args.input)?;
            match backend.unwrap_or(Backend::Exact) {
                Backend::Exact => fit_report(read_samples::<Rational>(&text)?, args.degree, opts.tol),
                Backend::Float => fit_report(read_samples::<f64>(&text)?, args.degree, opts.tol),
            }
        }
        Command::Converge(args) => {
            let func = KnownFunction::parse(&args.function)?;
            match backend.unwrap_or_else(|| func.default_backend()) {
                Backend::Exact => converge_report::<Rational>(&func, args, opts.probes),
                Backend::Float => converge_report::<f64>(&func, args, opts.probes),
            }
        }
        Command::Taylor(args) => taylor_report(args, backend),
        Command::Example(args) => example_report(&args.id, backend, opts.probes),
        Command::Partition(args) => match partition_nodes(args, backend)? {
            Nodes::Exact(n) => Ok(partition_report(&n)),
            Nodes::Float(n) => Ok(partition_report(&n)),
        },
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

enum Nodes {
    Exact(NodeVector<Rational>),
    Float(NodeVector<f64>),
}

fn parse_nodes_as(backend: Backend, parse: impl Fn(bool) -> Result<Nodes, CsvError>) -> Result<Nodes, CliError> {
    Ok(parse(backend == Backend::Exact)?)
}

fn fixture_nodes(id: &str, backend: Option<Backend>) -> Result<Nodes, CliError> {
    let fixture =
        node_fixture(id).ok_or_else(|| usage(format!("unknown fixture {id:?}; known: {}", FIXTURE_IDS.join(", "))))?;
    match (fixture, backend) {
        (NodeFixture::Float(_), Some(Backend::Exact)) => {
            Err(usage(format!("fixture {id} has irrational nodes; use --backend float")))
        }
        (f @ NodeFixture::Exact(_), Some(Backend::Float)) => Ok(Nodes::Float(f.as_float())),
        (NodeFixture::Exact(n), _) => Ok(Nodes::Exact(n)),
        (NodeFixture::Float(n), _) => Ok(Nodes::Float(n)),
    }
}

fn resolve_nodes(source: &NodeSource, backend: Option<Backend>) -> Result<Nodes, CliError> {
    let chosen = backend.unwrap_or(Backend::Exact);
    if let Some(id) = &source.fixture {
        return fixture_nodes(id, backend);
    }
    if let Some(list) = &source.nodes {
        return parse_nodes_as(chosen, |exact| {
            Ok(if exact { Nodes::Exact(parse_node_list(list)?) } else { Nodes::Float(parse_node_list(list)?) })
        });
    }
    let path = source.file.as_ref().ok_or_else(|| usage("one of --nodes, --file or --fixture is required"))?;
    let text = read_file(path)?;
    parse_nodes_as(chosen, |exact| {
        Ok(if exact { Nodes::Exact(read_partition(&text)?) } else { Nodes::Float(read_partition(&text)?) })
    })
}

fn det_report<T: Field>(nodes: &NodeVector<T>, kind: MatrixKind, tol: Option<f64>) -> Report {
    let order = nodes.len();
    let product = det_product(nodes);
    let (matrix, sign) = match kind {
        MatrixKind::Descending => (build_descending(nodes), sign_relation(order)),
        MatrixKind::Ascending => (build_ascending(nodes), 1),
    };
    let elimination = matrix.det_elimination();
    let expected = product.clone() * T::from_i64(i64::from(sign));
    let agree = elimination.close_to(&expected, tol.unwrap_or(DEFAULT_DET_TOL));
    let matrix_name = match kind {
        MatrixKind::Descending => "descending",
        MatrixKind::Ascending => "ascending",
    };
    let json = json!({
        "command": "det",
        "backend": T::BACKEND,
        "matrix": matrix_name,
        "order": order,
        "nodes": nums(nodes),
        "det_product": num(&product),
        "det_elimination": num(&elimination),
        "sign_relation": sign,
        "agree": agree,
    });
    let csv = format!(
        "quantity,value\norder,{order}\ndet_product,{}\ndet_elimination,{}\nsign_relation,{sign}\nagree,{agree}\n",
        num(&product),
        num(&elimination)
    );
    let text = format!(
        "nodes: {}\n{matrix_name} matrix:\n{}det by product formula: {}\ndet by elimination:     {}\nsign relation: {sign}\nagree: {agree}\n",
        nums(nodes).join(", "),
        matrix_text(&matrix),
        num(&product),
        num(&elimination)
    );
    Report { json, csv, text, ok: agree }
}

fn fit_report<T: Field>(samples: SampleSet<T>, degree: Option<usize>, tol: Option<f64>) -> Result<Report, CliError> {
    if let Some(d) = degree {
        if samples.len() != d + 1 {
            return Err(usage(format!("degree {d} needs {} samples, found {}", d + 1, samples.len())));
        }
    }
    let p = fit(&samples)?;
    let scale = p.coefficients().iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    let degrees = p.effective_degree(tol.unwrap_or(DEFAULT_RELATIVE_ZERO_TOL) * scale);
    let residual = node_residual(&samples, &p);
    let node_exact = reproduces_samples(&samples, &p, tol.unwrap_or(DEFAULT_FIT_MATCH_TOL));
    let coefficients = nums(p.coefficients());
    let json = json!({
        "command": "fit",
        "backend": T::BACKEND,
        "sample_count": samples.len(),
        "coefficients": coefficients,
        "polynomial": p.to_string(),
        "formal_degree": degrees.formal_degree,
        "effective_degree": degrees.effective_degree,
        "zero_tolerance": format_f64(degrees.zero_tolerance),
        "residual": format_f64(residual),
        "node_exact": node_exact,
    });
    let mut csv = String::from("power,coefficient\n");
    for (i, c) in coefficients.iter().enumerate() {
        let _ = writeln!(csv, "{},{c}", p.degree() - i);
    }
    let text = format!(
        "coefficients (descending): {}\nP(x) = {}\nformal degree: {}\neffective degree: {}\nresidual: {}\nnode exact: {node_exact}\n",
        coefficients.join(", "),
        p,
        degrees.formal_degree,
        degrees.effective_degree,
        format_f64(residual)
    );
    Ok(Report { json, csv, text, ok: node_exact })
}

fn converge_report<T: RegistryScalar>(
    func: &KnownFunction,
    args: &ConvergeArgs,
    probes: usize,
) -> Result<Report, CliError> {
    let g = unit_handle::<T>(func)?;
    let id = func.to_string();
    let report = convergence_study::<T, _>(&id, g, args.n0, args.max_level, probes)?;
    let ok = report.records.iter().all(|r| if T::EXACT { r.residual == 0.0 } else { r.residual.is_finite() });
    if let Some(dir) = &args.plot_dir {
        std::fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        for r in &report.records {
            let path = dir.join(format!("level_{}.csv", r.level));
            let body = report.profile_csv(r.level).expect("level present");
            std::fs::write(&path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    let mut json = serde_json::to_value(&report).expect("report JSON");
    json["nonincreasing"] = Value::Bool(report.is_nonincreasing());
    let mut text = format!("{id} on [0, 1], N0 = {}, {} probe segments\n", args.n0, probes);
    let _ =
        writeln!(text, "{:>5} {:>6} {:>6} {:>6} {:>24} {:>24}", "level", "N_k", "deg", "eff", "sup_error", "residual");
    for r in &report.records {
        let _ = writeln!(
            text,
            "{:>5} {:>6} {:>6} {:>6} {:>24} {:>24}",
            r.level,
            r.node_count,
            r.formal_degree,
            r.effective_degree,
            format_f64(r.sup_error),
            format_f64(r.residual)
        );
    }
    let _ = writeln!(text, "nonincreasing: {}", report.is_nonincreasing());
    Ok(Report { json, csv: report.to_csv(), text, ok })
}

fn taylor_study(
    id: &str,
    degrees: &[usize],
    backend: Option<Backend>,
) -> Result<(TaylorComparison, &'static TabulatedStudy), CliError> {
    if backend == Some(Backend::Exact) {
        return Err(usage(format!("{id} takes irrational values and has no exact backend")));
    }
    if degrees.is_empty() {
        return Err(usage("no degrees given"));
    }
    match KnownFunction::parse(id)? {
        KnownFunction::Sine => {
            if let Some(d) = degrees.iter().find(|&&d| d < 2 || d % 2 == 1) {
                return Err(usage(format!("sine degrees must be even and at least 2, got {d}")));
            }
            Ok((sine_study(degrees)?, &SINE_STUDY))
        }
        KnownFunction::Log1p => {
            if degrees.contains(&0) {
                return Err(usage("log1p degrees must be at least 1"));
            }
            Ok((log1p_study(degrees)?, &LOG1P_STUDY))
        }
        other => Err(usage(format!("taylor supports sine and log1p, not {other}"))),
    }
}

fn cells_json(cells: &[TabulatedCell]) -> Value {
    json!({
        "cells": cells,
        "mismatches": cells.iter().filter(|c| !c.matches).count(),
    })
}

fn cells_text(cells: &[TabulatedCell]) -> String {
    let mut out =
        format!("{:>6} {:>5} {:>12} {:>24} {:>10} {}\n", "row", "power", "printed", "computed", "diff", "match");
    for c in cells {
        let row = c.degree.map_or_else(|| "ref".to_string(), |d| format!("P{d}"));
        let flag = if c.matches { "yes" } else { "NO (printed value disagrees)" };
        let _ = writeln!(
            out,
            "{row:>6} {:>5} {:>12} {:>24} {:>10.2e} {flag}",
            c.power,
            c.printed,
            format_f64(c.computed),
            c.abs_diff
        );
    }
    out
}

fn comparison_text(study: &TaylorComparison) -> String {
    let mut out =
        format!("{} on [{}, {}], {:?} comparison\n", study.function, study.interval[0], study.interval[1], study.mode);
    let _ = write!(out, "{:>5} {:>14}", "k", "true");
    for d in &study.degrees {
        let _ = write!(out, " {:>14} {:>10}", format!("P{d}"), "abs_err");
    }
    out.push('\n');
    for row in &study.rows {
        let _ = write!(out, "{:>5} {:>14.8}", row.power, row.true_coefficient);
        for (e, err) in row.estimates.iter().zip(&row.abs_errors) {
            match (e, err) {
                (Some(e), Some(err)) => {
                    let _ = write!(out, " {e:>14.8} {err:>10.2e}");
                }
                _ => {
                    let _ = write!(out, " {:>14} {:>10}", "-", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Closed-form check of the degree-4 sine fit, as `(json, text, passed)`.
fn closed_form_section() -> (Value, String, bool) {
    match closed_form_check_p4() {
        Ok((linear, cubic)) => (
            json!({"passed": true, "linear": format_f64(linear), "cubic": format_f64(cubic)}),
            format!(
                "P4 closed form 8/(3pi) x - 8/(3pi^3) x^3: linear {}, cubic {}: ok\n",
                format_f64(linear),
                format_f64(cubic)
            ),
            true,
        ),
        Err(e) => (json!({"passed": false, "error": e.to_string()}), format!("P4 closed form: FAILED ({e})\n"), false),
    }
}

fn taylor_sections(study: &TaylorComparison, table: &TabulatedStudy) -> (Value, String, bool) {
    let cells = compare_tabulated(study, table);
    let mut json = json!({
        "comparison": study,
        "tabulated": cells_json(&cells),
    });
    let mut text = comparison_text(study);
    text.push_str("\nprinted table:\n");
    text.push_str(&cells_text(&cells));
    let mut ok = true;
    if study.function == "sine" && study.degrees.contains(&4) {
        let (j, t, passed) = closed_form_section();
        json["closed_form_p4"] = j;
        text.push_str(&t);
        ok = passed;
    }
    (json, text, ok)
}

fn taylor_report(args: &TaylorArgs, backend: Option<Backend>) -> Result<Report, CliError> {
    let (study, table) = taylor_study(&args.function, &args.degrees, backend)?;
    let (body, text, ok) = taylor_sections(&study, table);
    let mut json = json!({"command": "taylor"});
    merge(&mut json, body);
    Ok(Report { json, csv: study.to_csv(), text, ok })
}

fn merge(target: &mut Value, source: Value) {
    if let (Value::Object(t), Value::Object(s)) = (target, source) {
        t.extend(s);
    }
}

/// One named pass/fail line of an example transcript.
struct Check {
    case: String,
    name: &'static str,
    passed: bool,
}

fn example_report(id: &str, backend: Option<Backend>, probes: usize) -> Result<Report, CliError> {
    let fixed = match id {
        "2.3" | "2.4" | "2.5" | "2.6" => Backend::Exact,
        "2.7" | "2.8" => Backend::Float,
        _ => return Err(usage(format!("unknown example {id:?}; known: {}", EXAMPLE_IDS.join(", ")))),
    };
    if backend.is_some_and(|b| b != fixed) {
        return Err(usage(format!("example {id} runs on the {fixed} backend")));
    }
    let mut checks = Vec::new();
    let (body, text) = match id {
        "2.3" | "2.4" | "2.5" => worked_example(id, &mut checks)?,
        "2.6" => abs_example(probes, &mut checks)?,
        "2.7" => sine_example(&mut checks)?,
        _ => log_example(&mut checks)?,
    };
    let ok = checks.iter().all(|c| c.passed);
    let mut json = json!({"command": "example", "example": id, "backend": fixed});
    merge(&mut json, body);
    json["checks"] = checks.iter().map(|c| json!({"case": c.case, "check": c.name, "passed": c.passed})).collect();
    json["ok"] = Value::Bool(ok);
    let mut csv = String::from("case,check,passed\n");
    let mut text = text;
    text.push_str("checks:\n");
    for c in &checks {
        let _ = writeln!(csv, "\"{}\",{},{}", c.case, c.name, c.passed);
        let _ = writeln!(text, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.case, c.name);
    }
    Ok(Report { json, csv, text, ok })
}

fn rationals(values: &[&str]) -> Vec<Rational> {
    values.iter().map(|v| v.parse().expect("fixture literal")).collect()
}

fn worked_case(case: &WorkedCase, checks: &mut Vec<Check>) -> Result<(Value, String, Polynomial<Rational>), CliError> {
    let nodes = NodeVector::new(rationals(case.nodes))?;
    let values = rationals(case.values);
    let a = build_descending(&nodes);
    let inverse = a.invert()?;
    let identity = SquareMatrix::identity(a.order())?;
    let solution = a.solve(&values)?;
    let printed_inverse = SquareMatrix::from_rows(case.inverse.iter().map(|r| rationals(r)).collect())?;
    let p = Polynomial::new(solution.clone()).expect("nonempty");
    let samples = SampleSet::new(nodes.clone(), values.clone())?;
    let degree = p.effective_degree(0.0);
    let mut check = |name, passed| checks.push(Check { case: case.label.to_string(), name, passed });
    check("A * inverse = I", a.mul_matrix(&inverse)? == identity);
    check("solve = inverse * b", inverse.mul_vec(&values)? == solution);
    check("inverse matches printed", inverse == printed_inverse);
    check("solution matches printed", solution == rationals(case.solution));
    check("node exact", reproduces_samples(&samples, &p, 0.0));
    let json = json!({
        "label": case.label,
        "nodes": nums(&nodes),
        "values": nums(&values),
        "matrix": matrix_strings(&a),
        "inverse": matrix_strings(&inverse),
        "solution": nums(&solution),
        "polynomial": p.to_string(),
        "effective_degree": degree.effective_degree,
    });
    let text = format!(
        "{}\n b = ({})\n A =\n{} A^-1 =\n{} a = A^-1 b = ({})\n P(x) = {}\n effective degree: {}\n\n",
        case.label,
        nums(&values).join(", "),
        matrix_text(&a),
        matrix_text(&inverse),
        nums(&solution).join(", "),
        p,
        degree.effective_degree
    );
    Ok((json, text, p))
}

fn worked_example(id: &str, checks: &mut Vec<Check>) -> Result<(Value, String), CliError> {
    let mut cases = Vec::new();
    let mut text = String::new();
    let mut fits = Vec::new();
    for case in worked_cases(id) {
        let (j, t, p) = worked_case(case, checks)?;
        cases.push(j);
        text.push_str(&t);
        fits.push((case, p));
    }
    let mut json = json!({ "cases": cases });
    if id == "2.5" {
        // The samples come from one cubic; quadratic fits on shifted nodes disagree.
        let source = fits.last().expect("2.5 has cases").1.clone();
        let f = |x: &Rational| Ok(source.evaluate(x));
        let sets = |idx: [usize; 2]| -> Result<Vec<NodeVector<Rational>>, CliError> {
            idx.iter().map(|&i| Ok(NodeVector::new(rationals(fits[i].0.nodes))?)).collect()
        };
        let quadratic = degree_probe_on(f, sets([0, 1])?)?;
        let cubic = degree_probe_on(f, sets([2, 3])?)?;
        let label = "degree probe on shifted nodes".to_string();
        checks.push(Check { case: label.clone(), name: "quadratic fits disagree", passed: !quadratic.consistent });
        checks.push(Check { case: label, name: "cubic fits agree", passed: cubic.consistent });
        json["degree_probe"] = json!({
            "quadratic_consistent": quadratic.consistent,
            "cubic_consistent": cubic.consistent,
        });
        let _ = writeln!(
            text,
            "degree 2 fits consistent: {}; degree 3 fits consistent: {}\n",
            quadratic.consistent, cubic.consistent
        );
    }
    Ok((json, text))
}

fn abs_fit(
    label: &str,
    nodes: NodeVector<Rational>,
    probes: usize,
    checks: &mut Vec<Check>,
) -> Result<(Value, String, Polynomial<Rational>), CliError> {
    let f = |x: &Rational| Ok(x.abs());
    let samples = sample_nodes(f, &nodes)?;
    let p = fit(&samples)?;
    let sup = error_profile(f, &p, &Rational::integer(-1), &Rational::integer(1), probes)?
        .into_iter()
        .map(|(_, e)| e)
        .fold(0.0, f64::max);
    let exact = reproduces_samples(&samples, &p, 0.0);
    checks.push(Check { case: label.to_string(), name: "node exact", passed: exact });
    checks.push(Check { case: label.to_string(), name: "sup error finite", passed: sup.is_finite() });
    let approx: Vec<String> = p.coefficients().iter().map(|c| format_f64(c.to_f64())).collect();
    let json = json!({
        "label": label,
        "nodes": nums(&nodes),
        "coefficients": nums(p.coefficients()),
        "coefficients_float": approx,
        "sup_error": format_f64(sup),
        "probe_count": probes,
    });
    let text = format!(
        "{label}\n nodes: {}\n coefficients (descending, float view):\n  {}\n sup |f - P| on [-1, 1] ({probes} probe segments): {}\n\n",
        nums(&nodes).join(", "),
        approx.join("\n  "),
        format_f64(sup)
    );
    Ok((json, text, p))
}

fn abs_example(probes: usize, checks: &mut Vec<Check>) -> Result<(Value, String), CliError> {
    let (verbatim, mut text, _) = abs_fit("|x|, degree 18, listed nodes", abs_nodes(), probes, checks)?;
    let label = "|x|, degree 18, symmetric nodes";
    let (symmetric, t, p) = abs_fit(label, abs_nodes_symmetric(), probes, checks)?;
    text.push_str(&t);
    let odd_zero = (1..=p.degree()).step_by(2).all(|k| p.coefficient(k).is_zero());
    checks.push(Check { case: label.to_string(), name: "odd coefficients vanish", passed: odd_zero });
    Ok((json!({"fits": [verbatim, symmetric]}), text))
}

fn unit_sine_fit(degree: usize, printed: &[Option<f64>], checks: &mut Vec<Check>) -> Result<(Value, String), CliError> {
    let g = unit_handle::<f64>(&KnownFunction::Sine)?;
    let nodes = uniform_partition(&0.0, &1.0, degree)?;
    let samples = sample_nodes(g, &nodes)?;
    let p = fit(&samples)?;
    let label = format!("sin(2 pi y - pi) on [0, 1], degree {degree}");
    checks.push(Check {
        case: label.clone(),
        name: "node exact",
        passed: reproduces_samples(&samples, &p, DEFAULT_FIT_MATCH_TOL),
    });
    let mut rows = Vec::new();
    let mut text = format!("{label}\n P(y) = {}\n", polynomial_text(&p));
    for (i, (c, printed)) in p.coefficients().iter().zip(printed).enumerate() {
        let power = degree - i;
        let Some(printed) = printed else { continue };
        // Printed values below 1e-6 are round-off of a zero coefficient.
        let matches = if printed.abs() < 1e-6 { c.abs() < 1e-8 } else { (c - printed).abs() < UNIT_SINE_TOL };
        rows.push(json!({
            "power": power,
            "printed": format_f64(*printed),
            "computed": format_f64(*c),
            "matches": matches,
        }));
        let _ = writeln!(
            text,
            " y^{power}: printed {:>12} computed {:>24} {}",
            format_f64(*printed),
            format_f64(*c),
            if matches { "" } else { "(printed value disagrees)" }
        );
    }
    text.push('\n');
    Ok((json!({"label": label, "coefficients": nums(p.coefficients()), "printed_comparison": rows}), text))
}

fn sine_example(checks: &mut Vec<Check>) -> Result<(Value, String), CliError> {
    let (six, mut text) = unit_sine_fit(6, &UNIT_SINE_DEGREE6, checks)?;
    let (eight, t) = unit_sine_fit(8, &UNIT_SINE_DEGREE8, checks)?;
    text.push_str(&t);
    let study = sine_study(&[4, 6, 8, 10])?;
    let (table, t, passed) = taylor_sections(&study, &SINE_STUDY);
    text.push_str(&t);
    checks.push(Check { case: "sine Taylor table".to_string(), name: "P4 closed form", passed });
    Ok((json!({"unit_fits": [six, eight], "taylor": table}), text))
}

fn log_example(_checks: &mut Vec<Check>) -> Result<(Value, String), CliError> {
    let study = log1p_study(&[4, 6, 8, 10])?;
    let (table, text, _) = taylor_sections(&study, &LOG1P_STUDY);
    Ok((json!({"taylor": table}), text))
}

fn split_fields(spec: &str, parts: usize, what: &str) -> Result<Vec<String>, CliError> {
    let fields: Vec<String> = spec.split(',').map(|s| s.trim().to_string()).collect();
    if fields.len() != parts {
        return Err(usage(format!("{what} expects {parts} comma-separated fields, got {spec:?}")));
    }
    Ok(fields)
}

fn uniform_nodes<T: ParseScalar>(fields: &[String]) -> Result<NodeVector<T>, CliError> {
    let parse = |s: &str| T::parse_scalar(s).map_err(|e| usage(e.to_string()));
    let n: usize = fields[2].parse().map_err(|_| usage(format!("bad segment count {:?}", fields[2])))?;
    Ok(uniform_partition(&parse(&fields[0])?, &parse(&fields[1])?, n)?)
}

fn partition_nodes(args: &PartitionArgs, backend: Option<Backend>) -> Result<Nodes, CliError> {
    let exact = backend.unwrap_or(Backend::Exact) == Backend::Exact;
    if let Some(id) = &args.fixture {
        return fixture_nodes(id, backend);
    }
    if let Some(spec) = &args.uniform {
        let fields = split_fields(spec, 3, "--uniform")?;
        return Ok(if exact { Nodes::Exact(uniform_nodes(&fields)?) } else { Nodes::Float(uniform_nodes(&fields)?) });
    }
    let spec = args.dyadic.as_deref().ok_or_else(|| usage("one of --fixture, --uniform or --dyadic is required"))?;
    let fields = split_fields(spec, 2, "--dyadic")?;
    let base = fields[0].parse().map_err(|_| usage(format!("bad base count {:?}", fields[0])))?;
    let level = fields[1].parse().map_err(|_| usage(format!("bad level {:?}", fields[1])))?;
    let partition = dyadic(base, level)?;
    Ok(if exact { Nodes::Exact(partition.nodes().clone()) } else { Nodes::Float(partition.nodes_as()) })
}

fn partition_report<T: Field>(nodes: &NodeVector<T>) -> Report {
    let strings = nums(nodes);
    let json = json!({
        "command": "partition",
        "backend": T::BACKEND,
        "node_count": nodes.len(),
        "nodes": strings,
    });
    let mut csv = String::from("x\n");
    for s in &strings {
        let _ = writeln!(csv, "{s}");
    }
    debug_assert!(!T::EXACT || csv == write_partition(nodes));
    Report { json, text: csv.clone(), csv, ok: true }
}
