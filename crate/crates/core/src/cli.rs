//! Command-line front end. [`run`] never exits the process, so tests can
//! drive it in-process.
//!
//! Exit codes: 0 success, 1 mismatch or inconsistent verdict, 2 invalid
//! input, 3 budget exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::{
    antipode_check, connectivity_bound, cross_polytope_profile, fingerprint, regime_claim,
    ConnectivityMethod, Verdict,
};
use crate::complex::{
    enumerate_all, enumerate_with_budget, vr_graph, write_simplex_list, FlagComplex, Simplex,
    SimplexFileHeader, DEFAULT_SIMPLEX_BUDGET,
};
use crate::facets::{
    brute_force_facets, cycle_facets, torus_facets, window_interior, z2_facets_in_window,
    FacetSet,
};
use crate::homology::{
    betti_gf2_with_limits, homology_integer_with_limits, BettiProfile, Coefficients, Limits,
    DEFAULT_SNF_COLUMN_BUDGET,
};
use crate::metric::{FiniteMetricSpace, SpaceLabel, Window};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The golden table shipped with the crate.
pub const GOLDEN_TABLE: &str = include_str!("../data/golden.toml");
/// JSON schema for everything written to stdout in JSON format.
pub const OUTPUT_SCHEMA: &str = include_str!("../data/output.schema.json");

/// Per-row time budget for `verify-table` when none is given.
pub const DEFAULT_ROW_SECS: u64 = 1800;

/// How many facets of each side a failed comparison prints.
const DIFF_SAMPLE: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "torusvr",
    version,
    about = "Vietoris-Rips complexes of torus grids, cycles and lattice windows"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads. Echoed in the output; computation is sequential.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    /// Report `wall_time_ms` as null so repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpaceKind {
    Cycle,
    Torus,
    Window,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoefficientsArg {
    Gf2,
    Integer,
}

impl From<CoefficientsArg> for Coefficients {
    fn from(c: CoefficientsArg) -> Self {
        match c {
            CoefficientsArg::Gf2 => Coefficients::Gf2,
            CoefficientsArg::Integer => Coefficients::Integer,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Counting,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FacetMode {
    ClosedForm,
    Brute,
    Compare,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceKind,
    /// Cycle length or torus side.
    #[arg(long)]
    n: Option<u32>,
    /// Window bounds as `x_min,x_max,y_min,y_max`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Scale.
    #[arg(long)]
    k: u32,
}

#[derive(Debug, Args)]
struct BudgetArgs {
    #[arg(long, env = "SIMPLEX_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
    simplex_budget: usize,
    #[arg(long, env = "TIME_BUDGET_SECS")]
    time_budget_secs: Option<u64>,
    /// Largest boundary matrix (in columns) handed to Smith normal form.
    #[arg(long, default_value_t = DEFAULT_SNF_COLUMN_BUDGET)]
    snf_column_budget: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti numbers of VR(X, k).
    Betti {
        #[command(flatten)]
        space: SpaceArgs,
        /// Highest homology dimension; all dimensions when omitted.
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = CoefficientsArg::Gf2)]
        coefficients: CoefficientsArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Facets from the closed-form catalog, the brute-force oracle, or both.
    Facets {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = FacetMode::ClosedForm)]
        mode: FacetMode,
    },
    /// Recompute the golden table.
    VerifyTable {
        /// Golden file; the built-in table when omitted.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// `N`, `A..B` (inclusive), `A..` or `..B`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long, value_enum)]
        coefficients: Option<CoefficientsArg>,
        /// Also run rows marked as beyond desk scale.
        #[arg(long)]
        include_skipped: bool,
        #[arg(long, env = "SIMPLEX_BUDGET", default_value_t = DEFAULT_SIMPLEX_BUDGET)]
        simplex_budget: usize,
        /// Per-row limit.
        #[arg(long, env = "TIME_BUDGET_SECS", default_value_t = DEFAULT_ROW_SECS)]
        time_budget_secs: u64,
    },
    /// Antipode check, connectivity bound and homotopy-type fingerprint.
    Certify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Highest homology dimension. Defaults to the top dimension of the
        /// expected type, or the whole complex when no type is expected.
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = CoefficientsArg::Integer)]
        coefficients: CoefficientsArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Counting)]
        method: MethodArg,
        /// Largest k for the ball-intersection bound.
        #[arg(long, default_value_t = 1)]
        max_k: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Parameters of one run, echoed into every JSON result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub space: SpaceLabel,
    pub k: u32,
    pub coefficients: Option<Coefficients>,
    pub max_dim: Option<usize>,
    pub simplex_budget: usize,
    pub time_budget_secs: Option<u64>,
    pub snf_column_budget: usize,
    pub format: Format,
    pub thread_count: usize,
}

/// What a command hands back before rendering.
struct Report {
    command: &'static str,
    config: Option<RunConfig>,
    result: Value,
    text: String,
    csv: Vec<Vec<String>>,
    csv_header: &'static [&'static str],
    code: i32,
}

const BETTI_HEADER: &[&str] = &["n", "k", "dim", "betti", "coefficients", "source"];

pub fn exit_code(err: &Error) -> i32 {
    if err.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_VALIDATION
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                EXIT_VALIDATION
            } else {
                let _ = out.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let started = Instant::now();
    let outcome = if cli.threads == 0 {
        Err(Error::Invalid("--threads must be at least 1".into()))
    } else {
        dispatch(&cli, started)
    };
    match outcome {
        Ok(report) => match render(&cli, &report, started, out) {
            Ok(()) => report.code,
            Err(e) => report_error(&e, err),
        },
        Err(e) => report_error(&e, err),
    }
}

fn report_error(e: &Error, err: &mut dyn Write) -> i32 {
    let code = exit_code(e);
    let body = json!({
        "error": { "kind": e.kind(), "message": e.to_string() },
        "exit_code": code,
    });
    let _ = writeln!(err, "{body}");
    code
}

fn render(cli: &Cli, report: &Report, started: Instant, out: &mut dyn Write) -> Result<()> {
    match cli.format {
        Format::Json => {
            let wall = if cli.no_timing {
                Value::Null
            } else {
                json!(started.elapsed().as_millis() as u64)
            };
            let doc = json!({
                "command": report.command,
                "version": VERSION,
                "config": report.config,
                "result": report.result,
                "wall_time_ms": wall,
            });
            let s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Invalid(e.to_string()))?;
            writeln!(out, "{s}")?;
        }
        Format::Text => out.write_all(report.text.as_bytes())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let write = |w: &mut csv::Writer<Vec<u8>>, rec: &[String]| {
                w.write_record(rec).map_err(|e| Error::Invalid(e.to_string()))
            };
            let header: Vec<String> = report.csv_header.iter().map(|s| s.to_string()).collect();
            write(&mut w, &header)?;
            for row in &report.csv {
                write(&mut w, row)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
            out.write_all(&bytes)?;
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli, started: Instant) -> Result<Report> {
    match &cli.command {
        Command::Betti {
            space,
            max_dim,
            coefficients,
            budget,
        } => cmd_betti(cli, space, *max_dim, (*coefficients).into(), budget, started),
        Command::Facets { space, mode } => cmd_facets(cli, space, *mode),
        Command::VerifyTable {
            golden,
            n,
            k,
            coefficients,
            include_skipped,
            simplex_budget,
            time_budget_secs,
        } => {
            let text = match golden {
                Some(p) => std::fs::read_to_string(p)?,
                None => GOLDEN_TABLE.to_string(),
            };
            let table = GoldenTable::parse(&text)?;
            let filter = RowFilter {
                n: n.as_deref().map(parse_range).transpose()?,
                k: k.as_deref().map(parse_range).transpose()?,
                coefficients: coefficients.map(Into::into),
                include_skipped: *include_skipped,
            };
            cmd_verify_table(&table, &filter, *simplex_budget, *time_budget_secs)
        }
        Command::Certify {
            space,
            max_dim,
            coefficients,
            method,
            max_k,
            budget,
        } => {
            let method = match method {
                MethodArg::Counting => ConnectivityMethod::Counting,
                MethodArg::Exhaustive => ConnectivityMethod::Exhaustive,
            };
            cmd_certify(cli, space, *max_dim, (*coefficients).into(), method, *max_k, budget, started)
        }
    }
}

fn parse_window(s: &str) -> Result<Window> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Invalid(format!("window {s:?}: {e}")))?;
    match parts[..] {
        [x0, x1, y0, y1] => Window::new(x0, x1, y0, y1),
        _ => Err(Error::Invalid(format!(
            "window {s:?}: expected x_min,x_max,y_min,y_max"
        ))),
    }
}

fn build_space(args: &SpaceArgs) -> Result<FiniteMetricSpace> {
    let need_n = || {
        args.n
            .ok_or_else(|| Error::Invalid("--n is required for cycle and torus spaces".into()))
    };
    match args.space {
        SpaceKind::Cycle => FiniteMetricSpace::cycle(need_n()?),
        SpaceKind::Torus => FiniteMetricSpace::torus(need_n()?),
        SpaceKind::Window => {
            let w = args
                .window
                .as_deref()
                .ok_or_else(|| Error::Invalid("--window is required for window spaces".into()))?;
            FiniteMetricSpace::window(parse_window(w)?)
        }
    }
}

fn label_n(label: &SpaceLabel) -> Option<u32> {
    match *label {
        SpaceLabel::Cycle { n } | SpaceLabel::Torus { n } => Some(n),
        SpaceLabel::Window { .. } => None,
    }
}

fn label_kind(label: &SpaceLabel) -> String {
    match label {
        SpaceLabel::Cycle { .. } => "cycle".into(),
        SpaceLabel::Torus { .. } => "torus".into(),
        SpaceLabel::Window { window } => format!("window {window}"),
    }
}

fn limits(budget: &BudgetArgs, started: Instant) -> Limits {
    Limits {
        snf_columns: budget.snf_column_budget,
        deadline: budget
            .time_budget_secs
            .map(|s| started + Duration::from_secs(s)),
    }
}

fn homology(
    complex: &FlagComplex,
    max_dim: usize,
    coefficients: Coefficients,
    limits: &Limits,
) -> Result<BettiProfile> {
    match coefficients {
        Coefficients::Gf2 => betti_gf2_with_limits(complex, max_dim, limits),
        Coefficients::Integer => homology_integer_with_limits(complex, max_dim, limits),
    }
}

/// Enumerates deep enough for homology through `max_dim` (or everything)
/// and computes it.
fn compute_profile(
    space: &FiniteMetricSpace,
    k: u32,
    max_dim: Option<usize>,
    coefficients: Coefficients,
    simplex_budget: usize,
    limits: &Limits,
) -> Result<(BettiProfile, Vec<usize>)> {
    if simplex_budget == 0 {
        return Err(Error::Invalid("simplex budget must be positive".into()));
    }
    let graph = vr_graph(space, k);
    let complex = match max_dim {
        Some(d) => enumerate_with_budget(&graph, d + 1, simplex_budget)?,
        None => enumerate_all(&graph, simplex_budget)?,
    };
    let top = max_dim.unwrap_or_else(|| complex.top_dim().unwrap_or(0));
    let profile = homology(&complex, top, coefficients, limits)?;
    Ok((profile, complex.counts()))
}

fn profile_text(label: &SpaceLabel, k: u32, p: &BettiProfile) -> String {
    let mut t = format!("{label}, k = {k}, {} coefficients\n", p.coefficients);
    for (d, b) in p.betti.iter().enumerate() {
        let _ = write!(t, "  b{d} = {b}");
        if let Some(tor) = p.torsion.get(d).filter(|t| !t.is_empty()) {
            let fs: Vec<String> = tor.iter().map(|f| format!("Z/{f}")).collect();
            let _ = write!(t, "  torsion {}", fs.join(" + "));
        }
        t.push('\n');
    }
    if let Some(d) = p.truncated_at {
        let _ = writeln!(t, "  (simplices exist above dimension {d}; higher homology not computed)");
    }
    t
}

fn profile_rows(n: Option<u32>, k: u32, p: &BettiProfile, source: &str) -> Vec<Vec<String>> {
    p.betti
        .iter()
        .enumerate()
        .map(|(d, b)| {
            vec![
                n.map_or_else(String::new, |n| n.to_string()),
                k.to_string(),
                d.to_string(),
                b.to_string(),
                p.coefficients.to_string(),
                source.to_string(),
            ]
        })
        .collect()
}

fn cmd_betti(
    cli: &Cli,
    args: &SpaceArgs,
    max_dim: Option<usize>,
    coefficients: Coefficients,
    budget: &BudgetArgs,
    started: Instant,
) -> Result<Report> {
    let space = build_space(args)?;
    let label = space.label();
    let config = RunConfig {
        space: label,
        k: args.k,
        coefficients: Some(coefficients),
        max_dim,
        simplex_budget: budget.simplex_budget,
        time_budget_secs: budget.time_budget_secs,
        snf_column_budget: budget.snf_column_budget,
        format: cli.format,
        thread_count: cli.threads,
    };
    let (profile, counts) = compute_profile(
        &space,
        args.k,
        max_dim,
        coefficients,
        budget.simplex_budget,
        &limits(budget, started),
    )?;
    Ok(Report {
        command: "betti",
        text: profile_text(&label, args.k, &profile),
        csv: profile_rows(label_n(&label), args.k, &profile, "computed"),
        csv_header: BETTI_HEADER,
        result: json!({
            "profile": profile,
            "simplex_counts": counts,
            "truncated_at": profile.truncated_at,
        }),
        config: Some(config),
        code: EXIT_OK,
    })
}

fn closed_form(label: &SpaceLabel, k: u32) -> Result<FacetSet> {
    match *label {
        SpaceLabel::Cycle { n } => cycle_facets(n, k),
        SpaceLabel::Torus { n } => torus_facets(n, k),
        SpaceLabel::Window { window } => z2_facets_in_window(window, k),
    }
}

fn facet_lists(set: &[Simplex]) -> Vec<Vec<u32>> {
    set.iter().map(|s| s.vertices().to_vec()).collect()
}

fn cmd_facets(cli: &Cli, args: &SpaceArgs, mode: FacetMode) -> Result<Report> {
    let space = build_space(args)?;
    let label = space.label();
    let k = args.k;
    let config = RunConfig {
        space: label,
        k,
        coefficients: None,
        max_dim: None,
        simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        time_budget_secs: None,
        snf_column_budget: DEFAULT_SNF_COLUMN_BUDGET,
        format: cli.format,
        thread_count: cli.threads,
    };
    let oracle = || -> Result<FacetSet> {
        let all = brute_force_facets(&vr_graph(&space, k))?;
        Ok(match label {
            // only interior facets of a window are facets of the whole lattice
            SpaceLabel::Window { window } if mode == FacetMode::Compare => {
                all.filtered(|s| window_interior(window, k, s))
            }
            _ => all,
        })
    };
    let header = SimplexFileHeader {
        space: label_kind(&label),
        n: label_n(&label),
        k,
        dim: None,
    };

    if mode == FacetMode::Compare {
        let closed = closed_form(&label, k)?;
        let brute = oracle()?;
        let diff = closed.diff(&brute);
        let identical = diff.is_empty();
        let sample = |v: &[Simplex]| facet_lists(&v[..v.len().min(DIFF_SAMPLE)]);
        let mut text = if identical {
            format!("identical: {} facets\n", closed.len())
        } else {
            format!(
                "MISMATCH: closed form {} facets, oracle {} facets\n",
                closed.len(),
                brute.len()
            )
        };
        for (name, side) in [("closed form only", &diff.only_left), ("oracle only", &diff.only_right)] {
            for s in side.iter().take(DIFF_SAMPLE) {
                let _ = writeln!(text, "  {name}: {s}");
            }
        }
        let csv = vec![vec![
            closed.len().to_string(),
            brute.len().to_string(),
            identical.to_string(),
        ]];
        return Ok(Report {
            command: "facets",
            config: Some(config),
            result: json!({
                "mode": "compare",
                "identical": identical,
                "closed_form_count": closed.len(),
                "oracle_count": brute.len(),
                "only_closed_form": sample(&diff.only_left),
                "only_oracle": sample(&diff.only_right),
            }),
            text,
            csv,
            csv_header: &["closed_form_count", "oracle_count", "identical"],
            code: if identical { EXIT_OK } else { EXIT_MISMATCH },
        });
    }

    let (set, closed, note) = match mode {
        FacetMode::Brute => (oracle()?, false, None),
        _ => match closed_form(&label, k) {
            Ok(set) => (set, true, None),
            Err(Error::UnsupportedRegime { .. }) => {
                (oracle()?, false, Some("no closed form for this regime; brute-force oracle"))
            }
            Err(e) => return Err(e),
        },
    };
    let facets = set.to_vec();
    let mut text = Vec::new();
    write_simplex_list(&mut text, &header, &facets)?;
    let mut text = String::from_utf8(text).map_err(|e| Error::Invalid(e.to_string()))?;
    if let Some(note) = note {
        text.insert_str(0, &format!("# {note}\n"));
    }
    let csv = facets
        .iter()
        .map(|s| vec![s.len().to_string(), s.to_string()])
        .collect();
    Ok(Report {
        command: "facets",
        config: Some(config),
        result: json!({
            "mode": match mode { FacetMode::Brute => "brute", _ => "closed-form" },
            "source": set.source(),
            "closed_form": closed,
            "note": note,
            "count": facets.len(),
            "size_histogram": set.size_histogram(),
            "facets": facet_lists(&facets),
        }),
        text,
        csv,
        csv_header: &["size", "vertices"],
        code: EXIT_OK,
    })
}

/// One row of the golden table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenRow {
    pub n: u32,
    pub k: u32,
    pub coefficients: Coefficients,
    pub max_dim: usize,
    /// Unreduced, dimensions `0..=max_dim`.
    pub betti: Vec<u64>,
    pub source: String,
    #[serde(default)]
    pub skip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenTable {
    pub version: u32,
    #[serde(rename = "row")]
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    pub fn parse(text: &str) -> Result<Self> {
        let table: GoldenTable =
            toml::from_str(text).map_err(|e| Error::Invalid(format!("golden table: {e}")))?;
        if table.version != 1 {
            return Err(Error::Invalid(format!(
                "golden table version {} not supported",
                table.version
            )));
        }
        for r in &table.rows {
            if r.betti.len() != r.max_dim + 1 {
                return Err(Error::Invalid(format!(
                    "golden row n={} k={}: {} Betti numbers for max_dim {}",
                    r.n,
                    r.k,
                    r.betti.len(),
                    r.max_dim
                )));
            }
            if r.source.trim().is_empty() {
                return Err(Error::Invalid(format!("golden row n={} k={} has no source", r.n, r.k)));
            }
        }
        Ok(table)
    }

    pub fn builtin() -> Self {
        Self::parse(GOLDEN_TABLE).expect("shipped golden table parses")
    }

    pub fn find(&self, n: u32, k: u32, coefficients: Coefficients) -> Option<&GoldenRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.k == k && r.coefficients == coefficients)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RowFilter {
    pub n: Option<RangeInclusive<u32>>,
    pub k: Option<RangeInclusive<u32>>,
    pub coefficients: Option<Coefficients>,
    pub include_skipped: bool,
}

impl RowFilter {
    fn matches(&self, r: &GoldenRow) -> bool {
        self.n.as_ref().is_none_or(|x| x.contains(&r.n))
            && self.k.as_ref().is_none_or(|x| x.contains(&r.k))
            && self.coefficients.is_none_or(|c| c == r.coefficients)
    }
}

/// `N`, `A..B` (inclusive), `A..=B`, `A..` or `..B`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| Error::Invalid(format!("range {s:?}: {e}")))
    };
    match s.split_once("..") {
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let lo = if a.trim().is_empty() { 0 } else { num(a)? };
            let hi = if b.trim().is_empty() { u32::MAX } else { num(b)? };
            if lo > hi {
                return Err(Error::Invalid(format!("range {s:?} is empty")));
            }
            Ok(lo..=hi)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOutcome {
    pub row: GoldenRow,
    pub status: RowStatus,
    pub computed: Option<BettiProfile>,
    pub reason: Option<String>,
    /// Set when the row was skipped because it ran out of budget.
    pub budget_exceeded: bool,
    pub wall_time_ms: u64,
}

/// Recomputes one golden row.
pub fn run_golden_row(row: &GoldenRow, simplex_budget: usize, time_budget: Duration) -> RowOutcome {
    let started = Instant::now();
    let limits = Limits {
        deadline: Some(started + time_budget),
        ..Limits::default()
    };
    let computed = FiniteMetricSpace::torus(row.n).and_then(|space| {
        compute_profile(&space, row.k, Some(row.max_dim), row.coefficients, simplex_budget, &limits)
    });
    let wall_time_ms = started.elapsed().as_millis() as u64;
    let (status, computed, reason, budget_exceeded) = match computed {
        Ok((p, _)) => {
            let ok = p.betti == row.betti && !p.has_torsion();
            let reason = (!ok).then(|| {
                if p.has_torsion() {
                    "torsion present".to_string()
                } else {
                    format!("expected {:?}, computed {:?}", row.betti, p.betti)
                }
            });
            let status = if ok { RowStatus::Pass } else { RowStatus::Fail };
            (status, Some(p), reason, false)
        }
        Err(e) if e.is_budget() => (RowStatus::Skipped, None, Some(format!("budget: {e}")), true),
        Err(e) => (RowStatus::Fail, None, Some(e.to_string()), false),
    };
    RowOutcome {
        row: row.clone(),
        status,
        computed,
        reason,
        budget_exceeded,
        wall_time_ms,
    }
}

fn cmd_verify_table(
    table: &GoldenTable,
    filter: &RowFilter,
    simplex_budget: usize,
    row_secs: u64,
) -> Result<Report> {
    let mut outcomes = Vec::new();
    for row in table.rows.iter().filter(|r| filter.matches(r)) {
        if row.skip && !filter.include_skipped {
            outcomes.push(RowOutcome {
                row: row.clone(),
                status: RowStatus::Skipped,
                computed: None,
                reason: Some("beyond desk scale; run with --include-skipped".into()),
                budget_exceeded: false,
                wall_time_ms: 0,
            });
            continue;
        }
        outcomes.push(run_golden_row(row, simplex_budget, Duration::from_secs(row_secs)));
    }
    let count = |s: RowStatus| outcomes.iter().filter(|o| o.status == s).count();
    let (pass, fail, skipped) = (count(RowStatus::Pass), count(RowStatus::Fail), count(RowStatus::Skipped));
    let code = if fail > 0 {
        EXIT_MISMATCH
    } else if outcomes.iter().any(|o| o.budget_exceeded) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    };

    let mut text = String::new();
    if outcomes.is_empty() {
        text.push_str("0 rows matched the filter\n");
    }
    let mut csv = Vec::new();
    for o in &outcomes {
        let r = &o.row;
        let status = match o.status {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Skipped => "SKIPPED",
        };
        let _ = write!(
            text,
            "{status:<7} n={} k={} {} dims<={} expected {:?}",
            r.n, r.k, r.coefficients, r.max_dim, r.betti
        );
        if let Some(p) = &o.computed {
            let _ = write!(text, " computed {:?}", p.betti);
        }
        if let Some(why) = &o.reason {
            let _ = write!(text, " ({why})");
        }
        let _ = writeln!(text, "  [{}]", r.source);
        if let Some(p) = &o.computed {
            csv.extend(profile_rows(Some(r.n), r.k, p, &format!("{status}: {}", r.source)));
        }
    }
    let _ = writeln!(text, "{pass} passed, {fail} failed, {skipped} skipped");

    Ok(Report {
        command: "verify-table",
        config: None,
        result: json!({
            "golden_version": table.version,
            "rows": outcomes,
            "summary": { "rows": outcomes.len(), "pass": pass, "fail": fail, "skipped": skipped },
        }),
        text,
        csv,
        csv_header: BETTI_HEADER,
        code,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(
    cli: &Cli,
    args: &SpaceArgs,
    max_dim: Option<usize>,
    coefficients: Coefficients,
    method: ConnectivityMethod,
    max_k: u32,
    budget: &BudgetArgs,
    started: Instant,
) -> Result<Report> {
    let space = build_space(args)?;
    let n = match space.label() {
        SpaceLabel::Torus { n } => n,
        _ => return Err(Error::Invalid("certify works on torus spaces only".into())),
    };
    let k = args.k;
    let graph = vr_graph(&space, k);
    let antipode = antipode_check(&graph);
    let conn = connectivity_bound(&space, k, max_k, method)?;

    // structural shortcuts first; they give the complete profile for free
    let (profile, profile_source, depth) = if graph.is_complete() {
        let p = BettiProfile::from_betti(coefficients, vec![1]);
        (p, "complete graph: the complex is a simplex", None)
    } else if antipode.is_antipode {
        let m = antipode.pairs.len();
        (cross_polytope_profile(m), "antipode graph: boundary of the cross-polytope", None)
    } else {
        let depth = max_dim.or_else(|| {
            regime_claim(n, k, Some(&antipode))
                .and_then(|(c, _)| c.expected_betti())
                .map(|b| b.len() - 1)
        });
        let (p, _) = compute_profile(
            &space,
            k,
            depth,
            coefficients,
            budget.simplex_budget,
            &limits(budget, started),
        )?;
        (p, "computed", depth)
    };
    let fp = fingerprint(&profile, Some(&antipode), Some(&conn), n, k)?;

    let config = RunConfig {
        space: space.label(),
        k,
        coefficients: Some(profile.coefficients),
        max_dim: depth,
        simplex_budget: budget.simplex_budget,
        time_budget_secs: budget.time_budget_secs,
        snf_column_budget: budget.snf_column_budget,
        format: cli.format,
        thread_count: cli.threads,
    };
    let mut text = format!("{}: {}\n", fp.claim_label, fp.verdict);
    let _ = writeln!(text, "  basis: {}", fp.evidence.basis);
    let _ = writeln!(text, "  profile ({profile_source}): {:?}", profile.betti);
    if let Some(m) = antipode.cross_polytope_dim {
        let _ = writeln!(text, "  antipode graph, cross-polytope dimension {m}");
    }
    let _ = writeln!(
        text,
        "  ball intersection ({:?}, r = {}): min ball {}, certified k = {}",
        conn.method, conn.scale, conn.min_ball_size, conn.certified_k
    );
    for note in &fp.evidence.notes {
        let _ = writeln!(text, "  {note}");
    }
    let source = format!("{} {}", fp.claim_label, fp.verdict);
    let code = if fp.verdict == Verdict::Inconsistent {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(Report {
        command: "certify",
        config: Some(config),
        csv: profile_rows(Some(n), k, &profile, &source),
        csv_header: BETTI_HEADER,
        result: json!({
            "profile_source": profile_source,
            "fingerprint": fp,
        }),
        text,
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("torusvr").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert_eq!(parse_range("4..8").unwrap(), 4..=8);
        assert_eq!(parse_range("4..=8").unwrap(), 4..=8);
        assert_eq!(parse_range("..8").unwrap(), 0..=8);
        assert_eq!(parse_range("4..").unwrap(), 4..=u32::MAX);
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn shipped_golden_parses() {
        let t = GoldenTable::builtin();
        assert!(t.rows.len() > 20);
        assert!(t.rows.iter().any(|r| r.skip));
        assert!(t.find(4, 2, Coefficients::Gf2).is_some());
    }

    #[test]
    fn golden_validation() {
        let bad = "version = 1\n[[row]]\nn = 4\nk = 1\ncoefficients = \"gf2\"\nmax_dim = 2\nbetti = [1, 17]\nsource = \"x\"\n";
        assert!(GoldenTable::parse(bad).is_err());
        assert!(GoldenTable::parse("version = 2\nrow = []\n").is_err());
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-4,4,-3,3").unwrap(), Window::new(-4, 4, -3, 3).unwrap());
        assert!(parse_window("1,2,3").is_err());
        assert!(parse_window("4,-4,0,0").is_err());
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_args(&["betti", "--space", "torus", "--k", "2"]);
        assert_eq!(code, EXIT_VALIDATION);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "invalid");

        let (code, _, _) = run_args(&["betti", "--space", "torus", "--n", "6", "--k", "2", "--simplex-budget", "10"]);
        assert_eq!(code, EXIT_BUDGET);

        let (code, _, _) = run_args(&["bogus"]);
        assert_eq!(code, EXIT_VALIDATION);

        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify-table"));
    }

    #[test]
    fn unsupported_regime_is_not_a_mismatch() {
        let (code, out, _) = run_args(&["facets", "--space", "torus", "--n", "5", "--k", "2"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["closed_form"], false);
        assert_eq!(v["result"]["source"], "brute-force");

        let (code, _, err) = run_args(&["facets", "--space", "torus", "--n", "5", "--k", "2", "--mode", "compare"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("unsupported_regime"));
    }
}
