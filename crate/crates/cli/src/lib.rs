//! `triselect` subcommands. Exit codes: 0 success, 2 input error, 3 a
//! certificate or invariant check failed.

pub mod instance;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use triselect::certificate::verify_items;
use triselect::generators::{choose3, gen_instance, Family, GeneratorSpec, TriangleCount};
use triselect::geometry::format_rational;
use triselect::selection::{empirical_constant, run_selection};
use triselect::{exact_max_depth, Error, PointSet, SelectionCertificate, SelectionOptions, TriangleSet};

pub use instance::{format_instance, parse_instance};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Check(_) => EXIT_CHECK,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Check(m) => m,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "triselect", version, about = "Find a point covered by many triangles, with a checkable certificate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance file.
    Gen(GenArgs),
    /// Run the selection pipeline and write its certificate.
    Select(SelectArgs),
    /// Compute the exact maximum depth.
    Oracle(OracleArgs),
    /// Run the pipeline over families and sizes and emit a CSV table.
    Bench(BenchArgs),
    /// Re-check a certificate against its instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Triangle count, or ALL.
    #[arg(long, default_value = "ALL")]
    pub m: TriangleCount,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub cert_out: Option<PathBuf>,
    /// Print a JSON summary instead of the plain line.
    #[arg(long)]
    pub json: bool,
    /// Run the exact oracle (check C10) up to this many points.
    #[arg(long, default_value_t = 12)]
    pub oracle_max_n: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated family names.
    #[arg(long, default_value = "random_integer", value_delimiter = ',')]
    pub families: Vec<Family>,
    /// Inclusive range `lo..hi`.
    #[arg(long, default_value = "8..10")]
    pub n_range: String,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `all`, `n2` (n², capped at C(n,3)), or a count.
    #[arg(long, default_value = "all")]
    pub m: String,
    #[arg(long, default_value_t = 12)]
    pub oracle_max_n: usize,
    /// Leave runtime_ms empty so repeated runs are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Select(a) => cmd_select(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Input(format!("write failed: {e}")))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => emit(out, text),
    }
}

pub fn load_instance(path: &Path) -> CliResult<(PointSet, TriangleSet)> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    parse_instance(&text, label).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> CliResult<()> {
    let spec = GeneratorSpec {
        family: a.family,
        n: a.n,
        m: a.m,
        seed: a.seed,
    };
    let (s, t) = gen_instance(&spec).map_err(|e| match e {
        Error::TooManyTriangles { .. } | Error::TooFewPoints(_) => CliError::Input(e.to_string()),
        other => CliError::Check(other.to_string()),
    })?;
    write_or_print(a.out.as_deref(), &format_instance(&s, &t), out)
}

#[derive(Debug, Serialize)]
struct SelectSummary<'a> {
    n: usize,
    m: usize,
    j_star: usize,
    depth_triangles: usize,
    bound_rhs: String,
    depth_max: Option<usize>,
    x0: &'a triselect::Point2,
    all_checks_pass: bool,
}

fn pipeline_error(e: Error) -> CliError {
    match e {
        Error::InstanceTooSmall { .. } | Error::NoTriangles => CliError::Input(e.to_string()),
        other => CliError::Check(other.to_string()),
    }
}

pub fn cmd_select(a: &SelectArgs, out: &mut dyn Write) -> CliResult<()> {
    let (s, t) = load_instance(&a.input)?;
    let opts = SelectionOptions {
        oracle_max_n: Some(a.oracle_max_n),
        ..SelectionOptions::default()
    };
    let cert = run_selection(&s, &t, &opts).map_err(pipeline_error)?;
    if let Some(p) = &a.cert_out {
        let json = certificate_json(&cert);
        fs::write(p, json).map_err(|e| io_err(p, e))?;
    }
    if a.json {
        let summary = SelectSummary {
            n: cert.n,
            m: cert.m,
            j_star: cert.j_star,
            depth_triangles: cert.depth_triangles,
            bound_rhs: format_rational(&cert.bound_rhs),
            depth_max: cert.depth_max,
            x0: &cert.x0,
            all_checks_pass: cert.all_pass(),
        };
        let text = serde_json::to_string(&summary).expect("summary serializes");
        emit(out, &format!("{text}\n"))?;
    } else {
        emit(out, &format!("{}\n", cert.summary_line()))?;
    }
    match cert.first_failure() {
        Some(c) => Err(CliError::Check(format!("chain check {} failed: {c}", c.name))),
        None => Ok(()),
    }
}

pub fn certificate_json(cert: &SelectionCertificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate serializes");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct OracleSummary<'a> {
    depth: usize,
    point: &'a triselect::Point2,
}

pub fn cmd_oracle(a: &OracleArgs, out: &mut dyn Write) -> CliResult<()> {
    let (s, t) = load_instance(&a.input)?;
    let r = exact_max_depth(&s, &t).map_err(pipeline_error)?;
    let text = if a.json {
        serde_json::to_string(&OracleSummary {
            depth: r.depth,
            point: &r.point,
        })
        .expect("summary serializes")
    } else {
        format!(
            "{} {} {}",
            r.depth,
            format_rational(&r.point.x),
            format_rational(&r.point.y)
        )
    };
    emit(out, &format!("{text}\n"))
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let (s, t) = load_instance(&a.input)?;
    let text = fs::read_to_string(&a.cert).map_err(|e| io_err(&a.cert, e))?;
    let cert: SelectionCertificate = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: invalid certificate: {e}", a.cert.display())))?;
    let items = verify_items(&s, &t, &cert);
    let mut report = String::new();
    for it in &items {
        if it.ok() {
            report.push_str(&format!("ok   {}\n", it.name));
        } else {
            report.push_str(&format!("FAIL {}: {}\n", it.name, it.problems.join("; ")));
        }
    }
    emit(out, &report)?;
    match items.iter().find(|i| !i.ok()) {
        Some(it) => Err(CliError::Check(format!("check {} failed", it.name))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MSpec {
    All,
    NSquared,
    Count(usize),
}

impl MSpec {
    pub fn parse(s: &str) -> CliResult<MSpec> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(MSpec::All),
            "n2" => Ok(MSpec::NSquared),
            other => other
                .parse()
                .map(MSpec::Count)
                .map_err(|_| CliError::Input(format!("--m expects all, n2 or a count, got {s:?}"))),
        }
    }

    pub fn resolve(self, n: usize) -> CliResult<TriangleCount> {
        match self {
            MSpec::All => Ok(TriangleCount::All),
            MSpec::NSquared => Ok(TriangleCount::Count((n * n).min(choose3(n)))),
            MSpec::Count(m) if m > choose3(n) => Err(CliError::Input(format!(
                "m exceeds C(n,3): m = {m}, C({n},3) = {}",
                choose3(n)
            ))),
            MSpec::Count(m) => Ok(TriangleCount::Count(m)),
        }
    }
}

pub fn parse_n_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("--n-range expects lo..hi, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo > hi || lo < 4 {
        return Err(CliError::Input(format!("--n-range needs 4 <= lo <= hi, got {s:?}")));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub j_star: usize,
    #[serde(rename = "M0")]
    pub m0: usize,
    #[serde(rename = "M1_ratio_num")]
    pub m1_ratio_num: String,
    #[serde(rename = "M1_ratio_den")]
    pub m1_ratio_den: String,
    #[serde(rename = "M2")]
    pub m2: usize,
    pub depth_alg: usize,
    pub depth_max: Option<usize>,
    pub bound_rhs: String,
    pub c_emp: String,
    pub runtime_ms: Option<u128>,
}

fn bench_row(family: Family, n: usize, m: TriangleCount, seed: u64, oracle_max_n: usize, timing: bool) -> CliResult<BenchRow> {
    let (s, t) = gen_instance(&GeneratorSpec { family, n, m, seed }).map_err(|e| CliError::Input(e.to_string()))?;
    let start = Instant::now();
    let opts = SelectionOptions {
        oracle_max_n: Some(oracle_max_n),
        ..SelectionOptions::default()
    };
    let cert = run_selection(&s, &t, &opts).map_err(pipeline_error)?;
    let elapsed = start.elapsed().as_millis();
    if let Some(c) = cert.first_failure() {
        return Err(CliError::Check(format!("{family} n={n} seed={seed}: chain check {} failed", c.name)));
    }
    let ratio = triselect::Rational::new(cert.m1_size.into(), cert.n1.into());
    Ok(BenchRow {
        family: family.to_string(),
        n,
        m: cert.m,
        seed,
        j_star: cert.j_star,
        m0: cert.m0_size,
        m1_ratio_num: ratio.numer().to_string(),
        m1_ratio_den: ratio.denom().to_string(),
        m2: cert.m2_size,
        depth_alg: cert.depth_triangles,
        depth_max: cert.depth_max,
        bound_rhs: format_rational(&cert.bound_rhs),
        c_emp: format!("{:.6e}", empirical_constant(cert.depth_triangles, n, cert.m)),
        runtime_ms: timing.then_some(elapsed),
    })
}

/// Rows in (family, n, seed) order regardless of completion order.
pub fn bench_rows(a: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    let (lo, hi) = parse_n_range(&a.n_range)?;
    let mspec = MSpec::parse(&a.m)?;
    if a.families.is_empty() {
        return Err(CliError::Input("--families is empty".into()));
    }
    let mut jobs = Vec::new();
    for &family in &a.families {
        for n in lo..=hi {
            let m = mspec.resolve(n)?;
            for trial in 0..a.trials {
                jobs.push((family, n, m, a.seed.wrapping_add(trial)));
            }
        }
    }
    jobs.sort_by_key(|&(f, n, _, seed)| (f, n, seed));
    jobs.par_iter()
        .map(|&(f, n, m, seed)| bench_row(f, n, m, seed, a.oracle_max_n, !a.omit_timing))
        .collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let rows = bench_rows(a)?;
    write_or_print(a.csv_out.as_deref(), &bench_csv(&rows), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_range_parsing() {
        assert_eq!(parse_n_range("8..10").unwrap(), (8, 10));
        assert_eq!(parse_n_range("8..=10").unwrap(), (8, 10));
        assert!(parse_n_range("10..8").is_err());
        assert!(parse_n_range("2..8").is_err());
        assert!(parse_n_range("8").is_err());
    }

    #[test]
    fn m_spec() {
        assert_eq!(MSpec::parse("ALL").unwrap().resolve(6).unwrap(), TriangleCount::All);
        assert_eq!(MSpec::parse("n2").unwrap().resolve(10).unwrap(), TriangleCount::Count(100));
        assert_eq!(MSpec::parse("n2").unwrap().resolve(8).unwrap(), TriangleCount::Count(56));
        assert!(MSpec::parse("999").unwrap().resolve(6).is_err());
        assert!(MSpec::parse("lots").is_err());
    }
}
