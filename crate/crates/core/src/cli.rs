//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when validation fails or an input file is
//! unreadable or malformed, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{ratio_trend, verify_qcss_family, verify_sequence_family, TrendKind, TrendPoint, Verdict};
use crate::correlation::{measure_theta_max, CorrelationReport, Engine};
use crate::field::FieldContext;
use crate::generators::{prop1_family, thm41_family, thm41_row_deleted, thm42_family, Permutation};
use crate::interleave::interleave_family;
use crate::io::{self, Document, GOLDEN};
use crate::model::qcss_lower_bound;

/// Number of tied maxima listed in a report.
const ARGMAX_LISTED: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "qcss", version, about = "Quasi-complementary sequence set toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe GF(p^n): modulus, primitive element and trace distribution.
    FieldInfo {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
    },
    /// Generate a family and write it as QSEQ1/QMAT1.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Interleave a QSEQ1 sequence family into K×N matrices.
    Interleave {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        flock: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Measure the correlation spectrum of a family.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        engine: String,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a family's declared maximum, bound and case structure.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// Tabulate measured maximum against the lower bound over a size sweep.
    Trend {
        #[arg(long)]
        kind: String,
        /// Comma-separated sizes; `q:K` fixes the flock size for prop1.
        #[arg(long)]
        points: String,
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// Write the bundled example corpus into a directory.
    ExportGolden {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Destination file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RhoArg {
    /// `identity`, `reversal`, `negation` or a file of whitespace-separated integers.
    #[arg(long, default_value = "identity")]
    rho: String,
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    Prop1 {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: Output,
    },
    Thm41 {
        #[arg(long)]
        len: usize,
        #[command(flatten)]
        rho: RhoArg,
        #[command(flatten)]
        out: Output,
    },
    Thm42 {
        #[arg(long)]
        len: usize,
        #[command(flatten)]
        rho: RhoArg,
        #[command(flatten)]
        out: Output,
    },
    #[command(name = "thm41-del")]
    Thm41Del {
        #[arg(long)]
        len: usize,
        /// 1-based row to delete.
        #[arg(long)]
        row: usize,
        #[command(flatten)]
        rho: RhoArg,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Usage(String),
    Validation(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Validation(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) => m,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(flag: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {e}"))
}

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Validation(e.to_string())
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Validation(format!("{}: {e}", path.display()))
}

/// Entry point for the binary.
pub fn run() -> i32 {
    configure_threads();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn configure_threads() {
    if let Some(n) = std::env::var("THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs one invocation with explicit arguments and output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::FieldInfo { p, n } => field_info(p, n, out),
        Command::Gen { family } => gen(family, out),
        Command::Interleave { input, flock, output } => interleave_cmd(&input, flock, &output, err),
        Command::Analyze { input, engine, report } => analyze(&input, &engine, report.as_deref(), out),
        Command::Verify { input, engine } => verify(&input, &engine, out),
        Command::Trend { kind, points, engine } => trend(&kind, &points, &engine, out),
        Command::ExportGolden { dir } => export_golden(&dir, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(invalid)
}

fn field_info(p: u32, n: u32, out: &mut dyn Write) -> Outcome {
    let ctx = FieldContext::new(p, n).map_err(|e| usage("--p/--n", e))?;
    let coeffs: Vec<String> = ctx.modulus().iter().map(u32::to_string).collect();
    let dist: Vec<String> = ctx.trace_distribution().iter().map(usize::to_string).collect();
    let text = format!(
        "q {}\np {}\nn {}\nmodulus {}\nalpha {}\ntrace-distribution {}\n",
        ctx.q(),
        ctx.p(),
        ctx.n(),
        coeffs.join(","),
        ctx.alpha(),
        dist.join(",")
    );
    emit(out, &text)
}

fn parse_engine(name: &str) -> Result<Engine, Failure> {
    Engine::parse(name).map_err(|e| usage("--engine", e))
}

fn load_rho(arg: &str, len: usize) -> Result<Permutation, Failure> {
    if let Ok(p) = Permutation::named(arg, len) {
        return Ok(p);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(usage("--rho", format!("{arg:?} is neither a known name nor a file")));
    }
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let table = text
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    if table.len() != len {
        return Err(invalid(format!(
            "{}: permutation has {} entries, expected {len}",
            path.display(),
            table.len()
        )));
    }
    Permutation::from_table(table).map_err(invalid)
}

fn write_target(target: Option<&Path>, text: &str, out: &mut dyn Write) -> Outcome {
    match target {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => emit(out, text),
    }
}

fn gen(family: GenFamily, out: &mut dyn Write) -> Outcome {
    let (text, target) = match family {
        GenFamily::Prop1 { p, n, out: o } => {
            let ctx = FieldContext::new(p, n).map_err(|e| usage("--p/--n", e))?;
            let fam = prop1_family(&ctx).map_err(|e| usage("--p/--n", e))?;
            (io::serialize_sequences(&fam), o.output)
        }
        GenFamily::Thm41 { len, rho, out: o } => {
            let rho = load_rho(&rho.rho, len)?;
            let fam = thm41_family(len, &rho).map_err(|e| usage("--len", e))?;
            (io::serialize_matrices(&fam), o.output)
        }
        GenFamily::Thm42 { len, rho, out: o } => {
            let rho = load_rho(&rho.rho, len)?;
            let fam = thm42_family(len, &rho).map_err(|e| usage("--len/--rho", e))?;
            (io::serialize_matrices(&fam), o.output)
        }
        GenFamily::Thm41Del { len, row, rho, out: o } => {
            let rho = load_rho(&rho.rho, len)?;
            let fam = thm41_row_deleted(len, &rho, row).map_err(|e| usage("--len/--row", e))?;
            (io::serialize_matrices(&fam), o.output)
        }
    };
    write_target(target.as_deref(), &text, out)
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    io::parse(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn interleave_cmd(input: &Path, flock: usize, output: &Path, err: &mut dyn Write) -> Outcome {
    let fam = match load(input)? {
        Document::Sequences(f) => f,
        Document::Matrices(_) => {
            return Err(usage("--input", "expected a QSEQ1 sequence family"));
        }
    };
    let qcss = interleave_family(&fam, flock).map_err(|e| usage("--flock", e))?;
    if let Some(issue) = qcss.qcss_shape_issue() {
        let _ = writeln!(err, "warning: {issue}");
    }
    fs::write(output, io::serialize_matrices(&qcss)).map_err(|e| io_err(output, e))
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

fn render_report(r: &CorrelationReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("engine {}\n", r.engine.name()));
    s.push_str(&format!("members {}\nflock {}\nlength {}\n", r.members, r.flock, r.length));
    s.push_str(&format!("triples {}\n", r.pair_count));
    s.push_str(&format!("peak {}\n", fmt6(r.peak)));
    s.push_str(&format!("measured-max {}\n", fmt6(r.measured_max)));
    match qcss_lower_bound(r.members, r.flock, r.length) {
        Ok(b) if b > 0.0 => {
            s.push_str(&format!("bound {}\n", fmt6(b)));
            s.push_str(&format!("ratio {}\n", fmt6(r.measured_max / b)));
        }
        _ => s.push_str("bound undefined\n"),
    }
    s.push_str(&format!("argmax-count {}\n", r.argmax.len()));
    for (i, j, tau) in r.argmax.iter().take(ARGMAX_LISTED) {
        s.push_str(&format!("argmax {i} {j} {tau}\n"));
    }
    for (&key, &count) in &r.histogram {
        s.push_str(&format!("histogram {} {count}\n", fmt6(key as f64 / 1e6)));
    }
    s
}

fn analyze(input: &Path, engine: &str, report: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let engine = parse_engine(engine)?;
    let result = match load(input)? {
        Document::Sequences(f) => measure_theta_max(&f, engine),
        Document::Matrices(f) => measure_theta_max(&f, engine),
    }
    .map_err(invalid)?;
    let text = render_report(&result);
    if let Some(path) = report {
        fs::write(path, &text).map_err(|e| io_err(path, e))?;
    }
    emit(out, &text)
}

fn render_verdict(v: &Verdict) -> String {
    let yes_no = |b: bool| if b { "pass" } else { "fail" };
    let mut s = render_report(&v.report);
    match v.declared {
        Some(d) => s.push_str(&format!("declared {}\n", fmt6(d))),
        None => s.push_str("declared none\n"),
    }
    s.push_str(&format!("check declared {}\n", yes_no(v.within_declared)));
    if let Some(ok) = v.above_bound {
        s.push_str(&format!("check bound {}\n", yes_no(ok)));
    }
    if let (Some(ok), Some(allowed)) = (v.case_structure, &v.expected_support) {
        let values: Vec<String> = allowed.iter().map(|&a| fmt6(a)).collect();
        s.push_str(&format!("check support {} allowed {}\n", yes_no(ok), values.join(",")));
    }
    if let Some((row, violations)) = &v.table_row {
        s.push_str(&format!("check table-row {row} {}\n", yes_no(violations.is_empty())));
        for msg in violations {
            s.push_str(&format!("violation {msg}\n"));
        }
    }
    s.push_str(&format!("verdict {}\n", yes_no(v.passed())));
    s
}

fn verify(input: &Path, engine: &str, out: &mut dyn Write) -> Outcome {
    let engine = parse_engine(engine)?;
    let verdict = match load(input)? {
        Document::Sequences(f) => verify_sequence_family(&f, engine),
        Document::Matrices(f) => verify_qcss_family(&f, engine),
    }
    .map_err(invalid)?;
    emit(out, &render_verdict(&verdict))?;
    if verdict.passed() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("{} failed verification", input.display())))
    }
}

fn trend(kind: &str, points: &str, engine: &str, out: &mut dyn Write) -> Outcome {
    let kind = TrendKind::parse(kind).map_err(|e| usage("--kind", e))?;
    let points = TrendPoint::parse_list(points).map_err(|e| usage("--points", e))?;
    let engine = parse_engine(engine)?;
    let table = ratio_trend(kind, &points, engine);
    let mut s = format!("kind {}\nsize M K N measured bound ratio\n", kind.name());
    for r in &table.rows {
        s.push_str(&format!(
            "{} {} {} {} {} {} {}\n",
            r.size,
            r.m,
            r.k,
            r.n,
            fmt6(r.measured),
            fmt6(r.bound),
            fmt6(r.ratio)
        ));
    }
    for n in &table.notices {
        s.push_str(&format!("note {n}\n"));
    }
    s.push_str(&format!("direction {}\n", table.direction().name()));
    emit(out, &s)?;
    if table.rows.is_empty() {
        return Err(usage("--points", "no valid sweep point"));
    }
    Ok(())
}

fn export_golden(dir: &Path, out: &mut dyn Write) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (name, body) in GOLDEN {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        emit(out, &format!("wrote {}\n", path.display()))?;
    }
    Ok(())
}
