use clap::{Args, Parser, Subcommand, ValueEnum};
use peculiar::classify::{
    check_conjecture, check_recursion, enumerate, stein_filter, BoundAudit, ConjectureProbe, Counts, EnumerationReport,
    Tolerances, MAX_ENUMERATE_DEGREE, MIN_ENUMERATE_DEGREE,
};
use peculiar::homotopy::{PathAccounting, Precision, TrackOptions};
use peculiar::intpoly::{
    certify_irreducible, known_irreducible_candidates, rational_roots, verify_known_answers, Certificate, IntPoly,
    KnownAnswerAudit, DEFAULT_PRIME_BOUND,
};
use peculiar::report::{
    bounds_table, enumeration_table, solutions_csv, solutions_table, to_json, EnumerationDocument, SolutionJson,
    SolutionSet, SCHEMA_VERSION, TOOL_VERSION,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod exit {
    pub const OK: u8 = 0;
    pub const AUDIT: u8 = 1;
    pub const SOLVER: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const IO: u8 = 74;
}

#[derive(Parser)]
#[command(
    name = "peculiar",
    version,
    about = "Enumerate and audit monic polynomials whose zeros are their coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the full system and print the classified census.
    Enumerate {
        #[command(flatten)]
        run: RunArgs,
        /// Which solutions to list (counts always cover all of them).
        #[arg(long, value_enum, default_value_t = SetArg::All)]
        set: SetArg,
    },
    /// Check the census against the bundled explicit solutions (degrees 2-4).
    Verify {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Audit the census counts against the six upper bounds.
    Bounds {
        #[command(flatten)]
        run: RunArgs,
    },
    /// List the real solutions with no vanishing coefficient.
    Stein {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Solve the unit-coefficient and truly-peculiar systems separately.
    Conjecture {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Certify irreducibility over the rationals by reduction mod p.
    Irreducible {
        /// Check the defining polynomials of the bundled explicit solutions.
        #[arg(long)]
        known_answers: bool,
        /// Integer coefficients, constant term first (e.g. `-1,0,2,2`).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        poly: Vec<i64>,
        #[arg(long, default_value_t = DEFAULT_PRIME_BOUND)]
        prime_bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(short = 'N', long = "degree")]
    degree: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads for path tracking; 0 uses every core, 1 runs serially.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    tol_accept: Option<f64>,
    #[arg(long)]
    tol_dedup: Option<f64>,
    #[arg(long, value_enum, default_value_t = PrecisionArg::Extended)]
    precision: PrecisionArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    All,
    P0,
    P1,
    Pt,
    Nonzero,
}

impl From<SetArg> for SolutionSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::All => SolutionSet::All,
            SetArg::P0 => SolutionSet::P0,
            SetArg::P1 => SolutionSet::P1,
            SetArg::Pt => SolutionSet::Pt,
            SetArg::Nonzero => SolutionSet::Nonzero,
        }
    }
}

enum Failure {
    Usage(String),
    Solver(String),
    Io(String),
}

impl RunArgs {
    fn options(&self, degrees: std::ops::RangeInclusive<usize>) -> Result<TrackOptions, Failure> {
        if !degrees.contains(&self.degree) {
            return Err(Failure::Usage(format!(
                "degree {} is outside the supported range {}..={}",
                self.degree,
                degrees.start(),
                degrees.end()
            )));
        }
        let defaults = TrackOptions::default();
        let opts = TrackOptions {
            gamma_seed: self.seed,
            workers: self.workers,
            accept_tol: self.tol_accept.unwrap_or(defaults.accept_tol),
            dedup_tol: self.tol_dedup.unwrap_or(defaults.dedup_tol),
            refine_precision: match self.precision {
                PrecisionArg::Double => Precision::Double,
                PrecisionArg::Extended => Precision::Extended,
            },
            ..defaults
        };
        opts.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(opts)
    }
}

fn census(n: usize, opts: &TrackOptions) -> Result<EnumerationReport, Failure> {
    enumerate(n, opts).map_err(|e| Failure::Solver(format!("degree {n}: {e}")))
}

/// Rendered output plus whether every audit passed.
struct Outcome {
    text: String,
    passed: bool,
}

#[derive(Serialize)]
struct Header {
    schema_version: u32,
    tool_version: &'static str,
}

const HEADER: Header = Header {
    schema_version: SCHEMA_VERSION,
    tool_version: TOOL_VERSION,
};

#[derive(Serialize)]
struct RunHeader {
    #[serde(flatten)]
    header: Header,
    degree: usize,
    gamma_seed: u64,
    tolerances: Tolerances,
    path_accounting: PathAccounting,
}

fn run_header(r: &EnumerationReport) -> RunHeader {
    RunHeader {
        header: HEADER,
        degree: r.degree_n,
        gamma_seed: r.gamma_seed,
        tolerances: r.tolerances,
        path_accounting: r.path_accounting,
    }
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn cmd_enumerate(run: &RunArgs, set: SetArg) -> Result<Outcome, Failure> {
    let opts = run.options(MIN_ENUMERATE_DEGREE..=MAX_ENUMERATE_DEGREE)?;
    let r = census(run.degree, &opts)?;
    let recursion = if run.degree > MIN_ENUMERATE_DEGREE {
        let prev = census(run.degree - 1, &opts)?;
        Some(check_recursion(&r, &prev).map_err(|e| Failure::Solver(e.to_string()))?)
    } else {
        None
    };
    let doc = EnumerationDocument::new(&r, set.into(), recursion, None);
    let text = match run.output.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let listed: Vec<_> = r
                .solutions
                .iter()
                .filter(|p| doc.solution_set.contains(p))
                .cloned()
                .collect();
            solutions_csv(r.degree_n, &listed)
        }
        Format::Table => enumeration_table(&doc, &r),
    };
    Ok(Outcome {
        text,
        passed: doc.passed(),
    })
}

fn cmd_verify(run: &RunArgs) -> Result<Outcome, Failure> {
    let opts = run.options(2..=4)?;
    let r = census(run.degree, &opts)?;
    let audit = verify_known_answers(run.degree, &r).map_err(|e| Failure::Solver(e.to_string()))?;

    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        run: RunHeader,
        known_answers: &'a KnownAnswerAudit,
        passed: bool,
    }
    #[derive(Serialize)]
    struct Row {
        class: &'static str,
        defining_degree: usize,
        points: usize,
        matched: usize,
        max_residual: f64,
    }
    let rows: Vec<Row> = audit
        .entries
        .iter()
        .map(|e| Row {
            class: e.class.name(),
            defining_degree: e.defining_degree,
            points: e.points,
            matched: e.matched,
            max_residual: e.max_residual,
        })
        .collect();
    let text = match run.output.format {
        Format::Json => to_json(&Doc {
            run: run_header(&r),
            known_answers: &audit,
            passed: audit.passes,
        }),
        Format::Csv => csv_rows(&rows),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(
                t,
                "{:<12} {:>6} {:>6} {:>7}  max residual",
                "class", "degree", "points", "matched"
            );
            for row in &rows {
                let _ = writeln!(
                    t,
                    "{:<12} {:>6} {:>6} {:>7}  {:.2e}",
                    row.class, row.defining_degree, row.points, row.matched, row.max_residual
                );
            }
            let _ = writeln!(
                t,
                "points {} of {} expected: {}",
                audit.total_points,
                audit.expected_points,
                if audit.passes { "passed" } else { "FAILED" }
            );
            t
        }
    };
    Ok(Outcome {
        text,
        passed: audit.passes,
    })
}

fn cmd_bounds(run: &RunArgs) -> Result<Outcome, Failure> {
    let opts = run.options(MIN_ENUMERATE_DEGREE..=MAX_ENUMERATE_DEGREE)?;
    let r = census(run.degree, &opts)?;
    let passed = r.audits_pass();

    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        run: RunHeader,
        counts: Counts,
        bounds: &'a BoundAudit,
        passed: bool,
    }
    let text = match run.output.format {
        Format::Json => to_json(&Doc {
            run: run_header(&r),
            counts: r.counts,
            bounds: &r.bounds,
            passed,
        }),
        Format::Csv => csv_rows(&r.bounds.entries),
        Format::Table => bounds_table(&r.bounds),
    };
    Ok(Outcome { text, passed })
}

fn cmd_stein(run: &RunArgs) -> Result<Outcome, Failure> {
    let opts = run.options(MIN_ENUMERATE_DEGREE..=MAX_ENUMERATE_DEGREE)?;
    let r = census(run.degree, &opts)?;
    let found = stein_filter(&r);

    #[derive(Serialize)]
    struct Doc {
        #[serde(flatten)]
        run: RunHeader,
        count: usize,
        solutions: Vec<SolutionJson>,
    }
    let text = match run.output.format {
        Format::Json => to_json(&Doc {
            run: run_header(&r),
            count: found.len(),
            solutions: found.iter().map(Into::into).collect(),
        }),
        Format::Csv => solutions_csv(r.degree_n, &found),
        Format::Table => solutions_table(&found),
    };
    Ok(Outcome { text, passed: true })
}

fn cmd_conjecture(run: &RunArgs) -> Result<Outcome, Failure> {
    let opts = run.options(4..=MAX_ENUMERATE_DEGREE)?;
    let r = census(run.degree, &opts)?;
    let probe = check_conjecture(run.degree, &opts, Some(&r)).map_err(|e| Failure::Solver(e.to_string()))?;
    let systems = [&probe.p1_nonzero, &probe.pt];
    let passed = !probe.in_scope
        || systems
            .iter()
            .all(|s| s.count_matches && s.consistent_with_census != Some(false));

    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        run: RunHeader,
        census_counts: Counts,
        probe: &'a ConjectureProbe,
        passed: bool,
    }
    #[derive(Serialize)]
    struct Row {
        system: &'static str,
        bezout: u64,
        converged: usize,
        at_infinity: usize,
        failed: usize,
        distinct: u64,
        expected: u64,
        multiple_points: u64,
        with_last_zero: u64,
        with_second_last_minus_one: u64,
        non_peculiar: u64,
        consistent_with_census: Option<bool>,
    }
    let rows: Vec<Row> = systems
        .iter()
        .map(|s| Row {
            system: s.variant.name(),
            bezout: s.bezout,
            converged: s.path_accounting.converged,
            at_infinity: s.path_accounting.at_infinity,
            failed: s.path_accounting.failed,
            distinct: s.distinct,
            expected: s.expected,
            multiple_points: s.multiple_points,
            with_last_zero: s.with_last_zero,
            with_second_last_minus_one: s.with_second_last_minus_one,
            non_peculiar: s.non_peculiar,
            consistent_with_census: s.consistent_with_census,
        })
        .collect();
    let text = match run.output.format {
        Format::Json => to_json(&Doc {
            run: run_header(&r),
            census_counts: r.counts,
            probe: &probe,
            passed,
        }),
        Format::Csv => csv_rows(&rows),
        Format::Table => {
            let mut t = String::new();
            let _ = writeln!(
                t,
                "{:<14} {:>7} {:>6} {:>6} {:>8} {:>8}  degenerate  census",
                "system", "bezout", "conv", "inf", "distinct", "expected"
            );
            for row in &rows {
                let census = match row.consistent_with_census {
                    Some(true) => "ok",
                    Some(false) => "MISMATCH",
                    None => "-",
                };
                let _ = writeln!(
                    t,
                    "{:<14} {:>7} {:>6} {:>6} {:>8} {:>8}  {:>10}  {census}",
                    row.system,
                    row.bezout,
                    row.converged,
                    row.at_infinity,
                    row.distinct,
                    row.expected,
                    row.with_last_zero + row.with_second_last_minus_one
                );
            }
            if !probe.in_scope {
                t.push_str("degree below 5: counts are reported, not audited\n");
            }
            t
        }
    };
    Ok(Outcome { text, passed })
}

fn cmd_irreducible(known: bool, poly: &[i64], prime_bound: u64, output: &OutputArgs) -> Result<Outcome, Failure> {
    let mut polys = if known {
        known_irreducible_candidates()
    } else {
        Vec::new()
    };
    let bundled = polys.len();
    if !poly.is_empty() {
        let p = IntPoly::new(poly.to_vec()).ok_or_else(|| Failure::Usage("--poly is the zero polynomial".into()))?;
        if p.degree() == 0 {
            return Err(Failure::Usage("--poly must have degree at least 1".into()));
        }
        polys.push(p);
    }
    if polys.is_empty() {
        return Err(Failure::Usage("give --known-answers and/or --poly".into()));
    }
    if prime_bound < 2 {
        return Err(Failure::Usage("--prime-bound must be at least 2".into()));
    }

    #[derive(Serialize)]
    struct Entry {
        poly: Vec<i64>,
        degree: usize,
        rational_roots: Vec<String>,
        certificate: Certificate,
    }
    let entries: Vec<Entry> = polys
        .iter()
        .map(|p| Entry {
            poly: p.coeffs().to_vec(),
            degree: p.degree(),
            rational_roots: rational_roots(p).iter().map(|r| r.to_string()).collect(),
            certificate: certify_irreducible(p, prime_bound),
        })
        .collect();
    // the bundled polynomials must all be certified; a user polynomial is
    // only reported
    let passed = entries[..bundled]
        .iter()
        .all(|e| matches!(e.certificate, Certificate::Irreducible { .. }));

    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(flatten)]
        header: Header,
        prime_bound: u64,
        results: &'a [Entry],
        passed: bool,
    }
    #[derive(Serialize)]
    struct Row {
        poly: String,
        degree: usize,
        rational_roots: String,
        certificate: &'static str,
        prime: Option<u64>,
    }
    let rows: Vec<Row> = entries
        .iter()
        .map(|e| Row {
            poly: e.poly.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
            degree: e.degree,
            rational_roots: e.rational_roots.join(" "),
            certificate: match e.certificate {
                Certificate::Irreducible { .. } => "irreducible",
                Certificate::Inconclusive => "inconclusive",
            },
            prime: match e.certificate {
                Certificate::Irreducible { prime } => Some(prime),
                Certificate::Inconclusive => None,
            },
        })
        .collect();
    let text = match output.format {
        Format::Json => to_json(&Doc {
            header: HEADER,
            prime_bound,
            results: &entries,
            passed,
        }),
        Format::Csv => csv_rows(&rows),
        Format::Table => {
            let mut t = String::new();
            for row in &rows {
                let cert = match row.prime {
                    Some(p) => format!("irreducible (mod {p})"),
                    None => "inconclusive".to_string(),
                };
                let _ = writeln!(t, "[{}]  degree {}  {cert}", row.poly, row.degree);
            }
            t
        }
    };
    Ok(Outcome { text, passed })
}

/// Write via a sibling temporary file so a failed run leaves no partial
/// output behind.
fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            std::fs::write(&tmp, text)
                .and_then(|()| std::fs::rename(&tmp, path))
                .map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    Failure::Io(format!("{}: {e}", path.display()))
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, output) = match &cli.command {
        Command::Enumerate { run, set } => (cmd_enumerate(run, *set), &run.output),
        Command::Verify { run } => (cmd_verify(run), &run.output),
        Command::Bounds { run } => (cmd_bounds(run), &run.output),
        Command::Stein { run } => (cmd_stein(run), &run.output),
        Command::Conjecture { run } => (cmd_conjecture(run), &run.output),
        Command::Irreducible {
            known_answers,
            poly,
            prime_bound,
            output,
        } => (cmd_irreducible(*known_answers, poly, *prime_bound, output), output),
    };
    let failure = match result {
        Ok(outcome) => match emit(&outcome.text, output.out.as_deref()) {
            Ok(()) => {
                return ExitCode::from(if outcome.passed { exit::OK } else { exit::AUDIT });
            }
            Err(f) => f,
        },
        Err(f) => f,
    };
    let (msg, code) = match failure {
        Failure::Usage(m) => (format!("usage error: {m}"), exit::USAGE),
        Failure::Solver(m) => (format!("solver failure: {m}"), exit::SOLVER),
        Failure::Io(m) => (format!("cannot write output: {m}"), exit::IO),
    };
    eprintln!("peculiar: {msg}");
    ExitCode::from(code)
}
