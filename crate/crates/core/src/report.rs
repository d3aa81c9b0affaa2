//! Machine-readable and tabular renderings of census results.

use crate::classify::{BoundAudit, Counts, EnumerationReport, Tolerances};
use crate::homotopy::PathAccounting;
use crate::intpoly::KnownAnswerAudit;
use crate::systems::{ClassTag, SolutionPoint, Variant};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float written with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sci(pub f64);

impl Serialize for Sci {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionJson {
    pub y: Vec<[Sci; 2]>,
    pub residual: Sci,
    pub multiplicity: usize,
    pub class: ClassTag,
    pub is_real: bool,
}

impl From<&SolutionPoint> for SolutionJson {
    fn from(p: &SolutionPoint) -> Self {
        Self {
            y: p.y.iter().map(|z| [Sci(z.re), Sci(z.im)]).collect(),
            residual: Sci(p.residual),
            multiplicity: p.multiplicity,
            class: p.class_tag,
            is_real: p.is_real,
        }
    }
}

/// Serialize points as lists of `[re, im]` pairs.
pub fn serialize_points<S: Serializer>(points: &[Vec<Complex64>], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<[Sci; 2]>> = points
        .iter()
        .map(|p| p.iter().map(|z| [Sci(z.re), Sci(z.im)]).collect())
        .collect();
    v.serialize(s)
}

/// Which solutions a report lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionSet {
    #[default]
    All,
    P0,
    /// `P1 \ P0`.
    P1,
    Pt,
    /// No vanishing coordinate, `P \ P0`.
    Nonzero,
}

impl SolutionSet {
    pub fn contains(self, p: &SolutionPoint) -> bool {
        match self {
            SolutionSet::All => true,
            SolutionSet::P0 => p.class_tag == ClassTag::P0,
            SolutionSet::P1 => p.class_tag == ClassTag::P1MinusP0,
            SolutionSet::Pt => p.class_tag == ClassTag::Pt,
            SolutionSet::Nonzero => p.class_tag != ClassTag::P0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Audits<'a> {
    pub partition: bool,
    pub bounds_hold: bool,
    pub strict_cases_hold: bool,
    pub reverification_failures: &'a [usize],
    /// `None` when no lower-degree census was run.
    pub recursion: Option<bool>,
    pub expected_total: Option<u64>,
    pub expected_total_matches: Option<bool>,
    pub known_answers: Option<&'a KnownAnswerAudit>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationDocument<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub degree: usize,
    pub variant: Variant,
    pub solution_set: SolutionSet,
    pub gamma_seed: u64,
    pub tolerances: Tolerances,
    pub path_accounting: PathAccounting,
    pub solutions: Vec<SolutionJson>,
    pub counts: Counts,
    pub bounds: &'a BoundAudit,
    pub audits: Audits<'a>,
}

impl<'a> EnumerationDocument<'a> {
    pub fn new(
        r: &'a EnumerationReport,
        set: SolutionSet,
        recursion: Option<bool>,
        known_answers: Option<&'a KnownAnswerAudit>,
    ) -> Self {
        let passed = r.audits_pass() && recursion != Some(false) && known_answers.is_none_or(|k| k.passes);
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            degree: r.degree_n,
            variant: r.variant,
            solution_set: set,
            gamma_seed: r.gamma_seed,
            tolerances: r.tolerances,
            path_accounting: r.path_accounting,
            solutions: r.solutions.iter().filter(|p| set.contains(p)).map(Into::into).collect(),
            counts: r.counts,
            bounds: &r.bounds,
            audits: Audits {
                partition: r.partition_holds(),
                bounds_hold: r.bounds.violations().next().is_none(),
                strict_cases_hold: r.bounds.strict.iter().all(|s| s.holds),
                reverification_failures: &r.reverification_failures,
                recursion,
                expected_total: r.expected_total,
                expected_total_matches: r.expected_total.map(|e| e == r.counts.total_distinct),
                known_answers,
                passed,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.audits.passed
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// One row per solution: degree, class, multiplicity, residual, then
/// `y1_re, y1_im, ...`.
pub fn solutions_csv(degree: usize, solutions: &[SolutionPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["degree", "class", "multiplicity", "residual"]
        .map(String::from)
        .to_vec();
    for k in 1..=degree {
        header.push(format!("y{k}_re"));
        header.push(format!("y{k}_im"));
    }
    w.write_record(&header).expect("in-memory write");
    for p in solutions {
        let mut row = vec![
            degree.to_string(),
            p.class_tag.name().to_string(),
            p.multiplicity.to_string(),
            format!("{:.16e}", p.residual),
        ];
        for z in &p.y {
            row.push(format!("{:.16e}", z.re));
            row.push(format!("{:.16e}", z.im));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.9}", z.re)
    } else {
        format!("{:.9}{:+.9}i", z.re, z.im)
    }
}

pub fn solutions_table(solutions: &[SolutionPoint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:<12} {:>4}  {:>9}  y", "#", "class", "mult", "residual");
    for (i, p) in solutions.iter().enumerate() {
        let ys: Vec<String> = p.y.iter().map(|&z| fmt_complex(z)).collect();
        let _ = writeln!(
            out,
            "{:>4}  {:<12} {:>4}  {:>9.2e}  ({})",
            i + 1,
            p.class_tag.name(),
            p.multiplicity,
            p.residual,
            ys.join(", ")
        );
    }
    out
}

pub fn bounds_table(b: &BoundAudit) -> String {
    let mut out = String::new();
    if b.exempt {
        out.push_str("bounds are stated from degree 3 on; listed for reference only\n");
    }
    let _ = writeln!(out, "{:<6} {:<7} {:>8} {:>8}  status", "bound", "set", "count", "limit");
    for e in &b.entries {
        let status = match (e.holds, e.equality) {
            (false, _) => "VIOLATED",
            (true, true) => "equality",
            (true, false) => "strict",
        };
        let _ = writeln!(
            out,
            "{:<6} {:<7} {:>8} {:>8}  {status}",
            e.name, e.set, e.count, e.bound
        );
    }
    for s in &b.strict {
        let _ = writeln!(
            out,
            "{:<8} {:<28} {}",
            s.name,
            s.statement,
            if s.holds { "ok" } else { "FAILED" }
        );
    }
    if let Some(r) = &b.equality_readings {
        let _ = writeln!(out, "equalities ineq1-3: {}", r.ineq1_to_3);
        let _ = writeln!(out, "equalities ineq4-6: {}", r.ineq4_to_6);
    }
    out
}

pub fn enumeration_table(doc: &EnumerationDocument, r: &EnumerationReport) -> String {
    let mut out = String::new();
    let a = &doc.path_accounting;
    let c = &doc.counts;
    let _ = writeln!(out, "degree {}  seed {}", doc.degree, doc.gamma_seed);
    let _ = writeln!(
        out,
        "paths: bezout {}  converged {}  at_infinity {}  failed {}",
        a.bezout, a.converged, a.at_infinity, a.failed
    );
    let _ = writeln!(
        out,
        "counts: total {}  p0 {}  p1\\p0 {}  pt {}  real_all_nonzero {}",
        c.total_distinct, c.p0, c.p1_minus_p0, c.pt, c.real_all_nonzero
    );
    let listed: Vec<SolutionPoint> = r
        .solutions
        .iter()
        .filter(|p| doc.solution_set.contains(p))
        .cloned()
        .collect();
    out.push_str(&solutions_table(&listed));
    out.push_str(&bounds_table(doc.bounds));
    if let Some(rec) = doc.audits.recursion {
        let _ = writeln!(
            out,
            "recursion from degree {}: {}",
            doc.degree - 1,
            if rec { "ok" } else { "FAILED" }
        );
    }
    if !doc.audits.reverification_failures.is_empty() {
        let _ = writeln!(
            out,
            "re-verification failures: {:?}",
            doc.audits.reverification_failures
        );
    }
    let _ = writeln!(out, "audits: {}", if doc.passed() { "passed" } else { "FAILED" });
    out
}
