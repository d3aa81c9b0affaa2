//! Census of peculiar polynomials: classification into `P0`, `P1 \ P0`,
//! `Pt`, bound audits, the degree recursion, Stein's real filter and the
//! conjecture probe.

use crate::error::{Error, Result};
use crate::homotopy::{relative_distance, solve, PathAccounting, Precision, TrackOptions};
use crate::matching::bottleneck_assignment;
use crate::poly::{is_peculiar, MonicPoly};
use crate::systems::{build_full, build_p1_nonzero, build_pt, ClassTag, SolutionPoint, Variant};
use num_complex::Complex64;
use serde::Serialize;
use std::cmp::Ordering;

pub const MIN_ENUMERATE_DEGREE: usize = 2;
pub const MAX_ENUMERATE_DEGREE: usize = 8;

fn scale(y: &[Complex64]) -> f64 {
    y.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

fn has_zero(y: &[Complex64], tol: f64) -> bool {
    let s = scale(y);
    y.iter().any(|z| z.norm() <= tol * s)
}

fn has_unit(y: &[Complex64], tol: f64) -> bool {
    let s = scale(y);
    y.iter().any(|z| (z - 1.0).norm() <= tol * s)
}

/// `P0` if some coordinate vanishes, else `P1MinusP0` if some coordinate is
/// 1, else `Pt`. `tol` is relative to `max(1, |y|)`.
pub fn classify_solution(p: &SolutionPoint, tol: f64) -> ClassTag {
    if has_zero(&p.y, tol) {
        ClassTag::P0
    } else if has_unit(&p.y, tol) {
        ClassTag::P1MinusP0
    } else {
        ClassTag::Pt
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub accept: f64,
    pub dedup: f64,
    pub corrector: f64,
    pub refine_precision: Precision,
}

impl From<&TrackOptions> for Tolerances {
    fn from(o: &TrackOptions) -> Self {
        Self {
            accept: o.accept_tol,
            dedup: o.dedup_tol,
            corrector: o.corrector_tol,
            refine_precision: o.refine_precision,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub total_distinct: u64,
    pub p0: u64,
    pub p1_minus_p0: u64,
    pub pt: u64,
    /// All of `P1`, including points that also lie in `P0`.
    pub p1: u64,
    pub real_all_nonzero: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub set: &'static str,
    pub count: u64,
    pub bound: u64,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictEntry {
    pub name: &'static str,
    pub statement: String,
    pub holds: bool,
}

/// The two ways of reading which inequalities become equalities from
/// degree 5 on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityReadings {
    /// `ineq1`, `ineq2`, `ineq3` hold with equality. Incompatible with the
    /// strict cases.
    pub ineq1_to_3: bool,
    /// `ineq4`, `ineq5`, `ineq6` hold with equality. The consistent reading.
    pub ineq4_to_6: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundAudit {
    /// The inequalities are only claimed from degree 3 on.
    pub exempt: bool,
    pub entries: Vec<BoundEntry>,
    pub strict: Vec<StrictEntry>,
    /// Present from degree 5 on.
    pub equality_readings: Option<EqualityReadings>,
}

impl BoundAudit {
    pub fn violations(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(move |e| !self.exempt && !e.holds)
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Upper bounds `ineq1..ineq6` for degree `n >= 2`.
pub fn bound_values(n: usize) -> [u64; 6] {
    let n64 = n as u64;
    let f1 = factorial(n - 1);
    let f2 = factorial(n - 2);
    [
        factorial(n),
        f1,
        f1,
        (n64 - 1) * f1,
        (n64 - 2) * f2,
        (n64 * n64 + 3 - 3 * n64) * f2,
    ]
}

pub fn audit_bounds(n: usize, c: &Counts) -> BoundAudit {
    let bounds = bound_values(n);
    let quantities = [
        ("ineq1", "P", c.total_distinct),
        ("ineq2", "P0", c.p0),
        ("ineq3", "P1", c.p1),
        ("ineq4", "P\\P0", c.total_distinct - c.p0),
        ("ineq5", "P1\\P0", c.p1_minus_p0),
        ("ineq6", "Pt", c.pt),
    ];
    let entries: Vec<BoundEntry> = quantities
        .iter()
        .zip(bounds)
        .map(|(&(name, set, count), bound)| BoundEntry {
            name,
            set,
            count,
            bound,
            holds: count <= bound,
            equality: count == bound,
        })
        .collect();

    let mut strict = Vec::new();
    if n == 4 {
        strict.push(StrictEntry {
            name: "strict1",
            statement: format!("|P1\\P0| = {} < 4", c.p1_minus_p0),
            holds: c.p1_minus_p0 == 3,
        });
    }
    if n >= 4 {
        let nf = factorial(n);
        strict.push(StrictEntry {
            name: "strict2",
            statement: format!("|P| = {} < {nf}", c.total_distinct),
            holds: c.total_distinct < nf,
        });
        let f1 = factorial(n - 1);
        strict.push(StrictEntry {
            name: "strict3",
            statement: format!("|P1| = {} < {f1}", c.p1),
            holds: c.p1 < f1,
        });
    }
    let equality_readings = (n >= 5).then(|| EqualityReadings {
        ineq1_to_3: entries[..3].iter().all(|e| e.equality),
        ineq4_to_6: entries[3..].iter().all(|e| e.equality),
    });
    BoundAudit {
        exempt: n < 3,
        entries,
        strict,
        equality_readings,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub degree_n: usize,
    pub variant: Variant,
    pub gamma_seed: u64,
    pub tolerances: Tolerances,
    pub path_accounting: PathAccounting,
    #[serde(skip)]
    pub solutions: Vec<SolutionPoint>,
    pub counts: Counts,
    pub bounds: BoundAudit,
    /// Indices of solutions whose roots do not reproduce their coefficients.
    pub reverification_failures: Vec<usize>,
    /// `N! - 1` for `4 <= N`; conjecture-conditional, reported only.
    pub expected_total: Option<u64>,
}

impl EnumerationReport {
    pub fn partition_holds(&self) -> bool {
        let c = &self.counts;
        c.p0 + c.p1_minus_p0 + c.pt == c.total_distinct
    }

    /// Hard audits: partition, bounds, re-verification, strict cases.
    pub fn audits_pass(&self) -> bool {
        self.partition_holds()
            && self.bounds.violations().next().is_none()
            && self.bounds.strict.iter().all(|s| s.holds)
            && self.reverification_failures.is_empty()
    }
}

fn canonical_cmp(a: &SolutionPoint, b: &SolutionPoint) -> Ordering {
    fn key(x: f64) -> i64 {
        (x * 1e9).round() as i64
    }
    a.class_tag.cmp(&b.class_tag).then_with(|| {
        a.y.iter()
            .zip(&b.y)
            .map(|(u, v)| key(u.re).cmp(&key(v.re)).then(key(u.im).cmp(&key(v.im))))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Sort by class, then lexicographically on coordinates rounded to `1e-9`.
pub fn canonical_sort(solutions: &mut [SolutionPoint]) {
    solutions.sort_by(canonical_cmp);
}

fn is_real_nonzero(p: &SolutionPoint, tol: f64) -> bool {
    let s = scale(&p.y);
    p.y.iter().all(|z| z.im.abs() <= tol * s && z.norm() > tol * s)
}

/// Solutions with every coordinate real and nonzero.
pub fn stein_filter(r: &EnumerationReport) -> Vec<SolutionPoint> {
    r.solutions
        .iter()
        .filter(|p| is_real_nonzero(p, r.tolerances.dedup))
        .cloned()
        .collect()
}

pub fn enumerate(n: usize, opts: &TrackOptions) -> Result<EnumerationReport> {
    if n < MIN_ENUMERATE_DEGREE {
        return Err(Error::DegreeTooSmall {
            degree: n,
            min: MIN_ENUMERATE_DEGREE,
        });
    }
    if n > MAX_ENUMERATE_DEGREE {
        return Err(Error::CapacityExceeded {
            degree: n,
            max: MAX_ENUMERATE_DEGREE,
        });
    }
    let system = build_full(n)?;
    let outcome = solve(&system, opts)?;
    let tol = opts.dedup_tol;
    let mut solutions = outcome.solutions;
    for p in &mut solutions {
        p.class_tag = classify_solution(p, tol);
    }
    canonical_sort(&mut solutions);

    let reverification_failures = solutions
        .iter()
        .enumerate()
        .filter(|(_, p)| !is_peculiar(&MonicPoly::new(p.y.clone()), tol).unwrap_or(false))
        .map(|(i, _)| i)
        .collect();

    let count = |t| solutions.iter().filter(|p| p.class_tag == t).count() as u64;
    let counts = Counts {
        total_distinct: solutions.len() as u64,
        p0: count(ClassTag::P0),
        p1_minus_p0: count(ClassTag::P1MinusP0),
        pt: count(ClassTag::Pt),
        p1: solutions.iter().filter(|p| has_unit(&p.y, tol)).count() as u64,
        real_all_nonzero: solutions.iter().filter(|p| is_real_nonzero(p, tol)).count() as u64,
    };
    Ok(EnumerationReport {
        degree_n: n,
        variant: Variant::Full,
        gamma_seed: outcome.gamma_seed,
        tolerances: opts.into(),
        path_accounting: outcome.accounting,
        bounds: audit_bounds(n, &counts),
        counts,
        solutions,
        reverification_failures,
        expected_total: (n >= 4).then(|| factorial(n) - 1),
    })
}

/// Fails with `BoundViolation` if any count exceeds its bound.
pub fn check_bounds(r: &EnumerationReport) -> Result<&BoundAudit> {
    match r.bounds.violations().next() {
        Some(e) => Err(Error::BoundViolation {
            bound_name: e.name.to_string(),
            count: e.count,
            bound: e.bound,
        }),
        None => Ok(&r.bounds),
    }
}

/// Perfect matching of two point sets with every pair within `tol`
/// (relative distance).
fn sets_match(a: &[Vec<Complex64>], b: &[Vec<Complex64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|x| b.iter().map(|y| relative_distance(x, y)).collect())
        .collect();
    bottleneck_assignment(&cost).is_some_and(|m| m.max_cost <= tol)
}

/// Whether `y -> (y, 0)` maps the degree-`N-1` census one-to-one onto the
/// `P0` part of the degree-`N` census.
pub fn check_recursion(r_n: &EnumerationReport, r_prev: &EnumerationReport) -> Result<bool> {
    if r_n.degree_n != r_prev.degree_n + 1 {
        return Err(Error::DegreeMismatch {
            expected: r_prev.degree_n + 1,
            actual: r_n.degree_n,
        });
    }
    let lifted: Vec<Vec<Complex64>> = r_prev
        .solutions
        .iter()
        .map(|p| {
            let mut y = p.y.clone();
            y.push(Complex64::new(0.0, 0.0));
            y
        })
        .collect();
    let p0: Vec<Vec<Complex64>> = r_n
        .solutions
        .iter()
        .filter(|p| p.class_tag == ClassTag::P0)
        .map(|p| p.y.clone())
        .collect();
    Ok(sets_match(&lifted, &p0, r_n.tolerances.dedup))
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemProbe {
    pub variant: Variant,
    pub bezout: u64,
    pub path_accounting: PathAccounting,
    pub distinct: u64,
    pub expected: u64,
    pub count_matches: bool,
    /// Clusters with more than one path.
    pub multiple_points: u64,
    pub with_last_zero: u64,
    pub with_second_last_minus_one: u64,
    /// Points that fail the root-based peculiarity check.
    pub non_peculiar: u64,
    /// Agreement with the matching class of a full census, when supplied.
    pub consistent_with_census: Option<bool>,
    #[serde(skip)]
    pub solutions: Vec<SolutionPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureProbe {
    pub degree_n: usize,
    /// The conjecture is stated from degree 5 on.
    pub in_scope: bool,
    pub p1_nonzero: SystemProbe,
    pub pt: SystemProbe,
}

fn probe(
    variant: Variant,
    system: &crate::systems::AlgebraicSystem,
    expected: u64,
    opts: &TrackOptions,
    census: Option<(&EnumerationReport, ClassTag)>,
) -> Result<SystemProbe> {
    let n = system.degree_n();
    let outcome = solve(system, opts)?;
    let tol = opts.dedup_tol;
    let mut solutions = outcome.solutions;
    for p in &mut solutions {
        p.class_tag = classify_solution(p, tol);
    }
    canonical_sort(&mut solutions);
    let near = |p: &SolutionPoint, k: usize, v: f64| (p.y[k] - v).norm() <= tol * scale(&p.y);
    let count = |f: &dyn Fn(&SolutionPoint) -> bool| solutions.iter().filter(|p| f(p)).count() as u64;

    let consistent_with_census = census.map(|(r, tag)| {
        let ours: Vec<Vec<Complex64>> = solutions
            .iter()
            .filter(|p| !near(p, n - 1, 0.0))
            .map(|p| p.y.clone())
            .collect();
        let theirs: Vec<Vec<Complex64>> = r
            .solutions
            .iter()
            .filter(|p| p.class_tag == tag)
            .map(|p| p.y.clone())
            .collect();
        sets_match(&ours, &theirs, tol)
    });
    Ok(SystemProbe {
        variant,
        bezout: system.bezout(),
        path_accounting: outcome.accounting,
        distinct: solutions.len() as u64,
        expected,
        count_matches: solutions.len() as u64 == expected,
        multiple_points: count(&|p| p.multiplicity > 1),
        with_last_zero: count(&|p| near(p, n - 1, 0.0)),
        with_second_last_minus_one: count(&|p| near(p, n - 2, -1.0)),
        non_peculiar: count(&|p| !is_peculiar(&MonicPoly::new(p.y.clone()), tol).unwrap_or(false)),
        consistent_with_census,
        solutions,
    })
}

/// Solve the `P1 \ P0` and `Pt` systems on their own and compare with the
/// counts `(N-2)(N-2)!` and `(N^2-3N+3)(N-2)!`. `census` (a degree-`N` full
/// enumeration) enables the cross-check against its class members.
pub fn check_conjecture(n: usize, opts: &TrackOptions, census: Option<&EnumerationReport>) -> Result<ConjectureProbe> {
    if let Some(r) = census {
        if r.degree_n != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                actual: r.degree_n,
            });
        }
    }
    let b = bound_values(n);
    Ok(ConjectureProbe {
        degree_n: n,
        in_scope: n >= 5,
        p1_nonzero: probe(
            Variant::P1NonZero,
            &build_p1_nonzero(n)?,
            b[4],
            opts,
            census.map(|r| (r, ClassTag::P1MinusP0)),
        )?,
        pt: probe(
            Variant::TruePeculiar,
            &build_pt(n)?,
            b[5],
            opts,
            census.map(|r| (r, ClassTag::Pt)),
        )?,
    })
}
