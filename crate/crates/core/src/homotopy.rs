//! Total-degree homotopy continuation.
//!
//! The target system `F` is deformed from the start system `G` with
//! `G_i = y_i^{d_i} - 1` along
//!
//! ```text
//! H(y, t) = (1 - t) * gamma * G(y) + t * F(y),    t: 0 -> 1
//! ```
//!
//! Paths are tracked in the logarithmic parameter `s = -ln(1 - t)`, so that
//! the approach to `t = 1` (where singular endpoints and divergent paths
//! live) is resolved on a uniform scale. Each step is a fourth-order
//! Runge-Kutta prediction on the Davidenko equation followed by at most three
//! Newton corrections.

use crate::dd::ComplexDD;
use crate::error::{Error, Result};
use crate::linalg::{inf_norm, CMatrix};
use crate::systems::Coeff;
use crate::systems::{AlgebraicSystem, ClassTag, MultiPoly, SolutionPoint, Variant};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predictor {
    RungeKutta4,
    Euler,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackOptions {
    pub gamma_seed: u64,
    /// Initial and minimum step in the path parameter `s = -ln(1 - t)`.
    pub step_init: f64,
    pub step_min: f64,
    pub corrector_tol: f64,
    pub accept_tol: f64,
    pub dedup_tol: f64,
    pub infinity_threshold: f64,
    pub max_steps: usize,
    pub refine_precision: Precision,
    pub predictor: Predictor,
    /// Largest Bézout number `solve` will attempt.
    pub path_budget: u64,
    /// 0 = one worker per core, 1 = serial.
    pub workers: usize,
    pub trace: bool,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            gamma_seed: 1,
            step_init: 0.05,
            step_min: 1e-8,
            corrector_tol: 1e-10,
            accept_tol: 1e-8,
            dedup_tol: 1e-6,
            infinity_threshold: 1e8,
            max_steps: 10_000,
            refine_precision: Precision::Extended,
            predictor: Predictor::RungeKutta4,
            path_budget: 100_000,
            workers: 1,
            trace: false,
        }
    }
}

impl TrackOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.step_min > 0.0
            && self.step_min <= self.step_init
            && self.step_init <= 1.0
            && self.corrector_tol > 0.0
            && self.accept_tol > 0.0
            && self.dedup_tol > 0.0
            && self.infinity_threshold > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidOptions(
                "need 0 < step_min <= step_init <= 1 and positive tolerances".into(),
            ))
        }
    }
}

/// The unit complex number `exp(i theta)` derived from a seed.
pub fn gamma_from_seed(seed: u64) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PathStatus {
    Converged,
    AtInfinity,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub s: f64,
    pub t: f64,
    pub h: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub start_index: usize,
    pub status: PathStatus,
    /// Meaningful only for `Converged`.
    pub endpoint: Vec<Complex64>,
    pub steps_taken: usize,
    pub trace: Vec<TraceRecord>,
}

impl PathResult {
    /// Line-delimited trace: one `key=value` record per accepted step.
    pub fn trace_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.trace {
            let _ = writeln!(
                out,
                "path={} step={} s={:.6e} t={:.17e} h={:.6e} norm={:.6e}",
                self.start_index, r.step, r.s, r.t, r.h, r.norm
            );
        }
        let _ = writeln!(
            out,
            "path={} status={:?} steps={}",
            self.start_index, self.status, self.steps_taken
        );
        out
    }
}

/// `y_i^{d_i} - 1 = 0` together with all tuples of roots of unity, in
/// mixed-radix order (last coordinate fastest).
pub fn start_system(s: &AlgebraicSystem) -> (AlgebraicSystem, Vec<Vec<Complex64>>) {
    let n = s.num_unknowns();
    let degrees = s.degrees();
    let eqs = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n];
            e[i] = d;
            MultiPoly::from_terms(n, vec![(Coeff::from(1), e), (Coeff::from(-1), vec![0; n])])
        })
        .collect();
    let start = AlgebraicSystem::new(Variant::TotalDegreeStart, s.degree_n(), s.unknowns().to_vec(), eqs);

    let roots: Vec<Vec<Complex64>> = degrees
        .iter()
        .map(|&d| {
            (0..d)
                .map(|k| match (k, d) {
                    (0, _) => Complex64::new(1.0, 0.0),
                    (k, d) if 2 * k == d => Complex64::new(-1.0, 0.0),
                    _ => Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64),
                })
                .collect()
        })
        .collect();
    let total: usize = degrees.iter().map(|&d| d as usize).product();
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    for _ in 0..total {
        points.push((0..n).map(|i| roots[i][idx[i]]).collect());
        for i in (0..n).rev() {
            idx[i] += 1;
            if idx[i] < degrees[i] as usize {
                break;
            }
            idx[i] = 0;
        }
    }
    (start, points)
}

struct Homotopy<'a> {
    target: &'a AlgebraicSystem,
    start: &'a AlgebraicSystem,
    gamma: Complex64,
}

impl Homotopy<'_> {
    /// H and dH/dy at parameter `s`, plus `u * (gamma G - F)` with
    /// `u = exp(-s)`, which is `-dH/ds`.
    fn eval(&self, y: &[Complex64], s: f64) -> (Vec<Complex64>, CMatrix, Vec<Complex64>) {
        let (f, jf) = self.target.eval_with_jacobian(y).expect("dimension checked");
        let (g, jg) = self.start.eval_with_jacobian(y).expect("dimension checked");
        let u = (-s).exp();
        let t = -(-s).exp_m1();
        let ug = self.gamma * u;
        let h: Vec<Complex64> = f.iter().zip(&g).map(|(fi, gi)| ug * gi + fi * t).collect();
        let mut jac = jf;
        jac.scale(Complex64::new(t, 0.0));
        jac.add_scaled(&jg, ug);
        let ds: Vec<Complex64> = f.iter().zip(&g).map(|(fi, gi)| (self.gamma * gi - fi) * u).collect();
        (h, jac, ds)
    }

    /// dy/ds
    fn velocity(&self, y: &[Complex64], s: f64) -> Option<Vec<Complex64>> {
        let (_, jac, ds) = self.eval(y, s);
        jac.solve(&ds)
    }
}

fn scaled(v: &[Complex64], a: &[Complex64], h: f64) -> Vec<Complex64> {
    v.iter().zip(a).map(|(x, d)| x + d * h).collect()
}

fn norm1(y: &[Complex64]) -> f64 {
    inf_norm(y).max(1.0)
}

/// Newton on `F` alone (t = 1). Returns the best iterate by residual.
fn newton_at_target(target: &AlgebraicSystem, y0: &[Complex64], max_iters: usize) -> (Vec<Complex64>, f64) {
    let mut y = y0.to_vec();
    let mut best = (y.clone(), target.residual(&y).unwrap_or(f64::INFINITY));
    for _ in 0..max_iters {
        let (f, j) = target.eval_with_jacobian(&y).expect("dimension checked");
        let Some(dy) = j.solve(&f) else { break };
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi -= d;
        }
        if !y.iter().all(|v| v.is_finite()) {
            break;
        }
        let r = target.residual(&y).unwrap_or(f64::INFINITY);
        if r < best.1 {
            best = (y.clone(), r);
        }
        if inf_norm(&dy) <= 4.0 * f64::EPSILON * norm1(&y) {
            break;
        }
    }
    best
}

/// From `u <= ENDGAME_U` on, every accepted step tries to finish with Newton
/// at `t = 1`.
const ENDGAME_U: f64 = 1e-8;
/// The endgame also requires `|dy/ds| <= ENDGAME_SPEED * max(1, |y|)`. Paths
/// to finite endpoints slow down like `u^{1/m}`; paths escaping to infinity
/// like `exp(s/k)` keep a relative speed near `1/k`.
const ENDGAME_SPEED: f64 = 1e-3;
/// Paths still unresolved at `u = exp(-S_MAX)` are reported as failed.
const S_MAX: f64 = 200.0;
const STEP_MAX: f64 = 1.0;

pub fn track_path(
    target: &AlgebraicSystem,
    start_sys: &AlgebraicSystem,
    start: &[Complex64],
    start_index: usize,
    opts: &TrackOptions,
) -> PathResult {
    let hom = Homotopy {
        target,
        start: start_sys,
        gamma: gamma_from_seed(opts.gamma_seed),
    };
    track_with(&hom, start, start_index, opts)
}

fn track_with(hom: &Homotopy, start: &[Complex64], start_index: usize, opts: &TrackOptions) -> PathResult {
    let mut y = start.to_vec();
    let mut s = 0.0f64;
    let mut h = opts.step_init;
    let mut streak = 0;
    let mut steps = 0;
    let mut trace = Vec::new();
    let finish = |status, endpoint: Vec<Complex64>, steps, trace| PathResult {
        start_index,
        status,
        endpoint,
        steps_taken: steps,
        trace,
    };

    while steps < opts.max_steps {
        steps += 1;
        let h_eff = h.min(S_MAX - s);
        match step(hom, &y, s, h_eff, opts) {
            Some(next) => {
                y = next;
                s += h_eff;
                streak += 1;
                if streak >= 2 {
                    h = (h * 1.5).min(STEP_MAX);
                    streak = 0;
                }
                if opts.trace {
                    trace.push(TraceRecord {
                        step: steps,
                        s,
                        t: -(-s).exp_m1(),
                        h: h_eff,
                        norm: inf_norm(&y),
                    });
                }
            }
            None => {
                streak = 0;
                h /= 2.0;
                if h < opts.step_min {
                    break;
                }
                continue;
            }
        }

        if inf_norm(&y) > opts.infinity_threshold {
            return finish(PathStatus::AtInfinity, Vec::new(), steps, trace);
        }
        if (-s).exp() <= ENDGAME_U && slow(hom, &y, s) {
            let (end, res) = newton_at_target(hom.target, &y, 60);
            let moved = inf_norm(&end.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>());
            if res <= opts.accept_tol && moved <= 1e-2 * norm1(&y) {
                return finish(PathStatus::Converged, end, steps, trace);
            }
        }
        if s >= S_MAX {
            break;
        }
    }
    finish(PathStatus::Failed, Vec::new(), steps, trace)
}

fn slow(hom: &Homotopy, y: &[Complex64], s: f64) -> bool {
    hom.velocity(y, s)
        .is_some_and(|v| inf_norm(&v) <= ENDGAME_SPEED * norm1(y))
}

/// One predictor-corrector step from `s` to `s + h`. `None` if the corrector
/// does not reach `corrector_tol` within three iterations.
fn step(hom: &Homotopy, y: &[Complex64], s: f64, h: f64, opts: &TrackOptions) -> Option<Vec<Complex64>> {
    let pred = match opts.predictor {
        Predictor::Euler => {
            let k1 = hom.velocity(y, s)?;
            scaled(y, &k1, h)
        }
        Predictor::RungeKutta4 => {
            let k1 = hom.velocity(y, s)?;
            let k2 = hom.velocity(&scaled(y, &k1, h / 2.0), s + h / 2.0)?;
            let k3 = hom.velocity(&scaled(y, &k2, h / 2.0), s + h / 2.0)?;
            let k4 = hom.velocity(&scaled(y, &k3, h), s + h)?;
            y.iter()
                .enumerate()
                .map(|(i, yi)| yi + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
                .collect()
        }
    };
    let mut z = pred;
    for _ in 0..3 {
        let (hv, jac, _) = hom.eval(&z, s + h);
        let dz = jac.solve(&hv)?;
        for (zi, d) in z.iter_mut().zip(&dz) {
            *zi -= d;
        }
        if !z.iter().all(|v| v.is_finite()) {
            return None;
        }
        if inf_norm(&dz) <= opts.corrector_tol * norm1(&z) {
            return Some(z);
        }
    }
    None
}

/// Newton refinement at `t = 1`.
///
/// `Double` iterates in `f64` until the residual drops below `1e-13`.
/// `Extended` evaluates the residual in double-double and applies `f64`
/// Jacobian corrections to a double-double iterate until the residual drops
/// below `1e-25`.
pub fn refine(s: &AlgebraicSystem, y: &[Complex64], precision: Precision) -> Result<Vec<Complex64>> {
    match precision {
        Precision::Double => {
            let mut y = y.to_vec();
            for it in 0..30 {
                let r = s.residual(&y)?;
                if r < 1e-13 {
                    return Ok(y);
                }
                let (f, j) = s.eval_with_jacobian(&y)?;
                let dy = j.solve(&f).ok_or(Error::NonConvergence {
                    iterations: it,
                    residual: r,
                })?;
                y.iter_mut().zip(&dy).for_each(|(a, d)| *a -= d);
            }
            Err(Error::NonConvergence {
                iterations: 30,
                residual: s.residual(&y)?,
            })
        }
        Precision::Extended => refine_dd(s, y).map(|v| v.iter().map(|z| z.to_c64()).collect()),
    }
}

/// Mixed-precision Newton returning the double-double iterate.
pub fn refine_dd(s: &AlgebraicSystem, y: &[Complex64]) -> Result<Vec<ComplexDD>> {
    let mut ydd: Vec<ComplexDD> = y.iter().map(|&z| z.into()).collect();
    let mut r = s.residual_dd(&ydd)?;
    for it in 0..40 {
        if r < 1e-25 {
            return Ok(ydd);
        }
        let f: Vec<Complex64> = s.eval_dd(&ydd)?.iter().map(|v| v.to_c64()).collect();
        let y64: Vec<Complex64> = ydd.iter().map(|z| z.to_c64()).collect();
        let j = s.jacobian(&y64)?;
        let dy = j.solve(&f).ok_or(Error::NonConvergence {
            iterations: it,
            residual: r,
        })?;
        for (a, d) in ydd.iter_mut().zip(&dy) {
            *a = *a - ComplexDD::from(*d);
        }
        if !ydd.iter().all(|z| z.is_finite()) {
            break;
        }
        r = s.residual_dd(&ydd)?;
    }
    if r < 1e-25 {
        Ok(ydd)
    } else {
        Err(Error::NonConvergence {
            iterations: 40,
            residual: r,
        })
    }
}

fn lex_point_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Relative distance `max_k |a_k - b_k| / max(1, |a|, |b|)`.
pub fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = norm1(a).max(norm1(b));
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Single-linkage clustering at relative radius `dedup_tol`.
///
/// Returns `(component-wise mean, cluster size)` in canonical order. Fails
/// with `AmbiguousClustering` if two clusters come within `10 * dedup_tol` of
/// each other.
pub fn cluster(points: &[Vec<Complex64>], dedup_tol: f64) -> Result<Vec<(Vec<Complex64>, usize)>> {
    let mut pts: Vec<&Vec<Complex64>> = points.iter().collect();
    pts.sort_by(|a, b| lex_point_cmp(a, b));
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut near_misses = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = relative_distance(pts[i], pts[j]);
            if d <= dedup_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else if d <= 10.0 * dedup_tol {
                near_misses.push((i, j, d));
            }
        }
    }
    if let Some(gap) = near_misses
        .iter()
        .filter(|&&(i, j, _)| find(&mut parent, i) != find(&mut parent, j))
        .map(|&(_, _, d)| d)
        .min_by(f64::total_cmp)
    {
        return Err(Error::AmbiguousClustering { gap, dedup_tol });
    }

    let mut groups: Vec<(usize, Vec<Complex64>, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1.iter_mut().zip(pts[i]).for_each(|(a, b)| *a += b);
                g.2 += 1;
            }
            None => groups.push((r, pts[i].clone(), 1)),
        }
    }
    let mut out: Vec<(Vec<Complex64>, usize)> = groups
        .into_iter()
        .map(|(_, sum, m)| (sum.iter().map(|v| v / m as f64).collect(), m))
        .collect();
    out.sort_by(|a, b| lex_point_cmp(&a.0, &b.0));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PathAccounting {
    pub bezout: u64,
    pub converged: usize,
    pub at_infinity: usize,
    pub failed: usize,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Distinct solutions in canonical order, as full coefficient vectors.
    pub solutions: Vec<SolutionPoint>,
    pub accounting: PathAccounting,
    /// Seed of the run that produced the result (differs from the requested
    /// one after a retry).
    pub gamma_seed: u64,
    pub paths: Vec<PathResult>,
}

/// Seed offset used for the single automatic retry.
pub const RETRY_SEED_OFFSET: u64 = 0x9E37_79B9;

/// Track every total-degree path, refine and cluster the finite endpoints.
pub fn solve(s: &AlgebraicSystem, opts: &TrackOptions) -> Result<SolveOutcome> {
    opts.validate()?;
    if s.bezout() > opts.path_budget {
        return Err(Error::BudgetExceeded {
            bezout: s.bezout(),
            budget: opts.path_budget,
        });
    }
    let first = solve_once(s, opts)?;
    if first.accounting.failed == 0 {
        return Ok(first);
    }
    let retry_opts = TrackOptions {
        gamma_seed: opts.gamma_seed.wrapping_add(RETRY_SEED_OFFSET),
        ..opts.clone()
    };
    let second = solve_once(s, &retry_opts)?;
    if second.accounting.failed == 0 {
        Ok(second)
    } else {
        Err(Error::QualityFailure {
            failed: second.accounting.failed,
        })
    }
}

fn run_paths(s: &AlgebraicSystem, opts: &TrackOptions) -> Vec<PathResult> {
    let (start_sys, starts) = start_system(s);
    let hom = Homotopy {
        target: s,
        start: &start_sys,
        gamma: gamma_from_seed(opts.gamma_seed),
    };
    let work = |(i, p): (usize, &Vec<Complex64>)| {
        let mut r = track_with(&hom, p, i, opts);
        if r.status == PathStatus::Converged {
            if let Ok(better) = refine(s, &r.endpoint, opts.refine_precision) {
                r.endpoint = better;
            }
        }
        r
    };
    if opts.workers == 1 {
        starts.iter().enumerate().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        pool.install(|| starts.par_iter().enumerate().map(work).collect())
    }
}

fn solve_once(s: &AlgebraicSystem, opts: &TrackOptions) -> Result<SolveOutcome> {
    let paths = run_paths(s, opts);
    let count = |st| paths.iter().filter(|p| p.status == st).count();
    let accounting = PathAccounting {
        bezout: s.bezout(),
        converged: count(PathStatus::Converged),
        at_infinity: count(PathStatus::AtInfinity),
        failed: count(PathStatus::Failed),
    };
    let endpoints: Vec<Vec<Complex64>> = paths
        .iter()
        .filter(|p| p.status == PathStatus::Converged)
        .map(|p| p.endpoint.clone())
        .collect();
    let clusters = cluster(&endpoints, opts.dedup_tol)?;
    let solutions = clusters
        .into_iter()
        .map(|(rep, m)| {
            let residual = s.residual(&rep)?;
            let full = s.to_full(&rep);
            let scale = norm1(&full);
            let is_real = full.iter().all(|v| v.im.abs() <= opts.dedup_tol * scale);
            Ok(SolutionPoint {
                y: full,
                residual,
                multiplicity: m,
                class_tag: ClassTag::Unclassified,
                is_real,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveOutcome {
        solutions,
        accounting,
        gamma_seed: opts.gamma_seed,
        paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_full, build_p1_nonzero};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn start_points_for_small_systems() {
        let (g, pts) = start_system(&build_full(2).unwrap());
        assert_eq!(pts, vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(-1.0)]]);
        for p in &pts {
            assert!(g.residual(p).unwrap() == 0.0);
        }
        assert_eq!(start_system(&build_full(4).unwrap()).1.len(), 24);
        let (g5, pts5) = start_system(&build_p1_nonzero(5).unwrap());
        assert_eq!(pts5.len(), 18);
        assert!(pts5.iter().all(|p| g5.residual(p).unwrap() < 1e-14));
    }

    #[test]
    fn gamma_is_unit_and_seeded() {
        let g = gamma_from_seed(7);
        assert!((g.norm() - 1.0).abs() < 1e-15);
        assert_eq!(g, gamma_from_seed(7));
        assert_ne!(g, gamma_from_seed(8));
    }

    #[test]
    fn both_quadratic_paths_converge() {
        let s = build_full(2).unwrap();
        let (g, starts) = start_system(&s);
        let opts = TrackOptions::default();
        let ends: Vec<Vec<Complex64>> = starts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let r = track_path(&s, &g, p, i, &opts);
                assert_eq!(r.status, PathStatus::Converged);
                r.endpoint
            })
            .collect();
        let cl = cluster(&ends, 1e-6).unwrap();
        assert_eq!(cl.len(), 2);
        assert!(relative_distance(&cl[0].0, &[c(0.0), c(0.0)]) < 1e-8);
        assert!(relative_distance(&cl[1].0, &[c(1.0), c(-2.0)]) < 1e-8);
    }

    #[test]
    fn refinement_examples() {
        let s = build_full(2).unwrap();
        let near = [Complex64::new(1.0 + 1e-6, -1e-7), c(-2.0 + 3e-6)];
        for p in [Precision::Double, Precision::Extended] {
            let y = refine(&s, &near, p).unwrap();
            assert!(relative_distance(&y, &[c(1.0), c(-2.0)]) < 1e-12);
        }
        let exact = [c(1.0), c(-2.0)];
        assert_eq!(refine(&s, &exact, Precision::Double).unwrap(), exact.to_vec());
        assert_eq!(refine(&s, &exact, Precision::Extended).unwrap(), exact.to_vec());
    }

    #[test]
    fn clustering_examples() {
        let p = vec![c(1.0), c(-1.0), c(-1.0), c(0.0)];
        let q: Vec<Complex64> = p.iter().map(|v| v + 1e-9).collect();
        let cl = cluster(&[p.clone(), q], 1e-6).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 2);
        assert!(cluster(&[], 1e-6).unwrap().is_empty());
        let r: Vec<Complex64> = p.iter().map(|v| v + 5e-6).collect();
        assert!(matches!(cluster(&[p, r], 1e-6), Err(Error::AmbiguousClustering { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let opts = TrackOptions {
            path_budget: 10,
            ..TrackOptions::default()
        };
        assert!(matches!(
            solve(&build_full(4).unwrap(), &opts),
            Err(Error::BudgetExceeded { bezout: 24, budget: 10 })
        ));
    }

    #[test]
    fn invalid_options_are_rejected() {
        let opts = TrackOptions {
            step_min: 0.5,
            step_init: 0.1,
            ..TrackOptions::default()
        };
        assert!(solve(&build_full(2).unwrap(), &opts).is_err());
    }

    #[test]
    fn trace_lines_are_emitted() {
        let s = build_full(2).unwrap();
        let (g, starts) = start_system(&s);
        let opts = TrackOptions {
            trace: true,
            ..TrackOptions::default()
        };
        let r = track_path(&s, &g, &starts[1], 1, &opts);
        let text = r.trace_lines();
        assert!(text.lines().count() > 2);
        assert!(text.lines().all(|l| l.starts_with("path=1 ")));
    }
}
