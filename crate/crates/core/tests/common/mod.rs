//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;
use peculiar::classify::{enumerate, EnumerationReport};
use peculiar::homotopy::TrackOptions;
use peculiar::systems::AlgebraicSystem;
use rand::Rng;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Elementary symmetric functions through Newton's identities on power sums.
pub fn sigma_newton(y: &[C]) -> Vec<C> {
    let n = y.len();
    let p: Vec<C> = (0..=n).map(|k| y.iter().map(|x| x.powu(k as u32)).sum()).collect();
    let mut e = vec![c(1.0, 0.0)];
    for k in 1..=n {
        let mut acc = c(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[k - i] * p[i] * sign;
        }
        e.push(acc / k as f64);
    }
    e.split_off(1)
}

/// Elementary symmetric functions by summing over all subsets.
pub fn sigma_subsets(y: &[C]) -> Vec<C> {
    let n = y.len();
    let mut e = vec![c(0.0, 0.0); n];
    for mask in 1u32..(1 << n) {
        let prod: C = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| y[i]).product();
        e[mask.count_ones() as usize - 1] += prod;
    }
    e
}

fn sign(m: usize) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `sigma_m(y) - (-1)^m y_m` for `m = 1..N`.
pub fn full_equations(y: &[C]) -> Vec<C> {
    sigma_subsets(y)
        .iter()
        .enumerate()
        .map(|(i, &s)| s - y[i] * sign(i + 1))
        .collect()
}

pub fn full_residual(y: &[C]) -> f64 {
    full_equations(y).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn full_jacobian(y: &[C]) -> Vec<Vec<C>> {
    let n = y.len();
    let minors: Vec<Vec<C>> = (0..n)
        .map(|j| {
            let rest: Vec<C> = y.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect();
            let mut s = vec![c(1.0, 0.0)];
            s.extend(sigma_subsets(&rest));
            s
        })
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = minors[j][i];
                    if i == j {
                        d - sign(i + 1)
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Option<Vec<C>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![c(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: C = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Plain Newton on the full system from `y`; `Some` when it lands on a
/// point with residual below `1e-12`.
pub fn newton_full(mut y: Vec<C>) -> Option<Vec<C>> {
    for _ in 0..60 {
        let f = full_equations(&y);
        let dx = gauss_solve(full_jacobian(&y), f)?;
        let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (v, d) in y.iter_mut().zip(&dx) {
            *v -= d;
        }
        if !step.is_finite() || y.iter().any(|v| v.norm() > 1e6) {
            return None;
        }
        if step < 1e-15 * (1.0 + norm(&y)) {
            break;
        }
    }
    (full_residual(&y) < 1e-12).then_some(y)
}

pub fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

pub const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Point `i` of a Halton sequence mapped into the polydisc of radius `r`.
pub fn halton_polydisc(i: u64, n: usize, r: f64) -> Vec<C> {
    (0..n)
        .map(|k| {
            let rho = r * halton(i, PRIMES[2 * k]).sqrt();
            let theta = 2.0 * std::f64::consts::PI * halton(i, PRIMES[2 * k + 1]);
            C::from_polar(rho, theta)
        })
        .collect()
}

pub fn norm(y: &[C]) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn rel_dist(a: &[C], b: &[C]) -> f64 {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    d / norm(a).max(norm(b)).max(1.0)
}

/// Every point of `a` has exactly one partner in `b` and vice versa.
pub fn same_point_sets(a: &[Vec<C>], b: &[Vec<C>], tol: f64) -> bool {
    let one_each = |x: &[Vec<C>], y: &[Vec<C>]| {
        x.iter()
            .all(|p| y.iter().filter(|q| rel_dist(p, q) <= tol).count() == 1)
    };
    a.len() == b.len() && one_each(a, b) && one_each(b, a)
}

pub fn conj(y: &[C]) -> Vec<C> {
    y.iter().map(|z| z.conj()).collect()
}

/// The conjugate of every point is again in the set.
pub fn closed_under_conjugation(points: &[Vec<C>], tol: f64) -> bool {
    points
        .iter()
        .all(|p| points.iter().any(|q| rel_dist(&conj(p), q) <= tol))
}

/// Distinct points, keeping the first representative of each cluster.
pub fn dedup(points: Vec<Vec<C>>, tol: f64) -> Vec<Vec<C>> {
    let mut out: Vec<Vec<C>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| rel_dist(&p, q) <= tol) {
            out.push(p);
        }
    }
    out
}

/// Largest entry of `|J - J_fd|`, relative to `max(1, max |J|)`, with
/// central differences of step `h`.
pub fn jacobian_fd_error(s: &AlgebraicSystem, y: &[C], h: f64) -> f64 {
    let j = s.jacobian(y).unwrap();
    let n = y.len();
    let mut scale: f64 = 1.0;
    let mut err: f64 = 0.0;
    for col in 0..n {
        let mut yp = y.to_vec();
        let mut ym = y.to_vec();
        yp[col] += h;
        ym[col] -= h;
        let fp = s.eval(&yp).unwrap();
        let fm = s.eval(&ym).unwrap();
        for row in 0..fp.len() {
            let fd = (fp[row] - fm[row]) / (2.0 * h);
            let exact = j.get(row, col);
            scale = scale.max(exact.norm());
            err = err.max((fd - exact).norm());
        }
    }
    err / scale
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<C> {
    (0..n)
        .map(|_| {
            C::from_polar(
                radius * rng.gen::<f64>().sqrt(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

/// `n` points in the unit disc, pairwise further apart than `sep`.
pub fn separated_unit_disc<R: Rng>(rng: &mut R, n: usize, sep: f64) -> Vec<C> {
    loop {
        let x = random_point(rng, n, 1.0);
        let ok = (0..n).all(|i| (i + 1..n).all(|j| (x[i] - x[j]).norm() > sep));
        if ok {
            return x;
        }
    }
}

/// Default-option census, computed once per test binary.
pub fn census(n: usize) -> Arc<EnumerationReport> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<EnumerationReport>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return r.clone();
    }
    let r = Arc::new(enumerate(n, &TrackOptions::default()).unwrap());
    cache.lock().unwrap().entry(n).or_insert(r).clone()
}

pub fn points(r: &EnumerationReport) -> Vec<Vec<C>> {
    r.solutions.iter().map(|p| p.y.clone()).collect()
}
