//! Univariate monic polynomials, their zero multisets, and the peculiarity
//! test.
//!
//! A monic polynomial of degree `N` is stored through its coefficients
//! `y_1..y_N`, with `p(z) = z^N + y_1 z^{N-1} + ... + y_N`. Zeros are kept as
//! an unordered multiset.

use crate::error::{Error, Result};
use crate::matching::{bottleneck_assignment, Assignment};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};

/// Monic polynomial `z^N + y_1 z^{N-1} + ... + y_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a monic polynomial needs degree >= 1");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `y_1..y_N`; index `m-1` holds the coefficient of `z^{N-m}`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `max(1, max |y_m|)`, the reference magnitude for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        eval_poly(self, z)
    }

    /// Horner value and derivative at `z`.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `|z|^N + sum |y_m| |z|^{N-m}`: the magnitude against which a computed
    /// value of `p(z)` is compared when judging a residual.
    fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().fold(1.0, |acc, c| acc * r + c.norm())
    }
}

/// Unordered multiset of complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    elements: Vec<Complex64>,
}

impl ZeroSet {
    pub fn new(elements: Vec<Complex64>) -> Self {
        Self { elements }
    }

    pub fn from_real(elements: &[f64]) -> Self {
        Self::new(elements.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub fn conj(&self) -> Self {
        Self::new(self.elements.iter().map(|z| z.conj()).collect())
    }

    /// Elements in canonical lexicographic `(re, im)` order.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.elements.clone();
        v.sort_by(lex_cmp);
        v
    }
}

pub(crate) fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// `sigma_1..sigma_N` of the multiset, by expanding `prod (z - x_n)` one
/// factor at a time. Inputs are sorted first so the result does not depend on
/// the order the multiset was given in.
pub fn elementary_symmetric(x: &ZeroSet) -> Vec<Complex64> {
    let sorted = x.sorted();
    let n = sorted.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (k, &xk) in sorted.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            e[m] = e[m] + xk * e[m - 1];
        }
    }
    e.split_off(1)
}

/// The monic polynomial whose zero multiset is `x`: `y_m = (-1)^m sigma_m`.
pub fn ulam_transform(x: &ZeroSet) -> MonicPoly {
    let coeffs = elementary_symmetric(x)
        .into_iter()
        .enumerate()
        .map(|(i, s)| if i % 2 == 0 { -s } else { s })
        .collect();
    MonicPoly::new(coeffs)
}

pub fn eval_poly(p: &MonicPoly, z: Complex64) -> Complex64 {
    p.coeffs.iter().fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Bound on `|p(x)| / (scale(p) * max(1, |x|)^N)` at every returned root.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Roots closer than `merge_tol * scale(p)` are reported as one cluster.
    pub merge_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            max_iters: 2000,
            merge_tol: 1e-6,
        }
    }
}

/// A distinct zero and how many of the `N` approximations landed on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    pub clusters: Vec<RootCluster>,
    pub iterations: usize,
}

impl Roots {
    /// Expand clusters back into a multiset of size `N`, each cluster
    /// contributing its mean `multiplicity` times.
    pub fn zero_set(&self) -> ZeroSet {
        ZeroSet::new(
            self.clusters
                .iter()
                .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
                .collect(),
        )
    }
}

/// All `N` zeros of `p` by Aberth-Ehrlich simultaneous iteration.
///
/// Start points sit on the circle of radius `1 + max |y_m|`, rotated by a
/// fixed irrational offset. A root is frozen once its residual is at the
/// rounding level of Horner's scheme; iteration ends when every root is
/// frozen or the budget runs out.
pub fn find_roots(p: &MonicPoly, opts: &RootOptions) -> Result<Roots> {
    let n = p.degree();
    let radius = 1.0 + p.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let offset = SQRT_2 / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + offset))
        .collect();
    let mut frozen = vec![false; n];
    let eps = f64::EPSILON;
    let scale = p.scale();

    let mut iterations = 0;
    while iterations < opts.max_iters && frozen.iter().any(|f| !f) {
        iterations += 1;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let (pv, dp) = p.eval_with_derivative(z[k]);
            if pv.norm() <= 4.0 * eps * p.magnitude_at(z[k]) {
                frozen[k] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = if dp.norm() == 0.0 {
                // stationary point: nudge off it
                Complex64::new(eps.sqrt(), eps.sqrt()) * (1.0 + z[k].norm())
            } else {
                let ratio = pv / dp;
                let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
                if denom.norm() == 0.0 {
                    ratio
                } else {
                    ratio / denom
                }
            };
            z[k] -= step;
            // negligible against the polynomial's own scale
            if step.norm() <= eps * eps * scale {
                frozen[k] = true;
            }
            if !z[k].is_finite() {
                return Err(Error::NonConvergence {
                    iterations,
                    residual: f64::INFINITY,
                });
            }
        }
    }

    let worst = z
        .iter()
        .map(|&x| p.eval(x).norm() / (scale * x.norm().max(1.0).powi(n as i32)))
        .fold(0.0, f64::max);
    if worst > opts.residual_tol {
        return Err(Error::NonConvergence {
            iterations,
            residual: worst,
        });
    }

    let mut clusters = merge_close(z, opts.merge_tol * scale);
    for c in clusters.iter_mut().filter(|c| c.multiplicity > 1) {
        c.value = polish_multiple(p, c.value, c.multiplicity, opts.merge_tol * scale);
    }
    Ok(Roots { clusters, iterations })
}

/// An `m`-fold zero of `p` is a simple zero of `p^(m-1)`; Newton on that
/// derivative recovers digits the simultaneous iteration cannot. The polished
/// value is kept only if it stays inside the cluster radius.
fn polish_multiple(p: &MonicPoly, start: Complex64, m: usize, radius: f64) -> Complex64 {
    let n = p.degree();
    // full coefficient list, highest power first, then differentiate m-1 times
    let mut c: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0))
        .chain(p.coeffs.iter().copied())
        .collect();
    for _ in 1..m {
        let deg = c.len() - 1;
        c = c[..deg]
            .iter()
            .enumerate()
            .map(|(i, &a)| a * (deg - i) as f64)
            .collect();
    }
    debug_assert_eq!(c.len(), n - m + 2);
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in &c {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    let mut z = start;
    for _ in 0..20 {
        let (v, dv) = eval(z);
        if dv.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if z.is_finite() && (z - start).norm() <= radius {
        z
    } else {
        start
    }
}

/// Single-linkage merge of points closer than `radius`.
fn merge_close(mut z: Vec<Complex64>, radius: f64) -> Vec<RootCluster> {
    z.sort_by(lex_cmp);
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match clusters.iter_mut().find(|c| c.0 == r) {
            Some(c) => {
                c.1 += z[i];
                c.2 += 1;
            }
            None => clusters.push((r, z[i], 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, m)| RootCluster {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Pair the two multisets minimising the largest distance; `Some` iff that
/// distance is at most `tol`.
pub fn match_multisets(a: &ZeroSet, b: &ZeroSet, tol: f64) -> Option<Assignment> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(Assignment {
            pairs: Vec::new(),
            max_cost: 0.0,
        });
    }
    let cost: Vec<Vec<f64>> = a
        .elements
        .iter()
        .map(|x| b.elements.iter().map(|y| (x - y).norm()).collect())
        .collect();
    bottleneck_assignment(&cost).filter(|m| m.max_cost <= tol)
}

/// True iff the zeros of `p` can be ordered to coincide with `y_1..y_N`
/// within `tol * scale(p)`.
pub fn is_peculiar(p: &MonicPoly, tol: f64) -> Result<bool> {
    let opts = RootOptions {
        merge_tol: tol.min(RootOptions::default().merge_tol),
        ..RootOptions::default()
    };
    let roots = find_roots(p, &opts)?;
    let coeffs = ZeroSet::new(p.coeffs.clone());
    Ok(match_multisets(&roots.zero_set(), &coeffs, tol * p.scale()).is_some())
}

/// Whether every coefficient is itself a zero: `|p(y_m)| <= tol * scale^N`.
/// Necessary for peculiarity, not sufficient.
pub fn satisfies_eq3(p: &MonicPoly, tol: f64) -> bool {
    let bound = tol * p.scale().powi(p.degree() as i32);
    p.coeffs.iter().all(|&y| p.eval(y).norm() <= bound)
}
