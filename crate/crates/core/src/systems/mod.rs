//! The polynomial systems whose solutions enumerate peculiar polynomials.
//!
//! Every system is square, built with exact integer coefficients, and carries
//! its equation degrees and Bézout number. For numerical work each system is
//! compiled once into a flat term list evaluated in `f64` (or double-double
//! for refinement).

mod multipoly;

pub use multipoly::{elementary_symmetric_polys, Coeff, MultiPoly, PolyJson, TermJson};

use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Largest degree `N` any builder accepts; `sigma_m` expansions hold up to
/// `2^N` terms.
pub const MAX_DEGREE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `sigma_m(y) = (-1)^m y_m` for every `m`.
    Full,
    /// Some coefficient vanishes, hence `y_N = 0`.
    P0Reduced,
    /// Some coefficient is 1, hence `y_1 = 1`.
    P1Reduced,
    /// The `m = N` equation divided by `y_N`.
    #[serde(rename = "nonzero")]
    NonZero,
    /// `y_1 = 1` and `y_N != 0`.
    #[serde(rename = "p1_nonzero")]
    P1NonZero,
    /// Necessary conditions for no coefficient equal to 0 or 1.
    TruePeculiar,
    /// Solutions of `NonZero` with `y_1 = 1`, in the affine chart.
    Y1OneSubset,
    /// `y_i^{d_i} = 1`, the start system of a total-degree homotopy.
    TotalDegreeStart,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::P0Reduced => "p0_reduced",
            Variant::P1Reduced => "p1_reduced",
            Variant::NonZero => "nonzero",
            Variant::P1NonZero => "p1_nonzero",
            Variant::TruePeculiar => "true_peculiar",
            Variant::Y1OneSubset => "y1_one_subset",
            Variant::TotalDegreeStart => "total_degree_start",
        }
    }
}

/// A square polynomial system tied to a polynomial degree `N`.
#[derive(Debug, Clone)]
pub struct AlgebraicSystem {
    variant: Variant,
    degree_n: usize,
    homogenized: bool,
    unknowns: Vec<String>,
    equations: Vec<MultiPoly>,
    degrees: Vec<u32>,
    bezout: u64,
    compiled: Compiled,
}

impl AlgebraicSystem {
    pub fn new(variant: Variant, degree_n: usize, unknowns: Vec<String>, equations: Vec<MultiPoly>) -> Self {
        Self::assemble(variant, degree_n, false, unknowns, equations)
    }

    fn assemble(
        variant: Variant,
        degree_n: usize,
        homogenized: bool,
        unknowns: Vec<String>,
        equations: Vec<MultiPoly>,
    ) -> Self {
        // projective systems carry one homogenizing coordinate on top
        let extra = usize::from(homogenized);
        assert_eq!(unknowns.len(), equations.len() + extra, "system must be square");
        assert!(equations.iter().all(|e| e.num_vars() == unknowns.len()));
        let degrees: Vec<u32> = equations.iter().map(MultiPoly::total_degree).collect();
        let bezout = degrees.iter().map(|&d| d as u64).product();
        let compiled = Compiled::new(&equations, &degrees, homogenized);
        Self {
            variant,
            degree_n,
            homogenized,
            unknowns,
            equations,
            degrees,
            bezout,
            compiled,
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn degree_n(&self) -> usize {
        self.degree_n
    }

    pub fn is_homogenized(&self) -> bool {
        self.homogenized
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.equations
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn bezout(&self) -> u64 {
        self.bezout
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.num_unknowns() {
            return Err(Error::DimensionMismatch {
                expected: self.num_unknowns(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn eval(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(y.len())?;
        Ok(self.compiled.eval(y))
    }

    pub fn jacobian(&self, y: &[Complex64]) -> Result<CMatrix> {
        self.check_dim(y.len())?;
        Ok(self.compiled.eval_with_jacobian(y).1)
    }

    pub fn eval_with_jacobian(&self, y: &[Complex64]) -> Result<(Vec<Complex64>, CMatrix)> {
        self.check_dim(y.len())?;
        Ok(self.compiled.eval_with_jacobian(y))
    }

    pub fn eval_dd(&self, y: &[ComplexDD]) -> Result<Vec<ComplexDD>> {
        self.check_dim(y.len())?;
        Ok(self.compiled.eval_dd(y))
    }

    /// `max_i |f_i(y)| / max(1, |y|_inf)^{d_i}`.
    pub fn residual(&self, y: &[Complex64]) -> Result<f64> {
        let v = self.eval(y)?;
        let s = y.iter().map(|z| z.norm()).fold(1.0, f64::max);
        Ok(v.iter()
            .zip(&self.degrees)
            .map(|(f, &d)| f.norm() / s.powi(d as i32))
            .fold(0.0, f64::max))
    }

    pub fn residual_dd(&self, y: &[ComplexDD]) -> Result<f64> {
        let v = self.eval_dd(y)?;
        let s = y.iter().map(|z| z.norm()).fold(1.0, f64::max);
        Ok(v.iter()
            .zip(&self.degrees)
            .map(|(f, &d)| f.norm() / s.powi(d as i32))
            .fold(0.0, f64::max))
    }

    /// Extend a solution of this system to the coefficient vector
    /// `y_1..y_N` by restoring the coordinates the variant fixed.
    pub fn to_full(&self, y: &[Complex64]) -> Vec<Complex64> {
        let (y, lead) = if self.homogenized {
            (&y[1..], y[0])
        } else {
            (y, Complex64::new(1.0, 0.0))
        };
        let y: Vec<Complex64> = y.iter().map(|v| v / lead).collect();
        match self.variant {
            Variant::Full | Variant::NonZero | Variant::TruePeculiar | Variant::TotalDegreeStart => y,
            Variant::P0Reduced => {
                let mut v = y;
                v.push(Complex64::new(0.0, 0.0));
                v
            }
            Variant::P1Reduced | Variant::P1NonZero | Variant::Y1OneSubset => {
                let mut v = vec![Complex64::new(1.0, 0.0)];
                v.extend(y);
                v
            }
        }
    }

    /// Inverse of [`to_full`](Self::to_full) for points of the affine system.
    pub fn from_full(&self, full: &[Complex64]) -> Vec<Complex64> {
        match self.variant {
            Variant::Full | Variant::NonZero | Variant::TruePeculiar | Variant::TotalDegreeStart => full.to_vec(),
            Variant::P0Reduced => full[..full.len() - 1].to_vec(),
            Variant::P1Reduced | Variant::P1NonZero | Variant::Y1OneSubset => full[1..].to_vec(),
        }
    }

    pub fn to_json(&self) -> SystemJson {
        SystemJson {
            variant: self.variant,
            degree_n: self.degree_n,
            homogenized: self.homogenized,
            unknowns: self.unknowns.clone(),
            degrees: self.degrees.clone(),
            bezout: self.bezout,
            equations: self.equations.iter().map(MultiPoly::to_json).collect(),
        }
    }
}

/// Membership class of a peculiar polynomial. Precedence `P0`, then
/// `P1MinusP0`, then `Pt`, so the three classes are disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "p0")]
    P0,
    #[serde(rename = "p1_minus_p0")]
    P1MinusP0,
    #[serde(rename = "pt")]
    Pt,
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl ClassTag {
    pub fn name(self) -> &'static str {
        match self {
            ClassTag::P0 => "p0",
            ClassTag::P1MinusP0 => "p1_minus_p0",
            ClassTag::Pt => "pt",
            ClassTag::Unclassified => "unclassified",
        }
    }
}

/// One distinct solution, expressed as the full coefficient vector
/// `y_1..y_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint {
    pub y: Vec<Complex64>,
    /// Residual of the originating system (see [`AlgebraicSystem::residual`]).
    pub residual: f64,
    pub multiplicity: usize,
    pub class_tag: ClassTag,
    pub is_real: bool,
}

/// JSON description of a system, for debugging and diffing against other
/// implementations.
#[derive(Debug, Clone, Serialize)]
pub struct SystemJson {
    pub variant: Variant,
    pub degree_n: usize,
    pub homogenized: bool,
    pub unknowns: Vec<String>,
    pub degrees: Vec<u32>,
    pub bezout: u64,
    pub equations: Vec<PolyJson>,
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    coeff: f64,
    coeff_dd: DoubleDouble,
    /// (variable, exponent) pairs with exponent > 0
    factors: Vec<(usize, u32)>,
}

#[derive(Debug, Clone)]
struct Compiled {
    num_vars: usize,
    max_exp: u32,
    equations: Vec<Vec<CompiledTerm>>,
}

impl Compiled {
    /// Projective systems sum their terms in the order of the affine system
    /// (ignoring the `y_0` exponent), so evaluating at `y_0 = 1` reproduces
    /// the affine values bit for bit.
    fn new(equations: &[MultiPoly], degrees: &[u32], homogenized: bool) -> Self {
        let num_vars = equations.first().map_or(0, MultiPoly::num_vars);
        let max_exp = degrees.iter().copied().max().unwrap_or(0);
        let equations = equations
            .iter()
            .map(|eq| {
                let mut terms: Vec<&(Coeff, Vec<u32>)> = eq.terms().iter().collect();
                if homogenized {
                    terms.sort_by(|a, b| a.1[1..].cmp(&b.1[1..]));
                }
                terms
                    .into_iter()
                    .map(|(c, e)| {
                        let num = DoubleDouble::from(*c.numer());
                        let den = DoubleDouble::from(*c.denom());
                        CompiledTerm {
                            coeff: c.to_f64().expect("finite coefficient"),
                            coeff_dd: num / den,
                            factors: e
                                .iter()
                                .enumerate()
                                .filter(|(_, &p)| p > 0)
                                .map(|(v, &p)| (v, p))
                                .collect(),
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            num_vars,
            max_exp,
            equations,
        }
    }

    /// powers[v][k] = y_v^k for k = 0..=max_exp
    fn powers(&self, y: &[Complex64]) -> Vec<Vec<Complex64>> {
        y.iter()
            .map(|&v| {
                let mut p = Vec::with_capacity(self.max_exp as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                p.push(acc);
                for _ in 0..self.max_exp {
                    acc *= v;
                    p.push(acc);
                }
                p
            })
            .collect()
    }

    fn eval(&self, y: &[Complex64]) -> Vec<Complex64> {
        let pw = self.powers(y);
        self.equations
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| {
                        t.factors
                            .iter()
                            .fold(Complex64::new(t.coeff, 0.0), |acc, &(v, p)| acc * pw[v][p as usize])
                    })
                    .sum()
            })
            .collect()
    }

    fn eval_with_jacobian(&self, y: &[Complex64]) -> (Vec<Complex64>, CMatrix) {
        let pw = self.powers(y);
        let n = self.num_vars;
        let mut values = Vec::with_capacity(self.equations.len());
        let mut jac = CMatrix::zeros(self.equations.len(), n);
        let mut prefix: Vec<Complex64> = Vec::new();
        for (i, terms) in self.equations.iter().enumerate() {
            let mut f = Complex64::new(0.0, 0.0);
            for t in terms {
                let k = t.factors.len();
                prefix.clear();
                prefix.push(Complex64::new(1.0, 0.0));
                for &(v, p) in &t.factors {
                    let last = *prefix.last().unwrap();
                    prefix.push(last * pw[v][p as usize]);
                }
                f += prefix[k] * t.coeff;
                // d/dy_v of y_v^p * rest = p y_v^{p-1} * (prefix * suffix)
                let mut suffix = Complex64::new(1.0, 0.0);
                for j in (0..k).rev() {
                    let (v, p) = t.factors[j];
                    let d = pw[v][p as usize - 1] * (p as f64 * t.coeff);
                    *jac.get_mut(i, v) += d * prefix[j] * suffix;
                    suffix *= pw[v][p as usize];
                }
            }
            values.push(f);
        }
        (values, jac)
    }

    fn eval_dd(&self, y: &[ComplexDD]) -> Vec<ComplexDD> {
        let pw: Vec<Vec<ComplexDD>> = y
            .iter()
            .map(|&v| {
                let mut p = vec![ComplexDD::ONE];
                for k in 0..self.max_exp as usize {
                    p.push(p[k] * v);
                }
                p
            })
            .collect();
        self.equations
            .iter()
            .map(|terms| {
                terms.iter().fold(ComplexDD::ZERO, |acc, t| {
                    let m = t
                        .factors
                        .iter()
                        .fold(ComplexDD::from_real(t.coeff_dd), |m, &(v, p)| m * pw[v][p as usize]);
                    acc + m
                })
            })
            .collect()
    }
}

fn check_degree(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::DegreeTooSmall { degree: n, min });
    }
    if n > MAX_DEGREE {
        return Err(Error::CapacityExceeded {
            degree: n,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

fn names(range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|k| format!("y{k}")).collect()
}

fn sign(m: usize) -> i64 {
    if m % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `sigma_m(entries) - (-1)^m * var` for the given `m`.
fn symmetric_identity(e: &[MultiPoly], m: usize, var: &MultiPoly) -> MultiPoly {
    e[m].sub(&var.scale(Coeff::from(sign(m))))
}

fn product_of(vars: &[MultiPoly], nv: usize) -> MultiPoly {
    vars.iter().fold(MultiPoly::constant(nv, 1), |acc, v| acc.mul(v))
}

/// `sigma_m(y_1..y_N) = (-1)^m y_m`, `1 <= m <= N`. Bézout number `N!`.
pub fn build_full(n: usize) -> Result<AlgebraicSystem> {
    check_degree(n, 1)?;
    let y: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    let e = elementary_symmetric_polys(&y, n);
    let eqs = (1..=n).map(|m| symmetric_identity(&e, m, &y[m - 1])).collect();
    Ok(AlgebraicSystem::new(Variant::Full, n, names(1..=n), eqs))
}

/// `y_N = 0` eliminated and the `m = N` identity dropped: unknowns
/// `y_1..y_{N-1}`, Bézout number `(N-1)!`.
pub fn build_p0_reduced(n: usize) -> Result<AlgebraicSystem> {
    check_degree(n, 2)?;
    let nv = n - 1;
    let y: Vec<MultiPoly> = (0..nv).map(|i| MultiPoly::var(nv, i)).collect();
    let e = elementary_symmetric_polys(&y, nv);
    let eqs = (1..n).map(|m| symmetric_identity(&e, m, &y[m - 1])).collect();
    Ok(AlgebraicSystem::new(Variant::P0Reduced, n, names(1..=nv), eqs))
}

/// `sigma_m(1, y_2..y_N)` for the `N-1` unknowns `y_2..y_N`.
fn symmetric_with_unit_first(n: usize) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    let nv = n - 1;
    let y: Vec<MultiPoly> = (0..nv).map(|i| MultiPoly::var(nv, i)).collect();
    let mut entries = vec![MultiPoly::constant(nv, 1)];
    entries.extend(y.iter().cloned());
    (y, elementary_symmetric_polys(&entries, nv))
}

/// `y_1 = 1` in the chart `y_0 = 1`: `sigma_1(1, y_2..) = -1` and
/// `sigma_m(1, y_2..) = (-1)^m y_m` for `2 <= m <= N-1`; the `m = N` identity
/// follows from the rest. Unknowns `y_2..y_N`, Bézout number `(N-1)!`.
pub fn build_p1_reduced(n: usize) -> Result<AlgebraicSystem> {
    check_degree(n, 3)?;
    let nv = n - 1;
    let (y, e) = symmetric_with_unit_first(n);
    let mut eqs = vec![e[1].add(&MultiPoly::constant(nv, 1))];
    for m in 2..n {
        eqs.push(symmetric_identity(&e, m, &y[m - 2]));
    }
    Ok(AlgebraicSystem::new(Variant::P1Reduced, n, names(2..=n), eqs))
}

/// `sigma_m(y) = (-1)^m y_m` for `m < N` plus `y_1...y_{N-1} = (-1)^N`.
/// Bézout number `(N-1)(N-1)!`.
pub fn build_nonzero(n: usize) -> Result<AlgebraicSystem> {
    check_degree(n, 3)?;
    let y: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    let e = elementary_symmetric_polys(&y, n);
    let mut eqs: Vec<MultiPoly> = (1..n).map(|m| symmetric_identity(&e, m, &y[m - 1])).collect();
    eqs.push(product_of(&y[..n - 1], n).sub(&MultiPoly::constant(n, sign(n))));
    Ok(AlgebraicSystem::new(Variant::NonZero, n, names(1..=n), eqs))
}

fn unit_first_nonzero(n: usize, variant: Variant) -> Result<AlgebraicSystem> {
    check_degree(n, 4)?;
    let nv = n - 1;
    let (y, e) = symmetric_with_unit_first(n);
    // sigma_1(1, y_2..y_N) = -1, i.e. y_2 + ... + y_N = -2
    let mut eqs = vec![e[1].add(&MultiPoly::constant(nv, 1))];
    for m in 2..=n - 2 {
        eqs.push(symmetric_identity(&e, m, &y[m - 2]));
    }
    eqs.push(product_of(&y[..n - 2], nv).sub(&MultiPoly::constant(nv, sign(n))));
    Ok(AlgebraicSystem::new(variant, n, names(2..=n), eqs))
}

/// Conditions on `y_2..y_N` for peculiar polynomials with `y_1 = 1`,
/// `y_N != 0`. Degrees `(1, 2, .., N-2, N-2)`.
pub fn build_p1_nonzero(n: usize) -> Result<AlgebraicSystem> {
    unit_first_nonzero(n, Variant::P1NonZero)
}

/// The `y_1 = y_0` subset of the `NonZero` system in the chart `y_0 = 1`.
/// Same equations as [`build_p1_nonzero`].
pub fn build_y1_one_subset(n: usize) -> Result<AlgebraicSystem> {
    unit_first_nonzero(n, Variant::Y1OneSubset)
}

/// Conditions satisfied by peculiar polynomials with no coefficient equal to
/// 0 or 1:
///
/// - `sigma_m(y) = (-1)^m y_m` for `1 <= m <= N-2`
/// - `y_1 ... y_{N-1} = (-1)^N`
/// - `y_1 S_{N-2} + sum_{k=1}^{N-1} y_k S_{N-k-1} = 0`, `S_j = sum_{l=0}^{j} y_1^l`
///
/// The last equation is `p(y_1) = 0` minus the `m = 1` identity, divided by
/// `y_1 - 1`.
pub fn build_pt(n: usize) -> Result<AlgebraicSystem> {
    check_degree(n, 3)?;
    let y: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
    let e = elementary_symmetric_polys(&y, n);
    let mut eqs: Vec<MultiPoly> = (1..=n - 2).map(|m| symmetric_identity(&e, m, &y[m - 1])).collect();
    eqs.push(product_of(&y[..n - 1], n).sub(&MultiPoly::constant(n, sign(n))));

    let geometric = |top: usize| {
        // 1 + y_1 + ... + y_1^top
        let mut acc = MultiPoly::constant(n, 1);
        let mut pw = MultiPoly::constant(n, 1);
        for _ in 0..top {
            pw = pw.mul(&y[0]);
            acc = acc.add(&pw);
        }
        acc
    };
    let mut last = y[0].mul(&geometric(n - 2));
    for k in 1..n {
        last = last.add(&y[k - 1].mul(&geometric(n - k - 1)));
    }
    eqs.push(last);
    Ok(AlgebraicSystem::new(Variant::TruePeculiar, n, names(1..=n), eqs))
}

/// Projective form: prepend `y_0` and pad every term with powers of `y_0` up
/// to the equation's total degree.
pub fn homogenize(s: &AlgebraicSystem) -> AlgebraicSystem {
    let eqs = s
        .equations
        .iter()
        .zip(&s.degrees)
        .map(|(eq, &d)| {
            let lifted = eq.with_leading_vars(1);
            MultiPoly::from_terms(
                lifted.num_vars(),
                lifted
                    .terms()
                    .iter()
                    .map(|(c, e)| {
                        let mut e = e.clone();
                        e[0] = d - e.iter().sum::<u32>();
                        (*c, e)
                    })
                    .collect(),
            )
        })
        .collect();
    let mut unknowns = vec!["y0".to_string()];
    unknowns.extend(s.unknowns.iter().cloned());
    AlgebraicSystem::assemble(s.variant, s.degree_n, true, unknowns, eqs)
}

pub fn eval_system(s: &AlgebraicSystem, y: &[Complex64]) -> Result<Vec<Complex64>> {
    s.eval(y)
}

pub fn jacobian(s: &AlgebraicSystem, y: &[Complex64]) -> Result<CMatrix> {
    s.jacobian(y)
}
