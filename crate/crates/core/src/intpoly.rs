//! Integer polynomials in one variable: irreducibility certificates over
//! `F_p`, rational roots, and the shipped known-answer data.

use crate::classify::EnumerationReport;
use crate::dd::{ComplexDD, DoubleDouble};
use crate::error::{Error, Result};
use crate::homotopy::relative_distance;
use crate::poly::{find_roots, MonicPoly, RootOptions};
use crate::systems::{build_full, ClassTag};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl TryFrom<Vec<i64>> for IntPoly {
    type Error = String;
    fn try_from(c: Vec<i64>) -> std::result::Result<Self, String> {
        IntPoly::new(c).ok_or_else(|| "zero polynomial".to_string())
    }
}

impl From<IntPoly> for Vec<i64> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

impl IntPoly {
    /// `None` for the zero polynomial.
    pub fn new(mut coeffs: Vec<i64>) -> Option<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        (!coeffs.is_empty()).then_some(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("nonzero")
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, &c| {
            acc * x + BigRational::from_integer(c.into())
        })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }

    fn eval_dd_with_derivative(&self, z: ComplexDD) -> (ComplexDD, ComplexDD) {
        let mut p = ComplexDD::from_real(DoubleDouble::ZERO);
        let mut dp = p;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + ComplexDD::from_real(DoubleDouble::from(c));
        }
        (p, dp)
    }

    /// All complex roots, with multiplicity.
    pub fn complex_roots(&self) -> Result<Vec<Complex64>> {
        let lead = self.leading() as f64;
        let monic = MonicPoly::new(
            self.coeffs[..self.degree()]
                .iter()
                .rev()
                .map(|&c| Complex64::new(c as f64 / lead, 0.0))
                .collect(),
        );
        Ok(find_roots(&monic, &RootOptions::default())?
            .zero_set()
            .elements()
            .to_vec())
    }

    /// Newton polish of a simple root in double-double.
    pub fn refine_root_dd(&self, z: Complex64) -> ComplexDD {
        let mut w = ComplexDD::from(z);
        for _ in 0..8 {
            let (p, dp) = self.eval_dd_with_derivative(w);
            if dp.norm() == 0.0 {
                break;
            }
            w = w - p / dp;
        }
        w
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn primes_up_to(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&p| is_prime(p))
}

/// Dense polynomials over `F_p`, constant first, trimmed.
mod fp {
    pub type Poly = Vec<u64>;

    pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a, p);
            }
            a = mulmod(a, a, p);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        powmod(a, p - 2, p)
    }

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
        let mut r = a.to_vec();
        let df = f.len() - 1;
        let lead_inv = inv(f[df], p);
        while r.len() > df {
            let top = *r.last().unwrap();
            if top != 0 {
                let q = mulmod(top, lead_inv, p);
                let shift = r.len() - 1 - df;
                for (i, &fi) in f.iter().enumerate() {
                    let sub = mulmod(q, fi, p);
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            r.pop();
        }
        trim(r)
    }

    pub fn mul_rem(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
            }
        }
        rem(&prod, f, p)
    }

    pub fn pow_rem(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Poly {
        let mut result = rem(&[1], f, p);
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_rem(&result, &b, f, p);
            }
            b = mul_rem(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    let x = a.get(i).copied().unwrap_or(0);
                    let y = b.get(i).copied().unwrap_or(0);
                    (x + p - y) % p
                })
                .collect(),
        )
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

fn reduce_mod(f: &IntPoly, p: u64) -> Vec<u64> {
    f.coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `f` of degree `n` is irreducible over `F_p` iff
/// `x^{p^n} = x (mod f)` and `gcd(x^{p^{n/q}} - x, f) = 1` for every prime
/// `q | n`.
pub fn irreducible_mod_p(f: &IntPoly, p: u64) -> Result<bool> {
    if !is_prime(p) || p > u32::MAX as u64 || f.leading().rem_euclid(p as i64) == 0 {
        return Err(Error::BadPrime { prime: p });
    }
    let n = f.degree();
    if n == 0 {
        return Ok(false);
    }
    let fp = reduce_mod(f, p);
    let x = vec![0, 1];
    // frob[k] = x^{p^k} mod f
    let mut frob = vec![fp::rem(&x, &fp, p)];
    for k in 0..n {
        let next = fp::pow_rem(&frob[k], p, &fp, p);
        frob.push(next);
    }
    if !fp::sub(&frob[n], &frob[0], p).is_empty() {
        return Ok(false);
    }
    for q in prime_factors(n) {
        let d = fp::sub(&frob[n / q], &frob[0], p);
        if fp::gcd(&fp, &d, p).len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Certificate {
    /// `f` is irreducible modulo `prime`, hence over the rationals.
    Irreducible {
        prime: u64,
    },
    Inconclusive,
}

/// Smallest prime `p <= prime_bound` (not dividing the leading coefficient)
/// with `f` irreducible over `F_p`.
pub fn certify_irreducible(f: &IntPoly, prime_bound: u64) -> Certificate {
    if f.degree() == 0 {
        return Certificate::Inconclusive;
    }
    primes_up_to(prime_bound)
        .filter(|&p| f.leading() % p as i64 != 0)
        .find(|&p| irreducible_mod_p(f, p).unwrap_or(false))
        .map_or(Certificate::Inconclusive, |prime| Certificate::Irreducible { prime })
}

pub const DEFAULT_PRIME_BOUND: u64 = 200;

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as i64);
            if d * d != n {
                out.push((n / d) as i64);
            }
        }
        d += 1;
    }
    out
}

/// All distinct rational roots, ascending.
pub fn rational_roots(f: &IntPoly) -> Vec<BigRational> {
    let zeros = f.coeffs.iter().take_while(|&&c| c == 0).count();
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(BigRational::zero());
    }
    let g = IntPoly::new(f.coeffs[zeros..].to_vec()).expect("nonzero");
    if g.degree() > 0 {
        for num in divisors(g.coeffs[0]) {
            for den in divisors(g.leading()) {
                for sign in [1, -1] {
                    let r = BigRational::new(BigInt::from(sign * num), BigInt::from(den));
                    if g.eval_rational(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// `(sum w[i] x^i + sum y2[j] y_2^j) / den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordFormula {
    #[serde(default)]
    pub w: Vec<i64>,
    #[serde(default)]
    pub y2: Vec<i64>,
    #[serde(default = "one")]
    pub den: i64,
}

fn one() -> i64 {
    1
}

fn horner_dd(coeffs: &[i64], x: ComplexDD) -> ComplexDD {
    coeffs
        .iter()
        .rev()
        .fold(ComplexDD::from_real(DoubleDouble::ZERO), |acc, &c| {
            acc * x + ComplexDD::from_real(DoubleDouble::from(c))
        })
}

impl CoordFormula {
    fn eval_dd(&self, w: ComplexDD, y2: Option<ComplexDD>) -> Result<ComplexDD> {
        let mut v = horner_dd(&self.w, w);
        if !self.y2.is_empty() {
            let y2 = y2.ok_or_else(|| Error::KnownAnswerData("y2 used before it is defined".into()))?;
            v = v + horner_dd(&self.y2, y2);
        }
        Ok(v * (DoubleDouble::ONE / DoubleDouble::from(self.den)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownAnswer {
    #[serde(rename = "degree")]
    pub degree_n: usize,
    #[serde(rename = "class")]
    pub class_tag: ClassTag,
    pub defining_poly: IntPoly,
    #[serde(rename = "y")]
    pub coefficient_formulas: Vec<CoordFormula>,
}

impl KnownAnswer {
    fn points_from(&self, roots: &[ComplexDD]) -> Result<Vec<Vec<ComplexDD>>> {
        roots
            .iter()
            .map(|&w| {
                let mut y: Vec<ComplexDD> = Vec::with_capacity(self.degree_n);
                for f in &self.coefficient_formulas {
                    let v = f.eval_dd(w, y.get(1).copied())?;
                    y.push(v);
                }
                Ok(y)
            })
            .collect()
    }

    /// Points obtained from the `f64` roots of the defining polynomial.
    pub fn points(&self) -> Result<Vec<Vec<Complex64>>> {
        let roots: Vec<ComplexDD> = self
            .defining_poly
            .complex_roots()?
            .into_iter()
            .map(Into::into)
            .collect();
        Ok(self
            .points_from(&roots)?
            .into_iter()
            .map(|p| p.iter().map(|z| z.to_c64()).collect())
            .collect())
    }

    /// Points from roots polished in double-double, evaluated in
    /// double-double.
    pub fn points_dd(&self) -> Result<Vec<Vec<ComplexDD>>> {
        let roots: Vec<ComplexDD> = self
            .defining_poly
            .complex_roots()?
            .into_iter()
            .map(|w| self.defining_poly.refine_root_dd(w))
            .collect();
        self.points_from(&roots)
    }
}

pub const KNOWN_ANSWERS_SCHEMA_VERSION: u32 = 1;
const KNOWN_ANSWERS_TOML: &str = include_str!("../data/known_answers.toml");

#[derive(Deserialize)]
struct KnownAnswerFile {
    schema_version: u32,
    answer: Vec<KnownAnswer>,
}

pub fn parse_known_answers(text: &str) -> Result<Vec<KnownAnswer>> {
    let file: KnownAnswerFile = toml::from_str(text).map_err(|e| Error::KnownAnswerData(e.to_string()))?;
    if file.schema_version != KNOWN_ANSWERS_SCHEMA_VERSION {
        return Err(Error::KnownAnswerData(format!(
            "schema version {} (expected {KNOWN_ANSWERS_SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    for a in &file.answer {
        if a.coefficient_formulas.len() != a.degree_n {
            return Err(Error::KnownAnswerData(format!(
                "degree {} entry has {} coordinates",
                a.degree_n,
                a.coefficient_formulas.len()
            )));
        }
    }
    Ok(file.answer)
}

/// The data shipped with the crate.
pub fn known_answers() -> Vec<KnownAnswer> {
    parse_known_answers(KNOWN_ANSWERS_TOML).expect("bundled data is valid")
}

/// Point counts the known answers must produce, per degree.
pub fn expected_known_count(n: usize) -> Option<usize> {
    match n {
        2 => Some(1),
        3 => Some(4),
        4 => Some(17),
        _ => None,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KnownAnswerEntry {
    pub class: ClassTag,
    pub defining_degree: usize,
    pub points: usize,
    pub max_residual: f64,
    pub matched: usize,
    /// Points not matched by exactly one solution of the same class.
    #[serde(serialize_with = "crate::report::serialize_points")]
    pub unmatched: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KnownAnswerAudit {
    pub degree_n: usize,
    pub entries: Vec<KnownAnswerEntry>,
    pub expected_points: usize,
    pub total_points: usize,
    pub passes: bool,
}

/// Residual below which a substituted known answer counts as a solution.
pub const KNOWN_ANSWER_RESIDUAL: f64 = 1e-9;

pub fn verify_known_answers(n: usize, report: &EnumerationReport) -> Result<KnownAnswerAudit> {
    let expected_points =
        expected_known_count(n).ok_or_else(|| Error::KnownAnswerData(format!("no known answers for degree {n}")))?;
    if report.degree_n != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            actual: report.degree_n,
        });
    }
    let system = build_full(n)?;
    let tol = report.tolerances.dedup;
    let mut entries = Vec::new();
    for a in known_answers().iter().filter(|a| a.degree_n == n) {
        let points = a.points()?;
        let mut max_residual: f64 = 0.0;
        let mut unmatched = Vec::new();
        for p in &points {
            max_residual = max_residual.max(system.residual(p)?);
            let hits: Vec<_> = report
                .solutions
                .iter()
                .filter(|s| relative_distance(&s.y, p) <= tol)
                .collect();
            if hits.len() != 1 || hits[0].class_tag != a.class_tag {
                unmatched.push(p.clone());
            }
        }
        entries.push(KnownAnswerEntry {
            class: a.class_tag,
            defining_degree: a.defining_poly.degree(),
            points: points.len(),
            max_residual,
            matched: points.len() - unmatched.len(),
            unmatched,
        });
    }
    let total_points = entries.iter().map(|e| e.points).sum();
    let passes = total_points == expected_points
        && entries
            .iter()
            .all(|e| e.unmatched.is_empty() && e.max_residual < KNOWN_ANSWER_RESIDUAL);
    Ok(KnownAnswerAudit {
        degree_n: n,
        entries,
        expected_points,
        total_points,
        passes,
    })
}

/// Defining polynomials of degree above 1 in the known answers.
pub fn known_irreducible_candidates() -> Vec<IntPoly> {
    let mut out: Vec<IntPoly> = Vec::new();
    for a in known_answers() {
        if a.defining_poly.degree() > 1 && !out.contains(&a.defining_poly) {
            out.push(a.defining_poly);
        }
    }
    out
}
