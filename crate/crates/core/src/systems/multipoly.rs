use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub type Coeff = Ratio<i64>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted by exponent vector, with no duplicates and no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: Vec<(Coeff, Vec<u32>)>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(num_vars: usize, c: i64) -> Self {
        Self::from_terms(num_vars, vec![(Coeff::from(c), vec![0; num_vars])])
    }

    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        Self::from_terms(num_vars, vec![(Coeff::one(), e)])
    }

    /// Combine like terms, drop zeros, and sort.
    pub fn from_terms(num_vars: usize, terms: Vec<(Coeff, Vec<u32>)>) -> Self {
        let mut acc: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
        for (c, e) in terms {
            assert_eq!(e.len(), num_vars, "exponent vector length");
            *acc.entry(e).or_insert_with(Coeff::zero) += c;
        }
        Self {
            num_vars,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (c, e))
                .collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[(Coeff, Vec<u32>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        Self::from_terms(self.num_vars, self.terms.iter().chain(&other.terms).cloned().collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Coeff::from(-1)))
    }

    pub fn scale(&self, c: Coeff) -> Self {
        Self::from_terms(
            self.num_vars,
            self.terms.iter().map(|(a, e)| (*a * c, e.clone())).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((*a * *b, e));
            }
        }
        Self::from_terms(self.num_vars, terms)
    }

    /// Prepend `extra` variables (with exponent 0) to every term.
    pub fn with_leading_vars(&self, extra: usize) -> Self {
        Self {
            num_vars: self.num_vars + extra,
            terms: self
                .terms
                .iter()
                .map(|(c, e)| {
                    let mut v = vec![0; extra];
                    v.extend_from_slice(e);
                    (*c, v)
                })
                .collect(),
        }
    }

    /// Substitute the constant `value` for variable `index` and drop it.
    pub fn fix_var(&self, index: usize, value: i64) -> Self {
        Self::from_terms(
            self.num_vars - 1,
            self.terms
                .iter()
                .map(|(c, e)| {
                    let mut rest = e.clone();
                    let p = rest.remove(index);
                    (*c * Coeff::from(value.pow(p)), rest)
                })
                .collect(),
        )
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = BigRational::zero();
        for (c, e) in &self.terms {
            let mut t = BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
            for (x, &p) in point.iter().zip(e) {
                for _ in 0..p {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            degree: self.total_degree(),
            terms: self
                .terms
                .iter()
                .map(|(c, e)| TermJson {
                    coeff: if c.is_integer() {
                        c.numer().to_string()
                    } else {
                        format!("{}/{}", c.numer(), c.denom())
                    },
                    exponents: e.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

/// `e_0..e_k` of the given polynomial entries, by the recurrence
/// `e_m(x_1..x_j) = e_m(x_1..x_{j-1}) + x_j e_{m-1}(x_1..x_{j-1})`.
pub fn elementary_symmetric_polys(items: &[MultiPoly], num_vars: usize) -> Vec<MultiPoly> {
    let mut e = vec![MultiPoly::zero(num_vars); items.len() + 1];
    e[0] = MultiPoly::constant(num_vars, 1);
    for (j, x) in items.iter().enumerate() {
        for m in (1..=j + 1).rev() {
            e[m] = e[m].add(&x.mul(&e[m - 1]));
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn like_terms_cancel() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = x.add(&y).sub(&x);
        assert_eq!(p, y);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn symmetric_polys_of_three_vars() {
        let vars: Vec<_> = (0..3).map(|i| MultiPoly::var(3, i)).collect();
        let e = elementary_symmetric_polys(&vars, 3);
        assert_eq!(e[1].terms().len(), 3);
        assert_eq!(e[2].terms().len(), 3);
        assert_eq!(e[3].terms(), &[(Coeff::one(), vec![1, 1, 1])]);
        assert_eq!(e[2].total_degree(), 2);
    }

    #[test]
    fn fixing_a_variable_substitutes() {
        // (x + 2y)^2 at y = -1 → x^2 - 4x + 4
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let s = x.add(&y.scale(Coeff::from(2)));
        let q = s.mul(&s).fix_var(1, -1);
        let expected = MultiPoly::from_terms(
            1,
            vec![
                (Coeff::from(1), vec![2]),
                (Coeff::from(-4), vec![1]),
                (Coeff::from(4), vec![0]),
            ],
        );
        assert_eq!(q, expected);
    }
}
