//! Exact series arithmetic for generating-function coefficient extraction.
//!
//! [`SeriesPoly`] is a polynomial in `x` with rational coefficients.
//! [`ZSeries`] is a power series in `z` truncated at a fixed order whose
//! coefficients are `SeriesPoly`s. Only units with a nonzero constant `z^0`
//! coefficient can be inverted.

use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Polynomial in `x`, `coefficients[i]` multiplying `x^i`. No trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeriesPoly {
    coefficients: Vec<BigRational>,
}

impl SeriesPoly {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        SeriesPoly { coefficients }
    }

    pub fn zero() -> Self {
        SeriesPoly::default()
    }

    pub fn constant(value: BigRational) -> Self {
        SeriesPoly::new(vec![value])
    }

    pub fn one() -> Self {
        SeriesPoly::constant(BigRational::one())
    }

    /// `coefficient * x^degree`.
    pub fn monomial(coefficient: BigRational, degree: usize) -> Self {
        let mut coefficients = vec![BigRational::zero(); degree + 1];
        coefficients[degree] = coefficient;
        SeriesPoly::new(coefficients)
    }

    pub fn x() -> Self {
        SeriesPoly::monomial(BigRational::one(), 1)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, degree: usize) -> BigRational {
        self.coefficients
            .get(degree)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coefficients.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coefficients[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        SeriesPoly::new(self.coefficients.iter().map(|c| c * factor).collect())
    }
}

impl Add for &SeriesPoly {
    type Output = SeriesPoly;

    fn add(self, rhs: &SeriesPoly) -> SeriesPoly {
        let len = self.coefficients.len().max(rhs.coefficients.len());
        SeriesPoly::new((0..len).map(|i| self.coefficient(i) + rhs.coefficient(i)).collect())
    }
}

impl Neg for &SeriesPoly {
    type Output = SeriesPoly;

    fn neg(self) -> SeriesPoly {
        SeriesPoly::new(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Mul for &SeriesPoly {
    type Output = SeriesPoly;

    fn mul(self, rhs: &SeriesPoly) -> SeriesPoly {
        if self.is_zero() || rhs.is_zero() {
            return SeriesPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        SeriesPoly::new(out)
    }
}

/// Power series in `z` with polynomial-in-`x` coefficients, exact below `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSeries {
    terms: Vec<SeriesPoly>,
    order: usize,
}

impl ZSeries {
    /// Builds `sum terms[n] z^n + O(z^order)`, dropping terms at or past `order`.
    pub fn new(mut terms: Vec<SeriesPoly>, order: usize) -> Self {
        terms.resize(order, SeriesPoly::zero());
        ZSeries { terms, order }
    }

    pub fn constant(value: SeriesPoly, order: usize) -> Self {
        ZSeries::new(vec![value], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficient(&self, n: usize) -> SeriesPoly {
        self.terms.get(n).cloned().unwrap_or_default()
    }

    /// Multiplicative inverse, if the `z^0` coefficient is a nonzero constant.
    pub fn inverse(&self) -> Option<ZSeries> {
        let lead = self.coefficient(0).as_constant()?;
        if lead.is_zero() {
            return None;
        }
        let inv_lead = lead.recip();
        let mut out: Vec<SeriesPoly> = Vec::with_capacity(self.order);
        if self.order > 0 {
            out.push(SeriesPoly::constant(inv_lead.clone()));
        }
        // b_n = -(1/a_0) * sum_{k=1..n} a_k b_{n-k}
        for n in 1..self.order {
            let mut acc = SeriesPoly::zero();
            for k in 1..=n {
                if self.terms[k].is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.terms[k] * &out[n - k]);
            }
            out.push((-&acc).scale(&inv_lead));
        }
        Some(ZSeries::new(out, self.order))
    }

    pub fn pow(&self, mut exponent: u32) -> ZSeries {
        let mut result = ZSeries::constant(SeriesPoly::one(), self.order);
        let mut base = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = &result * &base;
            }
            exponent >>= 1;
            if exponent > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Mul for &ZSeries {
    type Output = ZSeries;

    fn mul(self, rhs: &ZSeries) -> ZSeries {
        let order = self.order.min(rhs.order);
        let mut terms = vec![SeriesPoly::zero(); order];
        for (i, a) in self.terms.iter().enumerate().take(order) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.terms.iter().enumerate().take(order - i) {
                if !b.is_zero() {
                    terms[i + j] = &terms[i + j] + &(a * b);
                }
            }
        }
        ZSeries::new(terms, order)
    }
}

pub(crate) fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
