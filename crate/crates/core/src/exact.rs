//! Exact distributions of the number of requests.
//!
//! Two laws are covered: the request count of one fixed faithful man
//! (Mr. c+1), supported on `1..=c+1`, and the total over all `f` faithful
//! men, supported on `f..=c+f`. Each is available as a closed-form pmf, as
//! closed-form moments, and as a generating-function coefficient extracted
//! with the series engine in [`crate::series`].

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chase::match_all;
use crate::error::{Error, Result};
use crate::rational::{self, binomial};
use crate::scenario::{enumerate_scenarios, scenario_count};
use crate::series::{rational as int, SeriesPoly, ZSeries};

/// Largest scenario count [`joint_pathlength_census`] will enumerate.
pub const CENSUS_LIMIT: u64 = 1_000_000;

/// Finite pmf with exact masses: `masses[j] = P(offset + j)`.
///
/// Masses are nonnegative, sum to exactly one, and the first and last are nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PmfJson", into = "PmfJson")]
pub struct ExactPmf {
    offset: i64,
    masses: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PmfJson {
    offset: i64,
    #[serde(with = "rational::vec")]
    masses: Vec<BigRational>,
}

impl TryFrom<PmfJson> for ExactPmf {
    type Error = Error;

    fn try_from(raw: PmfJson) -> Result<Self> {
        ExactPmf::new(raw.offset, raw.masses)
    }
}

impl From<ExactPmf> for PmfJson {
    fn from(p: ExactPmf) -> Self {
        PmfJson {
            offset: p.offset,
            masses: p.masses,
        }
    }
}

impl ExactPmf {
    /// Validates and trims zero mass from both ends.
    pub fn new(mut offset: i64, mut masses: Vec<BigRational>) -> Result<Self> {
        if let Some(q) = masses.iter().find(|q| q.is_negative()) {
            return Err(Error::InvalidPmf(format!("negative mass {q}")));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidPmf(format!("masses sum to {total}, not 1")));
        }
        while masses.last().is_some_and(Zero::is_zero) {
            masses.pop();
        }
        let lead = masses.iter().take_while(|q| q.is_zero()).count();
        masses.drain(..lead);
        offset += lead as i64;
        Ok(ExactPmf { offset, masses })
    }

    /// Normalizes nonnegative integer weights `weights[j]` at `offset + j`.
    pub fn from_counts(offset: i64, weights: &[BigInt]) -> Result<Self> {
        let total: BigInt = weights.iter().sum();
        if !total.is_positive() {
            return Err(Error::InvalidPmf("no positive weight".into()));
        }
        let masses = weights
            .iter()
            .map(|w| BigRational::new(w.clone(), total.clone()))
            .collect();
        ExactPmf::new(offset, masses)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    /// Largest support value.
    pub fn max(&self) -> i64 {
        self.offset + self.masses.len() as i64 - 1
    }

    pub fn mass(&self, value: i64) -> BigRational {
        value
            .checked_sub(self.offset)
            .and_then(|j| j.to_usize())
            .and_then(|j| self.masses.get(j))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `(value, mass)` pairs over the support, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.masses
            .iter()
            .enumerate()
            .map(move |(j, q)| (self.offset + j as i64, q))
    }

    pub fn mean(&self) -> BigRational {
        self.iter().map(|(i, q)| q * int(i)).sum()
    }

    /// The pmf as the polynomial `sum P(i) x^i`.
    pub fn to_poly(&self) -> SeriesPoly {
        assert!(self.offset >= 0, "negative support has no generating polynomial");
        let mut coefficients = vec![BigRational::zero(); self.offset as usize];
        coefficients.extend(self.masses.iter().cloned());
        SeriesPoly::new(coefficients)
    }
}

/// `E[(X - E[X])^r]`, exactly.
pub fn central_moment(p: &ExactPmf, r: u32) -> BigRational {
    let mean = p.mean();
    p.iter()
        .map(|(i, q)| q * num_traits::pow(int(i) - &mean, r as usize))
        .sum()
}

/// Mean and the second through fourth central moments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSet {
    #[serde(with = "rational")]
    pub mean: BigRational,
    #[serde(with = "rational")]
    pub variance: BigRational,
    #[serde(with = "rational")]
    pub mu3: BigRational,
    #[serde(with = "rational")]
    pub mu4: BigRational,
}

impl MomentSet {
    pub fn from_pmf(p: &ExactPmf) -> Self {
        MomentSet {
            mean: p.mean(),
            variance: central_moment(p, 2),
            mu3: central_moment(p, 3),
            mu4: central_moment(p, 4),
        }
    }
}

fn require_faithful(f: u32) -> Result<()> {
    if f == 0 {
        Err(Error::NoFaithful)
    } else {
        Ok(())
    }
}

/// `P(i) = C(f+c-i, f-1) / C(c+f, c)` on `1..=c+1`.
pub fn single_pmf(c: u32, f: u32) -> Result<ExactPmf> {
    require_faithful(f)?;
    let (c, f) = (c as i64, f as i64);
    let weights: Vec<BigInt> = (1..=c + 1).map(|i| binomial(f + c - i, f - 1)).collect();
    let norm = binomial(c + f, c);
    ExactPmf::new(
        1,
        weights
            .into_iter()
            .map(|w| BigRational::new(w, norm.clone()))
            .collect(),
    )
}

/// `P(i) = C(i-1, f-1) / C(c+f, c)` on `f..=c+f`.
pub fn total_pmf(c: u32, f: u32) -> Result<ExactPmf> {
    require_faithful(f)?;
    let (c, f) = (c as i64, f as i64);
    let norm = binomial(c + f, c);
    ExactPmf::new(
        f,
        (f..=c + f)
            .map(|i| BigRational::new(binomial(i - 1, f - 1), norm.clone()))
            .collect(),
    )
}

struct ClosedForms {
    mean_single: BigRational,
    variance: BigRational,
    mu3_single: BigRational,
    mu4: BigRational,
}

fn closed_forms(c: u32, f: u32) -> ClosedForms {
    let c = int(c as i64);
    let f = int(f as i64);
    let one = BigRational::one();
    let n1 = &c + &f + &one; // c + f + 1
    let f1 = &f + &one;
    let f2 = &f + int(2);
    let f3 = &f + int(3);
    let f4 = &f + int(4);
    let ncf = &n1 * &c * &f;

    let mean_single = &n1 / &f1;
    let variance = &ncf / (&f1 * &f1 * &f2);
    let mu3_single = &ncf * (int(2) * &c * &f + &f * &f - int(2) * &c - &one)
        / (num_traits::pow(f1.clone(), 3) * &f2 * &f3);
    let (c2, f2sq) = (&c * &c, &f * &f);
    let quartic = int(9) * &c2 * &f2sq + int(9) * &c * &f2sq * &f + &f2sq * &f2sq
        - int(3) * &c2 * &f
        + int(6) * &c * &f2sq
        - int(3) * &f2sq * &f
        + int(6) * &c2
        + int(3) * &c * &f
        - int(9) * &f2sq
        + int(6) * &c
        - int(5) * &f;
    let mu4 = &ncf * quartic / (num_traits::pow(f1, 4) * &f2 * &f3 * &f4);
    ClosedForms {
        mean_single,
        variance,
        mu3_single,
        mu4,
    }
}

/// Closed-form moments of the single-man law.
pub fn single_moments_closed(c: u32, f: u32) -> Result<MomentSet> {
    require_faithful(f)?;
    let k = closed_forms(c, f);
    Ok(MomentSet {
        mean: k.mean_single,
        variance: k.variance,
        mu3: k.mu3_single,
        mu4: k.mu4,
    })
}

/// Closed-form moments of the total law. The mean is `f` times the single
/// mean; the variance and fourth moment coincide with the single law and the
/// third flips sign.
pub fn total_moments_closed(c: u32, f: u32) -> Result<MomentSet> {
    require_faithful(f)?;
    let k = closed_forms(c, f);
    Ok(MomentSet {
        mean: k.mean_single * int(f as i64),
        variance: k.variance,
        mu3: -k.mu3_single,
        mu4: k.mu4,
    })
}

/// `c! f! / (c+f)!`.
fn pgf_normalizer(c: u32, f: u32) -> BigRational {
    BigRational::new(BigInt::one(), binomial((c + f) as i64, c as i64))
}

fn one_minus(coefficient: SeriesPoly, order: usize) -> ZSeries {
    ZSeries::new(vec![SeriesPoly::one(), -&coefficient], order)
}

/// `[z^c]` of `c! f!/(c+f)! * x / ((1 - xz)(1 - z)^f)`, a polynomial in `x`.
pub fn pgf_single(c: u32, f: u32) -> Result<SeriesPoly> {
    require_faithful(f)?;
    let order = c as usize + 1;
    let geometric_x = one_minus(SeriesPoly::x(), order).inverse().expect("unit");
    let geometric = one_minus(SeriesPoly::one(), order).inverse().expect("unit");
    let series = &(&ZSeries::constant(SeriesPoly::x(), order) * &geometric_x) * &geometric.pow(f);
    Ok(series.coefficient(c as usize).scale(&pgf_normalizer(c, f)))
}

/// `[z^c]` of `c! f!/(c+f)! * x^f / ((1 - z)(1 - xz)^f)`, a polynomial in `x`.
pub fn pgf_total(c: u32, f: u32) -> Result<SeriesPoly> {
    require_faithful(f)?;
    let order = c as usize + 1;
    let geometric_x = one_minus(SeriesPoly::x(), order).inverse().expect("unit");
    let geometric = one_minus(SeriesPoly::one(), order).inverse().expect("unit");
    let x_f = SeriesPoly::monomial(BigRational::one(), f as usize);
    let series = &(&ZSeries::constant(x_f, order) * &geometric) * &geometric_x.pow(f);
    Ok(series.coefficient(c as usize).scale(&pgf_normalizer(c, f)))
}

/// Request vector of Mr. c+1, ..., Mr. c+f -> number of scenarios producing it.
pub type Census = BTreeMap<Vec<u32>, u64>;

/// Tallies the ordered request vectors over every scenario.
pub fn joint_pathlength_census(c: u32, f: u32) -> Result<Census> {
    let count = scenario_count(c, f);
    if count > BigUint::from(CENSUS_LIMIT) {
        return Err(Error::TooLarge {
            count: count.to_string(),
            limit: CENSUS_LIMIT,
        });
    }
    let mut census = Census::new();
    for s in enumerate_scenarios(c, f) {
        *census.entry(match_all(&s)?.request_vector()).or_default() += 1;
    }
    Ok(census)
}

/// Every vector `(a_1, ..., a_f)` with `a_i >= 1` and `sum (a_i - 1) <= c`.
pub fn feasible_pathlengths(c: u32, f: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, slack: u32, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for extra in 0..=slack {
            prefix.push(extra + 1);
            extend(prefix, slack - extra, remaining - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(f as usize), c, f, &mut out);
    out
}

/// Support check and common multiplicity of a census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub support_matches: bool,
    /// The per-vector count when it is the same for every vector.
    pub multiplicity: Option<u64>,
    pub vectors: usize,
}

pub fn summarize_census(c: u32, f: u32, census: &Census) -> CensusSummary {
    let feasible = feasible_pathlengths(c, f);
    let support_matches =
        feasible.len() == census.len() && feasible.iter().all(|v| census.contains_key(v));
    let mut counts = census.values();
    let first = counts.next().copied();
    let multiplicity = first.filter(|&m| counts.all(|&n| n == m));
    CensusSummary {
        support_matches,
        multiplicity,
        vectors: census.len(),
    }
}

/// Total-variation distance between the single-man law at `c = k f` and the
/// geometric law `p (1-p)^(i-1)`, `p = 1/(k+1)`, on `1..=kf+1`. The geometric
/// mass beyond `kf+1` is lumped into one extra cell where the pmf is zero.
pub fn geometric_limit_distance(k: u32, f: u32) -> Result<BigRational> {
    require_faithful(f)?;
    let c = k
        .checked_mul(f)
        .ok_or_else(|| Error::InvalidArgument(format!("k*f = {k}*{f} overflows")))?;
    let pmf = single_pmf(c, f)?;
    let success = BigRational::new(BigInt::one(), BigInt::from(k as u64 + 1));
    let failure = BigRational::one() - &success;
    let mut geometric = success;
    let mut l1 = BigRational::zero();
    for i in 1..=c as i64 + 1 {
        l1 += (pmf.mass(i) - &geometric).abs();
        geometric *= &failure;
    }
    // P(G > c+1) = (1-p)^(c+1)
    l1 += num_traits::pow(failure, c as usize + 1);
    Ok(l1 / int(2))
}
