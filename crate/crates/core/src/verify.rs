//! Self-verification: closed forms against exhaustive enumeration, against
//! generating-function extraction, and against numeric moments.
//!
//! The closed forms are reached through the [`Formulas`] trait so that a
//! perturbed implementation can be checked to fail.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chase::chase_requests;
use crate::error::Result;
use crate::exact::{
    self, central_moment, joint_pathlength_census, summarize_census, ExactPmf, MomentSet,
};
use crate::scenario::{enumerate_scenarios, scenario_count};

/// Source of the closed-form distributions under test.
pub trait Formulas: Sync {
    fn single_pmf(&self, c: u32, f: u32) -> Result<ExactPmf>;
    fn total_pmf(&self, c: u32, f: u32) -> Result<ExactPmf>;
    fn single_moments(&self, c: u32, f: u32) -> Result<MomentSet>;
    fn total_moments(&self, c: u32, f: u32) -> Result<MomentSet>;
}

/// The formulas implemented in [`crate::exact`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForms;

impl Formulas for ClosedForms {
    fn single_pmf(&self, c: u32, f: u32) -> Result<ExactPmf> {
        exact::single_pmf(c, f)
    }
    fn total_pmf(&self, c: u32, f: u32) -> Result<ExactPmf> {
        exact::total_pmf(c, f)
    }
    fn single_moments(&self, c: u32, f: u32) -> Result<MomentSet> {
        exact::single_moments_closed(c, f)
    }
    fn total_moments(&self, c: u32, f: u32) -> Result<MomentSet> {
        exact::total_moments_closed(c, f)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Enumerate every `(c, f)` with at most this many scenarios.
    pub max_size: u64,
    /// Upper bound on `c` and `f` for the formula cross-checks, and on `f`
    /// for the enumeration checks (`c = 0` and `c = 1` would otherwise admit
    /// unboundedly many `f`).
    pub max_param: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_size: 100_000,
            max_param: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exact single and total pmfs tallied over every scenario.
pub fn enumerated_pmfs(c: u32, f: u32) -> Result<(ExactPmf, ExactPmf)> {
    let mut single = vec![BigInt::zero(); (c + 2) as usize];
    let mut total = vec![BigInt::zero(); (c + f + 1) as usize];
    for s in enumerate_scenarios(c, f) {
        let mut sum = 0;
        for m in s.faithful_men() {
            let (_, r) = chase_requests(&s, m)?;
            if m == c + 1 {
                single[r] += 1;
            }
            sum += r;
        }
        total[sum] += 1;
    }
    Ok((
        ExactPmf::from_counts(0, &single)?,
        ExactPmf::from_counts(0, &total)?,
    ))
}

/// Every `(c, f)` with `1 <= f <= max_f` and at most `max_size` scenarios.
pub fn enumerable_pairs(max_size: u64, max_f: u32) -> Vec<(u32, u32)> {
    let limit = BigUint::from(max_size);
    let mut pairs = Vec::new();
    for f in 1..=max_f {
        for c in 0.. {
            if scenario_count(c, f) > limit {
                break;
            }
            pairs.push((c, f));
        }
    }
    pairs
}

fn grid(max_param: u32) -> Vec<(u32, u32)> {
    (0..=max_param)
        .flat_map(|c| (1..=max_param).map(move |f| (c, f)))
        .collect()
}

fn summarize(name: &str, failures: Vec<String>, checked: usize) -> CheckResult {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{checked} cases")
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("{} of {checked} cases failed: {}", failures.len(), shown.join("; "))
    };
    CheckResult {
        name: name.into(),
        passed,
        detail,
    }
}

fn check_pairs<F>(name: &str, pairs: &[(u32, u32)], check: F) -> CheckResult
where
    F: Fn(u32, u32) -> std::result::Result<(), String> + Sync,
{
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|&(c, f)| check(c, f).err().map(|e| format!("(c={c}, f={f}) {e}")))
        .collect();
    summarize(name, failures, pairs.len())
}

fn expect_eq<T: PartialEq>(what: &str, a: &T, b: &T) -> std::result::Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what} differs"))
    }
}

pub fn enumeration_check(formulas: &dyn Formulas, opts: &VerifyOptions) -> CheckResult {
    let pairs = enumerable_pairs(opts.max_size, opts.max_param);
    check_pairs("enumeration oracle = closed-form pmfs", &pairs, |c, f| {
        let (single, total) = enumerated_pmfs(c, f).map_err(|e| e.to_string())?;
        let expect_single = formulas.single_pmf(c, f).map_err(|e| e.to_string())?;
        let expect_total = formulas.total_pmf(c, f).map_err(|e| e.to_string())?;
        expect_eq("single pmf", &single, &expect_single)?;
        expect_eq("total pmf", &total, &expect_total)
    })
}

pub fn pgf_check(formulas: &dyn Formulas, opts: &VerifyOptions) -> CheckResult {
    check_pairs("pgf coefficients = closed-form pmfs", &grid(opts.max_param), |c, f| {
        let single = formulas.single_pmf(c, f).map_err(|e| e.to_string())?;
        let total = formulas.total_pmf(c, f).map_err(|e| e.to_string())?;
        let pgf_single = exact::pgf_single(c, f).map_err(|e| e.to_string())?;
        let pgf_total = exact::pgf_total(c, f).map_err(|e| e.to_string())?;
        expect_eq("single pgf", &pgf_single, &single.to_poly())?;
        expect_eq("total pgf", &pgf_total, &total.to_poly())
    })
}

pub fn normalization_check(formulas: &dyn Formulas, opts: &VerifyOptions) -> CheckResult {
    check_pairs("pmfs sum to one", &grid(opts.max_param), |c, f| {
        for p in [formulas.single_pmf(c, f), formulas.total_pmf(c, f)] {
            let p = p.map_err(|e| e.to_string())?;
            let sum: BigRational = p.masses().iter().sum();
            if !sum.is_one() {
                return Err(format!("sum {sum}"));
            }
        }
        Ok(())
    })
}

pub fn moments_check(formulas: &dyn Formulas, opts: &VerifyOptions) -> CheckResult {
    check_pairs("closed-form moments = numeric moments", &grid(opts.max_param), |c, f| {
        for (label, pmf, closed) in [
            ("single", formulas.single_pmf(c, f), formulas.single_moments(c, f)),
            ("total", formulas.total_pmf(c, f), formulas.total_moments(c, f)),
        ] {
            let pmf = pmf.map_err(|e| e.to_string())?;
            let closed = closed.map_err(|e| e.to_string())?;
            let numeric = MomentSet {
                mean: pmf.mean(),
                variance: central_moment(&pmf, 2),
                mu3: central_moment(&pmf, 3),
                mu4: central_moment(&pmf, 4),
            };
            expect_eq(label, &closed, &numeric)?;
        }
        Ok(())
    })
}

pub fn symmetry_check(formulas: &dyn Formulas, opts: &VerifyOptions) -> CheckResult {
    check_pairs(
        "total mean = f * single mean, equal variances",
        &grid(opts.max_param),
        |c, f| {
            let single = formulas.single_moments(c, f).map_err(|e| e.to_string())?;
            let total = formulas.total_moments(c, f).map_err(|e| e.to_string())?;
            let scaled = &single.mean * BigRational::from_integer(BigInt::from(f));
            expect_eq("mean", &total.mean, &scaled)?;
            expect_eq("variance", &total.variance, &single.variance)
        },
    )
}

/// Census support and per-vector multiplicity at every enumerable `(c, f)`.
pub fn census_check(opts: &VerifyOptions) -> CheckResult {
    let pairs = enumerable_pairs(opts.max_size, opts.max_param);
    let results: Vec<(u32, u32, std::result::Result<exact::CensusSummary, String>)> = pairs
        .par_iter()
        .map(|&(c, f)| {
            let summary = joint_pathlength_census(c, f)
                .map(|census| summarize_census(c, f, &census))
                .map_err(|e| e.to_string());
            (c, f, summary)
        })
        .collect();
    let mut failures = Vec::new();
    let mut equals_c_factorial = true;
    let mut equals_f_factorial = true;
    for (c, f, summary) in &results {
        match summary {
            Err(e) => failures.push(format!("(c={c}, f={f}) {e}")),
            Ok(s) if !s.support_matches => failures.push(format!("(c={c}, f={f}) support differs")),
            Ok(s) => match s.multiplicity {
                None => failures.push(format!("(c={c}, f={f}) counts not constant")),
                Some(m) => {
                    let m = BigUint::from(m);
                    equals_c_factorial &= m == factorial(*c);
                    equals_f_factorial &= m == factorial(*f);
                }
            },
        }
    }
    let mut result = summarize("path-length census constant on its support", failures, pairs.len());
    if result.passed {
        let sample: Vec<String> = results
            .iter()
            .filter(|(c, f, _)| *c <= 3 && *f <= 3)
            .filter_map(|(c, f, s)| {
                s.as_ref()
                    .ok()
                    .and_then(|s| s.multiplicity)
                    .map(|m| format!("({c},{f})->{m}"))
            })
            .collect();
        result.detail = format!(
            "{}; multiplicity = c! everywhere: {equals_c_factorial}; = f! everywhere: {equals_f_factorial}; e.g. {}",
            result.detail,
            sample.join(" ")
        );
    }
    result
}

fn factorial(n: u32) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Runs every check.
pub fn run(formulas: &dyn Formulas, opts: &VerifyOptions) -> VerifyReport {
    VerifyReport {
        checks: vec![
            enumeration_check(formulas, opts),
            normalization_check(formulas, opts),
            pgf_check(formulas, opts),
            moments_check(formulas, opts),
            symmetry_check(formulas, opts),
            census_check(opts),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::binomial;
    use crate::error::Error;

    /// Closed forms with the lower binomial index of the single pmf shifted by one.
    struct ShiftedIndex;

    impl Formulas for ShiftedIndex {
        fn single_pmf(&self, c: u32, f: u32) -> Result<ExactPmf> {
            if f == 0 {
                return Err(Error::NoFaithful);
            }
            let (c, f) = (c as i64, f as i64);
            let norm = binomial(c + f, c);
            ExactPmf::new(
                1,
                (1..=c + 1)
                    .map(|i| BigRational::new(binomial(f + c - i, f), norm.clone()))
                    .collect(),
            )
        }
        fn total_pmf(&self, c: u32, f: u32) -> Result<ExactPmf> {
            ClosedForms.total_pmf(c, f)
        }
        fn single_moments(&self, c: u32, f: u32) -> Result<MomentSet> {
            ClosedForms.single_moments(c, f)
        }
        fn total_moments(&self, c: u32, f: u32) -> Result<MomentSet> {
            ClosedForms.total_moments(c, f)
        }
    }

    fn small() -> VerifyOptions {
        VerifyOptions {
            max_size: 2_000,
            max_param: 8,
        }
    }

    #[test]
    fn closed_forms_pass() {
        let report = run(&ClosedForms, &small());
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }

    #[test]
    fn mutant_fails() {
        let report = run(&ShiftedIndex, &small());
        assert!(!report.passed());
        assert!(!enumeration_check(&ShiftedIndex, &small()).passed);
    }

    #[test]
    fn pairs_include_all_small_villages() {
        let pairs = enumerable_pairs(100_000, 30);
        for n in 1..=8u32 {
            for f in 1..=n {
                assert!(pairs.contains(&(n - f, f)), "c={} f={f}", n - f);
            }
        }
        assert!(!pairs.contains(&(8, 1)));
    }

    #[test]
    fn census_reports_multiplicity() {
        let check = census_check(&small());
        assert!(check.passed, "{}", check.detail);
        assert!(check.detail.contains("multiplicity = c! everywhere: true"), "{}", check.detail);
    }
}
