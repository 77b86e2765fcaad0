//! Seeded simulation of random villages and goodness-of-fit against the
//! exact laws.
//!
//! Trial `t` of a run with master seed `s` samples its scenario with
//! [`random_scenario`] under the seed [`trial_seed`]`(s, t)`, so a histogram
//! depends only on its inputs, never on how trials are spread over threads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chase::chase_requests;
use crate::error::{Error, Result};
use crate::exact::ExactPmf;
use crate::rational::to_f64;
use crate::scenario::random_scenario;

/// Which request count a simulation records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    /// Requests of Mr. c+1.
    Single,
    /// Sum of requests over all faithful men.
    Total,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub trials: u64,
    pub seed: u64,
    pub counts: BTreeMap<i64, u64>,
}

impl Histogram {
    pub fn count(&self, value: i64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn frequency(&self, value: i64) -> f64 {
        self.count(value) as f64 / self.trials as f64
    }
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial`: the SplitMix64 output at position `trial + 1` of
/// the stream whose state starts at `splitmix64_finalize(master)`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let state = splitmix64_finalize(master);
    splitmix64_finalize(state.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

fn run_trial(statistic: Statistic, c: u32, f: u32, seed: u64) -> usize {
    let s = random_scenario(c, f, seed);
    let requests = |m| {
        chase_requests(&s, m)
            .expect("sampled scenarios are valid")
            .1
    };
    match statistic {
        Statistic::Single => requests(c + 1),
        Statistic::Total => s.faithful_men().map(requests).sum(),
    }
}

fn tally(statistic: Statistic, c: u32, f: u32, trials: u64, seed: u64) -> Vec<u64> {
    let cells = (c + f) as usize + 1;
    (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; cells],
            |mut acc, t| {
                acc[run_trial(statistic, c, f, trial_seed(seed, t))] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; cells],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Runs `trials` independent villages. `threads` caps the worker count;
/// `None` uses rayon's global pool.
pub fn simulate(
    statistic: Statistic,
    c: u32,
    f: u32,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Histogram> {
    if f == 0 {
        return Err(Error::NoFaithful);
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let cells = match threads {
        None => tally(statistic, c, f, trials, seed),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| tally(statistic, c, f, trials, seed)),
    };
    let counts = cells
        .into_iter()
        .enumerate()
        .filter(|&(_, n)| n > 0)
        .map(|(v, n)| (v as i64, n))
        .collect();
    Ok(Histogram {
        trials,
        seed,
        counts,
    })
}

pub fn simulate_single(c: u32, f: u32, trials: u64, seed: u64) -> Result<Histogram> {
    simulate(Statistic::Single, c, f, trials, seed, None)
}

pub fn simulate_total(c: u32, f: u32, trials: u64, seed: u64) -> Result<Histogram> {
    simulate(Statistic::Total, c, f, trials, seed, None)
}

fn check_support(h: &Histogram, p: &ExactPmf) -> Result<()> {
    match h
        .counts
        .iter()
        .find(|&(&v, &n)| n > 0 && p.mass(v).is_zero())
    {
        Some((&v, _)) => Err(Error::SupportMismatch(v)),
        None => Ok(()),
    }
}

/// `(1/2) sum |count(i)/trials - P(i)|`, evaluated exactly then rounded.
pub fn tv_distance(h: &Histogram, p: &ExactPmf) -> Result<f64> {
    check_support(h, p)?;
    let trials = BigInt::from(h.trials);
    let l1: BigRational = p
        .iter()
        .map(|(v, q)| (BigRational::new(BigInt::from(h.count(v)), trials.clone()) - q).abs())
        .sum();
    Ok(to_f64(&l1) / 2.0)
}

/// Minimum expected count per chi-squared cell.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquared {
    pub statistic: f64,
    pub dof: usize,
    /// Inclusive value ranges of the merged cells.
    pub cells: Vec<(i64, i64)>,
}

/// Pearson's statistic over the pmf support. Support points are grouped left
/// to right until each group expects at least [`MIN_EXPECTED`] hits; a short
/// remainder at the right end joins the last group.
pub fn chi_squared(h: &Histogram, p: &ExactPmf) -> Result<ChiSquared> {
    check_support(h, p)?;
    let n = h.trials as f64;
    // (first, last, observed, expected)
    let mut cells: Vec<(i64, i64, f64, f64)> = Vec::new();
    let mut open: Option<(i64, i64, f64, f64)> = None;
    for (v, q) in p.iter() {
        let cell = open.get_or_insert((v, v, 0.0, 0.0));
        cell.1 = v;
        cell.2 += h.count(v) as f64;
        cell.3 += n * to_f64(q);
        if cell.3 >= MIN_EXPECTED {
            cells.extend(open.take());
        }
    }
    if let Some(rest) = open {
        match cells.last_mut() {
            Some(last) => {
                last.1 = rest.1;
                last.2 += rest.2;
                last.3 += rest.3;
            }
            None => cells.push(rest),
        }
    }
    if cells.len() < 2 {
        return Err(Error::DegenerateSupport);
    }
    let statistic = cells
        .iter()
        .map(|&(_, _, obs, exp)| (obs - exp).powi(2) / exp)
        .sum();
    Ok(ChiSquared {
        statistic,
        dof: cells.len() - 1,
        cells: cells.iter().map(|&(a, b, _, _)| (a, b)).collect(),
    })
}

/// Upper quantiles of the chi-squared law for 1..=64 degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantileLevel {
    P95,
    P99,
    P999,
}

impl QuantileLevel {
    pub fn probability(self) -> f64 {
        match self {
            QuantileLevel::P95 => 0.95,
            QuantileLevel::P99 => 0.99,
            QuantileLevel::P999 => 0.999,
        }
    }
}

#[rustfmt::skip]
const CHI2_Q95: [f64; 64] = [
    3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190, 18.3070,
    19.6751, 21.0261, 22.3620, 23.6848, 24.9958, 26.2962, 27.5871, 28.8693, 30.1435, 31.4104,
    32.6706, 33.9244, 35.1725, 36.4150, 37.6525, 38.8851, 40.1133, 41.3371, 42.5570, 43.7730,
    44.9853, 46.1943, 47.3999, 48.6024, 49.8018, 50.9985, 52.1923, 53.3835, 54.5722, 55.7585,
    56.9424, 58.1240, 59.3035, 60.4809, 61.6562, 62.8296, 64.0011, 65.1708, 66.3386, 67.5048,
    68.6693, 69.8322, 70.9935, 72.1532, 73.3115, 74.4683, 75.6237, 76.7778, 77.9305, 79.0819,
    80.2321, 81.3810, 82.5287, 83.6753,
];

#[rustfmt::skip]
const CHI2_Q99: [f64; 64] = [
    6.6349, 9.2103, 11.3449, 13.2767, 15.0863, 16.8119, 18.4753, 20.0902, 21.6660, 23.2093,
    24.7250, 26.2170, 27.6882, 29.1412, 30.5779, 31.9999, 33.4087, 34.8053, 36.1909, 37.5662,
    38.9322, 40.2894, 41.6384, 42.9798, 44.3141, 45.6417, 46.9629, 48.2782, 49.5879, 50.8922,
    52.1914, 53.4858, 54.7755, 56.0609, 57.3421, 58.6192, 59.8925, 61.1621, 62.4281, 63.6907,
    64.9501, 66.2062, 67.4593, 68.7095, 69.9568, 71.2014, 72.4433, 73.6826, 74.9195, 76.1539,
    77.3860, 78.6158, 79.8433, 81.0688, 82.2921, 83.5134, 84.7328, 85.9502, 87.1657, 88.3794,
    89.5913, 90.8015, 92.0100, 93.2169,
];

#[rustfmt::skip]
const CHI2_Q999: [f64; 64] = [
    10.8276, 13.8155, 16.2662, 18.4668, 20.5150, 22.4577, 24.3219, 26.1245, 27.8772, 29.5883,
    31.2641, 32.9095, 34.5282, 36.1233, 37.6973, 39.2524, 40.7902, 42.3124, 43.8202, 45.3147,
    46.7970, 48.2679, 49.7282, 51.1786, 52.6197, 54.0520, 55.4760, 56.8923, 58.3012, 59.7031,
    61.0983, 62.4872, 63.8701, 65.2472, 66.6188, 67.9852, 69.3465, 70.7029, 72.0547, 73.4020,
    74.7449, 76.0838, 77.4186, 78.7495, 80.0767, 81.4003, 82.7204, 84.0371, 85.3506, 86.6608,
    87.9680, 89.2722, 90.5734, 91.8718, 93.1675, 94.4605, 95.7510, 97.0388, 98.3242, 99.6072,
    100.8879, 102.1662, 103.4424, 104.7163,
];

/// Tabulated quantile, `None` outside 1..=64 degrees of freedom.
pub fn chi_squared_quantile(dof: usize, level: QuantileLevel) -> Option<f64> {
    let table = match level {
        QuantileLevel::P95 => &CHI2_Q95,
        QuantileLevel::P99 => &CHI2_Q99,
        QuantileLevel::P999 => &CHI2_Q999,
    };
    dof.checked_sub(1).and_then(|i| table.get(i)).copied()
}
