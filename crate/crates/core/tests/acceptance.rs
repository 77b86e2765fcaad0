//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use involution::chase::{chase_one, match_all};
use involution::exact::{geometric_limit_distance, single_moments_closed, single_pmf, total_pmf};
use involution::montecarlo::{simulate_single, simulate_total, tv_distance};
use involution::rational::to_f64;
use involution::scenario::{random_scenario, validate};
use involution::story::{asked_in_story, tell_story};
use involution::verify::{self, ClosedForms, VerifyOptions};
use num_bigint::BigInt;
use num_rational::BigRational;

const GOLDEN_STORY: &str = include_str!("../../../stories/three_cheaters.txt");

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Exhaustive enumeration reproduces both pmfs exactly.
fn oracle_equivalence() -> Outcome {
    let check = verify::enumeration_check(&ClosedForms, &VerifyOptions::default());
    outcome(check.passed, check.detail)
}

/// PGF coefficients and closed-form moments agree with the pmfs for c, f <= 30.
fn formula_agreement() -> Outcome {
    let opts = VerifyOptions::default();
    let checks = [
        verify::normalization_check(&ClosedForms, &opts),
        verify::pgf_check(&ClosedForms, &opts),
        verify::moments_check(&ClosedForms, &opts),
        verify::symmetry_check(&ClosedForms, &opts),
    ];
    let passed = checks.iter().all(|c| c.passed);
    let detail = checks
        .iter()
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join(" | ");
    outcome(passed, detail)
}

/// The (3, 1, [2,4,3]) story is byte-identical to the golden file.
fn sample_story() -> Outcome {
    let s = validate(3, 1, &[2, 4, 3]).unwrap();
    let story = tell_story(&s);
    let trace = chase_one(&s, 4).unwrap();
    let passed = story == GOLDEN_STORY
        && asked_in_story(&story) == vec![vec![4, 2, 1]]
        && trace.requests() == 3
        && story.contains("So Mr. 4 goes to Church with Mrs. 1.");
    outcome(passed, format!("{} bytes, asked {:?}", story.len(), trace.asked))
}

/// 10^4 random villages at (50, 10): bijections, <= 51 requests, totals in [10, 60].
fn bijection_property() -> Outcome {
    let (c, f) = (50u32, 10u32);
    let mut max_requests = 0;
    let mut totals = (usize::MAX, 0);
    for seed in 0..10_000u64 {
        let s = random_scenario(c, f, seed);
        let m = match_all(&s).unwrap();
        let women: BTreeSet<u32> = m.pairs.values().map(|p| p.woman).collect();
        let faithful: BTreeSet<u32> = s.faithful_women().collect();
        if women != faithful || m.pairs.len() != f as usize {
            return outcome(false, format!("seed {seed}: not a bijection onto faithful women"));
        }
        max_requests = max_requests.max(m.pairs.values().map(|p| p.requests).max().unwrap());
        let total = m.total_requests();
        totals = (totals.0.min(total), totals.1.max(total));
    }
    let passed = max_requests <= (c + 1) as usize
        && totals.0 >= f as usize
        && totals.1 <= (c + f) as usize;
    outcome(
        passed,
        format!("max requests {max_requests}, totals in [{}, {}]", totals.0, totals.1),
    )
}

/// Monte Carlo at (10, 10), 10^5 trials, 3 seeds: TV < 0.01 for both laws.
fn monte_carlo() -> Outcome {
    let (c, f, trials) = (10, 10, 100_000);
    let single = single_pmf(c, f).unwrap();
    let total = total_pmf(c, f).unwrap();
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for seed in [1u64, 2, 3] {
        let tv_s = tv_distance(&simulate_single(c, f, trials, seed).unwrap(), &single).unwrap();
        let tv_t = tv_distance(&simulate_total(c, f, trials, seed).unwrap(), &total).unwrap();
        worst = worst.max(tv_s).max(tv_t);
        lines.push(format!("seed {seed}: single {tv_s:.4}, total {tv_t:.4}"));
    }
    outcome(worst < 0.01, lines.join("; "))
}

/// Distance to Ge(1/(k+1)) strictly decreases over f; below 0.02 at k=1, f=80.
fn geometric_limit() -> Outcome {
    let fs = [5u32, 10, 20, 40, 80];
    let mut passed = true;
    let mut lines = Vec::new();
    for k in [1u32, 2] {
        let d: Vec<BigRational> = fs.iter().map(|&f| geometric_limit_distance(k, f).unwrap()).collect();
        passed &= d.windows(2).all(|w| w[1] < w[0]);
        lines.push(format!(
            "k={k}: {}",
            d.iter().map(|q| format!("{:.5}", to_f64(q))).collect::<Vec<_>>().join(" > ")
        ));
    }
    let d80 = geometric_limit_distance(1, 80).unwrap();
    passed &= to_f64(&d80) < 0.02;
    outcome(passed, lines.join("; "))
}

/// Mean at (1000, 10) is exactly 1011/11 and within 2% of c/f.
fn mean_ratio() -> Outcome {
    let mean = single_moments_closed(1000, 10).unwrap().mean;
    let exact = mean == BigRational::new(BigInt::from(1011), BigInt::from(11));
    let ratio = 1000.0 / 10.0;
    let rel = (to_f64(&mean) - ratio).abs() / ratio;
    outcome(
        exact && rel < 0.02,
        format!("mean = {mean} (exact match: {exact}), |mean - c/f|/(c/f) = {rel:.4} (needs < 0.02)"),
    )
}

/// Census support and constant multiplicity at every enumerable (c, f).
fn census_constancy() -> Outcome {
    let check = verify::census_check(&VerifyOptions::default());
    outcome(check.passed, check.detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 oracle equivalence", oracle_equivalence, Duration::from_secs(120)),
        ("2 formula triple-agreement", formula_agreement, Duration::from_secs(60)),
        ("3 sample story", sample_story, Duration::from_secs(5)),
        ("4 bijection property", bijection_property, Duration::from_secs(10)),
        ("5 Monte Carlo confirmation", monte_carlo, Duration::from_secs(30)),
        ("6 geometric limit", geometric_limit, Duration::from_secs(30)),
        ("7 mean ratio", mean_ratio, Duration::from_secs(5)),
        ("8 census constancy", census_constancy, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = result.passed && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "[{}] AC{name} ({:.2}s{}) {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { String::new() } else { format!(", over {}s budget", budget.as_secs()) },
            result.detail
        );
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
