//! `involution` command line. JSON output is the stable interface; text
//! output is for people.
//!
//! Exit codes: 0 success, 1 domain error (one `error: <code>: <message>`
//! line on stderr), 2 usage error.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use involution::exact::{self, ExactPmf, MomentSet};
use involution::montecarlo::{self, ChiSquared, Histogram, QuantileLevel, Statistic};
use involution::rational::{to_f64, RationalJson};
use involution::verify::{self, ClosedForms, VerifyOptions};
use involution::{chase, scenario, story, Error, Scenario};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "involution", version, about = "Chase faithful men to faithful women, exactly and by simulation")]
pub struct Cli {
    /// Master seed for random generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit human-readable text (default).
    #[arg(long, global = true)]
    text: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Law {
    Single,
    Total,
}

impl From<Law> for Statistic {
    fn from(law: Law) -> Self {
        match law {
            Law::Single => Statistic::Single,
            Law::Total => Statistic::Total,
        }
    }
}

#[derive(Debug, Args)]
struct Sizes {
    /// Number of cheating couples.
    #[arg(short = 'c')]
    c: u32,
    /// Number of faithful couples.
    #[arg(short = 'f')]
    f: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a uniform random scenario.
    Gen(Sizes),
    /// Number of scenarios, (c+f)!/f!.
    Count(Sizes),
    /// Chase one faithful man (default Mr. c+1), or all with --all.
    Chase {
        /// Scenario JSON file, or - for standard input.
        #[arg(long)]
        scenario: String,
        #[arg(short = 'm', conflicts_with = "all")]
        man: Option<u32>,
        #[arg(long)]
        all: bool,
    },
    /// Tell the scenario as a story.
    Story {
        #[arg(long)]
        scenario: String,
    },
    /// Exact pmf.
    Pmf {
        law: Law,
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Closed-form moments, or one numeric central moment with --order.
    Moments {
        law: Law,
        #[command(flatten)]
        sizes: Sizes,
        #[arg(long)]
        order: Option<u32>,
    },
    /// Probability generating function by series coefficient extraction.
    Pgf {
        law: Law,
        #[command(flatten)]
        sizes: Sizes,
    },
    /// Monte Carlo histogram.
    Simulate {
        law: Law,
        #[command(flatten)]
        sizes: Sizes,
        #[arg(short = 'n')]
        trials: u64,
        /// Append TV distance and chi-squared against the exact pmf.
        #[arg(long)]
        compare: bool,
    },
    /// Total-variation distance from the geometric limit at c = k f.
    Limit {
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'f')]
        f: u32,
    },
    /// Run the exhaustive-oracle and cross-check suite.
    Verify {
        #[arg(long, default_value_t = 100_000)]
        max_size: u64,
    },
}

/// Command failures, mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Domain(Error),
    Input(String),
    Usage(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

struct Output<'a> {
    json: bool,
    sink: &'a mut dyn Write,
}

impl Output<'_> {
    fn json<T: Serialize>(&mut self, value: &T) -> CmdResult {
        let text = serde_json::to_string(value).map_err(|e| Failure::Input(e.to_string()))?;
        writeln!(self.sink, "{text}")?;
        Ok(())
    }

    fn line(&mut self, text: impl AsRef<str>) -> CmdResult {
        writeln!(self.sink, "{}", text.as_ref())?;
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    c: i64,
    f: i64,
    mistress: Vec<i64>,
}

fn read_scenario(source: &str, stdin: &mut dyn Read) -> Result<Scenario, Failure> {
    let mut text = String::new();
    if source == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        File::open(source)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Failure::Input(format!("{source}: {e}")))?;
    }
    let raw: RawScenario =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("scenario JSON: {e}")))?;
    Ok(scenario::validate(raw.c, raw.f, &raw.mistress)?)
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("GM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("GM_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}

fn rational_text(q: &BigRational) -> String {
    format!("{q} (~{:.6})", to_f64(q))
}

fn print_pmf(out: &mut Output, p: &ExactPmf) -> CmdResult {
    if out.json {
        return out.json(p);
    }
    out.line(format!("{:>6}  {}", "i", "P(i)"))?;
    for (i, q) in p.iter() {
        out.line(format!("{i:>6}  {}", rational_text(q)))?;
    }
    Ok(())
}

fn print_moments(out: &mut Output, m: &MomentSet) -> CmdResult {
    if out.json {
        return out.json(m);
    }
    out.line(format!("mean      {}", rational_text(&m.mean)))?;
    out.line(format!("variance  {}", rational_text(&m.variance)))?;
    out.line(format!("mu3       {}", rational_text(&m.mu3)))?;
    out.line(format!("mu4       {}", rational_text(&m.mu4)))
}

#[derive(Serialize)]
struct ChiSquaredReport {
    #[serde(flatten)]
    chi: ChiSquared,
    quantile_95: Option<f64>,
    quantile_99: Option<f64>,
    quantile_999: Option<f64>,
}

#[derive(Serialize)]
struct Comparison {
    #[serde(flatten)]
    histogram: Histogram,
    tv_distance: f64,
    chi_squared: Option<ChiSquaredReport>,
}

fn simulate(out: &mut Output, law: Law, sizes: &Sizes, trials: u64, seed: u64, compare: bool) -> CmdResult {
    let threads = threads_from_env()?;
    let histogram = montecarlo::simulate(law.into(), sizes.c, sizes.f, trials, seed, threads)?;
    if !compare {
        if out.json {
            return out.json(&histogram);
        }
        out.line(format!("{:>6}  {:>10}  {}", "value", "count", "frequency"))?;
        for (v, n) in &histogram.counts {
            out.line(format!("{v:>6}  {n:>10}  {:.6}", *n as f64 / trials as f64))?;
        }
        return Ok(());
    }
    let exact = match law {
        Law::Single => exact::single_pmf(sizes.c, sizes.f)?,
        Law::Total => exact::total_pmf(sizes.c, sizes.f)?,
    };
    let tv_distance = montecarlo::tv_distance(&histogram, &exact)?;
    let chi_squared = match montecarlo::chi_squared(&histogram, &exact) {
        Ok(chi) => Some(ChiSquaredReport {
            quantile_95: montecarlo::chi_squared_quantile(chi.dof, QuantileLevel::P95),
            quantile_99: montecarlo::chi_squared_quantile(chi.dof, QuantileLevel::P99),
            quantile_999: montecarlo::chi_squared_quantile(chi.dof, QuantileLevel::P999),
            chi,
        }),
        Err(Error::DegenerateSupport) => None,
        Err(e) => return Err(e.into()),
    };
    if out.json {
        return out.json(&Comparison {
            histogram,
            tv_distance,
            chi_squared,
        });
    }
    out.line(format!("{:>6}  {:>10}  {:>10}  {:>10}", "value", "count", "frequency", "exact"))?;
    for (v, q) in exact.iter() {
        let n = histogram.count(v);
        out.line(format!(
            "{v:>6}  {n:>10}  {:>10.6}  {:>10.6}",
            n as f64 / trials as f64,
            to_f64(q)
        ))?;
    }
    out.line(format!("tv distance  {tv_distance:.6}"))?;
    match chi_squared {
        Some(r) => out.line(format!(
            "chi-squared  {:.4} on {} dof (0.95: {}, 0.99: {}, 0.999: {})",
            r.chi.statistic,
            r.chi.dof,
            fmt_quantile(r.quantile_95),
            fmt_quantile(r.quantile_99),
            fmt_quantile(r.quantile_999)
        )),
        None => out.line("chi-squared  not applicable (single cell after merging)"),
    }
}

fn fmt_quantile(q: Option<f64>) -> String {
    q.map_or_else(|| "n/a".into(), |q| format!("{q:.4}"))
}

fn run_verify(out: &mut Output, max_size: u64) -> CmdResult {
    let opts = VerifyOptions {
        max_size,
        ..VerifyOptions::default()
    };
    let report = match threads_from_env()? {
        None => verify::run(&ClosedForms, &opts),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(e.to_string()))?
            .install(|| verify::run(&ClosedForms, &opts)),
    };
    if out.json {
        out.json(&report)?;
    } else {
        for check in &report.checks {
            out.line(format!(
                "{} {}: {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.detail
            ))?;
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut Output) -> CmdResult {
    match &cli.command {
        Command::Gen(s) => out.json(&scenario::random_scenario(s.c, s.f, cli.seed)),
        Command::Count(s) => {
            let count = scenario::scenario_count(s.c, s.f);
            if out.json {
                out.json(&json!({"c": s.c, "f": s.f, "count": count.to_string()}))
            } else {
                out.line(count.to_string())
            }
        }
        Command::Chase { scenario, man, all } => {
            let s = read_scenario(scenario, stdin)?;
            if *all {
                let m = chase::match_all(&s)?;
                if out.json {
                    return out.json(&m);
                }
                for (man, p) in &m.pairs {
                    out.line(format!("Mr. {man} -> Mrs. {} ({} requests)", p.woman, p.requests))?;
                }
                return out.line(format!("total requests {}", m.total_requests()));
            }
            let trace = chase::chase_one(&s, man.unwrap_or(s.c() + 1))?;
            if out.json {
                return out.json(&trace);
            }
            let path: Vec<String> = trace.asked.iter().map(|w| format!("Mrs. {w}")).collect();
            out.line(format!(
                "Mr. {} asks {} ({} requests)",
                trace.man,
                path.join(" -> "),
                trace.requests()
            ))
        }
        Command::Story { scenario } => {
            let s = read_scenario(scenario, stdin)?;
            write!(out.sink, "{}", story::tell_story(&s))?;
            Ok(())
        }
        Command::Pmf { law, sizes } => {
            let p = match law {
                Law::Single => exact::single_pmf(sizes.c, sizes.f)?,
                Law::Total => exact::total_pmf(sizes.c, sizes.f)?,
            };
            print_pmf(out, &p)
        }
        Command::Moments { law, sizes, order } => {
            if let Some(r) = order {
                let p = match law {
                    Law::Single => exact::single_pmf(sizes.c, sizes.f)?,
                    Law::Total => exact::total_pmf(sizes.c, sizes.f)?,
                };
                let m = exact::central_moment(&p, *r);
                return if out.json {
                    out.json(&json!({"order": r, "central_moment": RationalJson::from(&m)}))
                } else {
                    out.line(format!("mu{r}  {}", rational_text(&m)))
                };
            }
            let m = match law {
                Law::Single => exact::single_moments_closed(sizes.c, sizes.f)?,
                Law::Total => exact::total_moments_closed(sizes.c, sizes.f)?,
            };
            print_moments(out, &m)
        }
        Command::Pgf { law, sizes } => {
            let poly = match law {
                Law::Single => exact::pgf_single(sizes.c, sizes.f)?,
                Law::Total => exact::pgf_total(sizes.c, sizes.f)?,
            };
            if out.json {
                let coefficients: Vec<RationalJson> =
                    poly.coefficients().iter().map(RationalJson::from).collect();
                return out.json(&coefficients);
            }
            for (i, q) in poly.coefficients().iter().enumerate() {
                out.line(format!("x^{i:<4} {}", rational_text(q)))?;
            }
            Ok(())
        }
        Command::Simulate {
            law,
            sizes,
            trials,
            compare,
        } => simulate(out, *law, sizes, *trials, cli.seed, *compare),
        Command::Limit { k, f } => {
            let d = exact::geometric_limit_distance(*k, *f)?;
            if out.json {
                out.json(&json!({
                    "k": k,
                    "f": f,
                    "distance": RationalJson::from(&d),
                    "approx": to_f64(&d),
                }))
            } else {
                out.line(format!("tv distance to Ge(1/{}) at c={}, f={f}: {:.8}", k + 1, k * f, to_f64(&d)))
            }
        }
        Command::Verify { max_size } => run_verify(out, *max_size),
    }
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };

    let mut buffer = Vec::new();
    let result = {
        let mut out = Output {
            json: cli.json,
            sink: &mut buffer,
        };
        dispatch(&cli, stdin, &mut out)
    };
    // verify prints its report even when it fails
    if result.is_ok() || matches!(result, Err(Failure::Verify)) {
        let written = match &cli.out {
            Some(path) => File::create(path).and_then(|mut f| f.write_all(&buffer)),
            None => stdout.write_all(&buffer),
        };
        if let Err(e) = written {
            let _ = writeln!(stderr, "error: io: {e}");
            return 1;
        }
    }
    match result {
        Ok(()) => 0,
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.code());
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: invalid_input: {}", msg.replace('\n', " "));
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: usage: {msg}");
            2
        }
        Err(Failure::Verify) => {
            let _ = writeln!(stderr, "error: verify_failed: at least one check failed");
            1
        }
    }
}
