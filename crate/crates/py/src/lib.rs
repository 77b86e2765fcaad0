//! Python bindings. Exact values cross as `int` and `fractions.Fraction`.

use std::collections::{BTreeMap, BTreeSet};

use involution::chase::{self, ChaseTrace};
use involution::exact::{self, ExactPmf, MomentSet};
use involution::montecarlo::{self, Histogram, Statistic};
use involution::verify::{self, ClosedForms, VerifyOptions};
use involution::{scenario, story};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(involution_py, InvolutionError, PyException);

fn to_py(e: involution::Error) -> PyErr {
    InvolutionError::new_err(format!("{}: {e}", e.code()))
}

fn statistic(law: &str) -> PyResult<Statistic> {
    match law {
        "single" => Ok(Statistic::Single),
        "total" => Ok(Statistic::Total),
        other => Err(PyValueError::new_err(format!(
            "law must be 'single' or 'total', got {other:?}"
        ))),
    }
}

/// An injective mistress assignment; indices are 1-based.
#[pyclass(name = "Scenario", frozen, from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: involution::Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    fn new(c: i64, f: i64, mistress: Vec<i64>) -> PyResult<Self> {
        scenario::validate(c, f, &mistress)
            .map(|inner| PyScenario { inner })
            .map_err(to_py)
    }

    /// Uniform random scenario, reproducible from the seed.
    #[staticmethod]
    #[pyo3(signature = (c, f, seed = 0))]
    fn random(c: u32, f: u32, seed: u64) -> Self {
        PyScenario {
            inner: scenario::random_scenario(c, f, seed),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| PyScenario { inner })
            .map_err(|e| InvolutionError::new_err(format!("invalid_input: {e}")))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("scenario serializes")
    }

    #[getter]
    fn c(&self) -> u32 {
        self.inner.c()
    }

    #[getter]
    fn f(&self) -> u32 {
        self.inner.f()
    }

    #[getter]
    fn mistress(&self) -> Vec<u32> {
        self.inner.mistress().to_vec()
    }

    fn lover_of(&self, w: u32) -> PyResult<Option<u32>> {
        self.inner.lover_of(w).map_err(to_py)
    }

    /// Chase of faithful Mr. `m` (default Mr. c+1).
    #[pyo3(signature = (m = None))]
    fn chase(&self, m: Option<u32>) -> PyResult<PyChaseTrace> {
        chase::chase_one(&self.inner, m.unwrap_or(self.inner.c() + 1))
            .map(|inner| PyChaseTrace { inner })
            .map_err(to_py)
    }

    /// `{man: (woman, requests)}` for every faithful man.
    fn match_all(&self) -> PyResult<BTreeMap<u32, (u32, usize)>> {
        let m = chase::match_all(&self.inner).map_err(to_py)?;
        Ok(m.pairs
            .into_iter()
            .map(|(man, p)| (man, (p.woman, p.requests)))
            .collect())
    }

    fn story(&self) -> String {
        story::tell_story(&self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(c={}, f={}, mistress={:?})",
            self.inner.c(),
            self.inner.f(),
            self.inner.mistress()
        )
    }
}

#[pyclass(name = "ChaseTrace", frozen)]
struct PyChaseTrace {
    inner: ChaseTrace,
}

#[pymethods]
impl PyChaseTrace {
    #[getter]
    fn man(&self) -> u32 {
        self.inner.man
    }

    #[getter]
    fn asked(&self) -> Vec<u32> {
        self.inner.asked.clone()
    }

    #[getter]
    fn requests(&self) -> usize {
        self.inner.requests()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("trace serializes")
    }

    fn __repr__(&self) -> String {
        format!("ChaseTrace(man={}, asked={:?})", self.inner.man, self.inner.asked)
    }
}

/// Exact pmf with `fractions.Fraction` masses.
#[pyclass(name = "Pmf", frozen, from_py_object)]
#[derive(Clone)]
struct PyPmf {
    inner: ExactPmf,
}

#[pymethods]
impl PyPmf {
    #[getter]
    fn offset(&self) -> i64 {
        self.inner.offset()
    }

    #[getter]
    fn masses(&self) -> Vec<BigRational> {
        self.inner.masses().to_vec()
    }

    fn to_dict(&self) -> BTreeMap<i64, BigRational> {
        self.inner.iter().map(|(i, q)| (i, q.clone())).collect()
    }

    fn mean(&self) -> BigRational {
        self.inner.mean()
    }

    fn central_moment(&self, r: u32) -> BigRational {
        exact::central_moment(&self.inner, r)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("pmf serializes")
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| PyPmf { inner })
            .map_err(|e| InvolutionError::new_err(format!("invalid_input: {e}")))
    }

    fn __repr__(&self) -> String {
        format!(
            "Pmf(offset={}, masses=[{}])",
            self.inner.offset(),
            self.inner
                .masses()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

#[pyclass(name = "Histogram", frozen, from_py_object)]
#[derive(Clone)]
struct PyHistogram {
    inner: Histogram,
}

#[pymethods]
impl PyHistogram {
    #[new]
    #[pyo3(signature = (counts, seed = 0))]
    fn new(counts: BTreeMap<i64, u64>, seed: u64) -> PyResult<Self> {
        let trials = counts.values().sum();
        if trials == 0 {
            return Err(PyValueError::new_err("histogram needs at least one trial"));
        }
        Ok(PyHistogram {
            inner: Histogram {
                trials,
                seed,
                counts,
            },
        })
    }

    #[getter]
    fn trials(&self) -> u64 {
        self.inner.trials
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn counts(&self) -> BTreeMap<i64, u64> {
        self.inner.counts.clone()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("histogram serializes")
    }

    fn __repr__(&self) -> String {
        format!("Histogram(trials={}, counts={:?})", self.inner.trials, self.inner.counts)
    }
}

fn moments_dict(m: MomentSet) -> BTreeMap<&'static str, BigRational> {
    BTreeMap::from([
        ("mean", m.mean),
        ("variance", m.variance),
        ("mu3", m.mu3),
        ("mu4", m.mu4),
    ])
}

#[pyfunction]
fn scenario_count(c: u32, f: u32) -> BigUint {
    scenario::scenario_count(c, f)
}

#[pyfunction]
fn binomial(n: i64, k: i64) -> BigInt {
    involution::binomial(n, k)
}

#[pyfunction]
fn enumerate_scenarios(c: u32, f: u32) -> PyResult<Vec<PyScenario>> {
    if scenario::scenario_count(c, f) > BigUint::from(exact::CENSUS_LIMIT) {
        return Err(InvolutionError::new_err(format!(
            "too_large: more than {} scenarios",
            exact::CENSUS_LIMIT
        )));
    }
    Ok(scenario::enumerate_scenarios(c, f)
        .map(|inner| PyScenario { inner })
        .collect())
}

#[pyfunction]
fn single_pmf(c: u32, f: u32) -> PyResult<PyPmf> {
    exact::single_pmf(c, f).map(|inner| PyPmf { inner }).map_err(to_py)
}

#[pyfunction]
fn total_pmf(c: u32, f: u32) -> PyResult<PyPmf> {
    exact::total_pmf(c, f).map(|inner| PyPmf { inner }).map_err(to_py)
}

#[pyfunction]
fn single_moments(c: u32, f: u32) -> PyResult<BTreeMap<&'static str, BigRational>> {
    exact::single_moments_closed(c, f).map(moments_dict).map_err(to_py)
}

#[pyfunction]
fn total_moments(c: u32, f: u32) -> PyResult<BTreeMap<&'static str, BigRational>> {
    exact::total_moments_closed(c, f).map(moments_dict).map_err(to_py)
}

/// Coefficients of the generating polynomial, by degree.
#[pyfunction]
fn pgf(law: &str, c: u32, f: u32) -> PyResult<Vec<BigRational>> {
    let poly = match statistic(law)? {
        Statistic::Single => exact::pgf_single(c, f),
        Statistic::Total => exact::pgf_total(c, f),
    }
    .map_err(to_py)?;
    Ok(poly.coefficients().to_vec())
}

#[pyfunction]
fn geometric_limit_distance(k: u32, f: u32) -> PyResult<BigRational> {
    exact::geometric_limit_distance(k, f).map_err(to_py)
}

#[pyfunction]
fn joint_pathlength_census(c: u32, f: u32) -> PyResult<BTreeMap<Vec<u32>, u64>> {
    exact::joint_pathlength_census(c, f).map_err(to_py)
}

/// `{a: (image, steps)}` for the involution-principle bijection.
#[pyfunction]
fn induced_bijection(
    size_x: usize,
    phi: Vec<usize>,
    psi: BTreeMap<usize, usize>,
    a_members: BTreeSet<usize>,
) -> PyResult<BTreeMap<usize, (usize, usize)>> {
    let out = chase::induced_bijection(size_x, &phi, &psi, &a_members).map_err(to_py)?;
    Ok(out.into_iter().map(|(a, c)| (a, (c.image, c.steps))).collect())
}

#[pyfunction]
#[pyo3(signature = (law, c, f, trials, seed = 0, threads = None))]
fn simulate(
    py: Python<'_>,
    law: &str,
    c: u32,
    f: u32,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<PyHistogram> {
    let statistic = statistic(law)?;
    py.detach(|| montecarlo::simulate(statistic, c, f, trials, seed, threads))
        .map(|inner| PyHistogram { inner })
        .map_err(to_py)
}

#[pyfunction]
fn tv_distance(histogram: &PyHistogram, pmf: &PyPmf) -> PyResult<f64> {
    montecarlo::tv_distance(&histogram.inner, &pmf.inner).map_err(to_py)
}

/// `(statistic, dof)`.
#[pyfunction]
fn chi_squared(histogram: &PyHistogram, pmf: &PyPmf) -> PyResult<(f64, usize)> {
    montecarlo::chi_squared(&histogram.inner, &pmf.inner)
        .map(|c| (c.statistic, c.dof))
        .map_err(to_py)
}

/// Runs the cross-check suite; returns `[(name, passed, detail)]`.
#[pyfunction]
#[pyo3(signature = (max_size = 100_000, max_param = 30))]
fn run_verify(py: Python<'_>, max_size: u64, max_param: u32) -> Vec<(String, bool, String)> {
    let opts = VerifyOptions {
        max_size,
        max_param,
    };
    py.detach(|| verify::run(&ClosedForms, &opts))
        .checks
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect()
}

#[pymodule]
fn involution_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("InvolutionError", m.py().get_type::<InvolutionError>())?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyChaseTrace>()?;
    m.add_class::<PyPmf>()?;
    m.add_class::<PyHistogram>()?;
    m.add_function(wrap_pyfunction!(scenario_count, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(single_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(total_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(single_moments, m)?)?;
    m.add_function(wrap_pyfunction!(total_moments, m)?)?;
    m.add_function(wrap_pyfunction!(pgf, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_limit_distance, m)?)?;
    m.add_function(wrap_pyfunction!(joint_pathlength_census, m)?)?;
    m.add_function(wrap_pyfunction!(induced_bijection, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(tv_distance, m)?)?;
    m.add_function(wrap_pyfunction!(chi_squared, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip() {
        Python::attach(|py| {
            let module = PyModule::new(py, "involution_py").unwrap();
            involution_py(&module).unwrap();
            let s = module
                .getattr("Scenario")
                .unwrap()
                .call1((3, 1, vec![2, 4, 3]))
                .unwrap();
            let trace = s.call_method0("chase").unwrap();
            let asked: Vec<u32> = trace.getattr("asked").unwrap().extract().unwrap();
            assert_eq!(asked, vec![4, 2, 1]);

            let bad = module.getattr("Scenario").unwrap().call1((2, 1, vec![3, 3]));
            let err = bad.unwrap_err();
            assert!(err.is_instance_of::<InvolutionError>(py));
            assert!(err.to_string().contains("non_injective"));

            let mean: BigRational = module
                .getattr("single_pmf")
                .unwrap()
                .call1((1, 1))
                .unwrap()
                .call_method0("mean")
                .unwrap()
                .extract()
                .unwrap();
            assert_eq!(mean, BigRational::new(3.into(), 2.into()));
        });
    }
}
