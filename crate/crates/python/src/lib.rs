//! Python module `linprobe`: exact displacement distributions, moments and
//! simulations for linear probing. Integers come back as Python `int`,
//! rationals as `fractions.Fraction`.

use std::collections::BTreeMap;

use linprobe_core::polyalg::{Integer, Rational};
use linprobe_core::{checks, graphs, moments, parking, simulate};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Coefficients of `F_n(x)`, lowest degree first.
#[pyfunction]
fn parking_poly(n: usize) -> Vec<Integer> {
    parking::parking_poly(n).poly.into_coeffs()
}

/// Coefficients of the confined distribution `F_mn(x)`.
#[pyfunction]
fn confined_poly(m: usize, n: usize) -> PyResult<Vec<Integer>> {
    Ok(parking::confined_poly(m, n).map_err(value_error)?.poly.into_coeffs())
}

/// Coefficients of `D_mn(x)`; they sum to `m**n`.
#[pyfunction]
fn displacement_poly(m: usize, n: usize) -> PyResult<Vec<Integer>> {
    Ok(parking::displacement_poly(m, n)
        .map_err(value_error)?
        .poly
        .into_coeffs())
}

/// `{(edges, vertices): count}` of connected labelled graphs with at most
/// `max_vertices` vertices.
#[pyfunction]
fn graph_counts(max_vertices: usize) -> PyResult<BTreeMap<(usize, usize), Integer>> {
    let table = graphs::graph_counts(max_vertices).map_err(value_error)?;
    Ok(table.iter().map(|(&k, v)| (k, v.clone())).collect())
}

#[pyfunction]
fn q_function(r: usize, m: usize, n: usize) -> Rational {
    moments::q_function(r, m, n).value
}

#[pyfunction]
fn factorial_moment(j: usize, m: usize, n: usize) -> PyResult<Rational> {
    moments::factorial_moment_lagrange(j, m, n).map_err(value_error)
}

#[pyclass(module = "linprobe", frozen, get_all)]
struct MomentReport {
    m: usize,
    n: usize,
    mean_d: Rational,
    second_factorial: Rational,
    third_factorial: Option<Rational>,
    mean_d_squared: Rational,
    variance_d: Rational,
    mean_probes: Rational,
}

#[pymethods]
impl MomentReport {
    fn __repr__(&self) -> String {
        format!("MomentReport(m={}, n={}, mean_d={})", self.m, self.n, self.mean_d)
    }
}

#[pyfunction]
fn moment_report(m: usize, n: usize) -> PyResult<MomentReport> {
    let r = moments::moment_report(m, n).map_err(value_error)?;
    Ok(MomentReport {
        m: r.m,
        n: r.n,
        mean_d: r.mean_d,
        second_factorial: r.second_factorial,
        third_factorial: r.third_factorial,
        mean_d_squared: r.mean_d_squared,
        variance_d: r.variance_d,
        mean_probes: r.mean_probes,
    })
}

/// `(positions, total_displacement, confined)` for one hash sequence.
#[pyfunction]
fn lp_insert(m: usize, hashes: Vec<usize>) -> PyResult<(Vec<usize>, u64, bool)> {
    let seq = simulate::HashSequence::new(m, hashes).map_err(value_error)?;
    let out = simulate::lp_insert(&seq).map_err(value_error)?;
    Ok((out.positions, out.total_displacement, out.confined))
}

/// Histogram `{d: count}` over all `m**n` hash sequences.
#[pyfunction]
#[pyo3(signature = (m, n, confined=false))]
fn exhaustive_distribution(py: Python<'_>, m: usize, n: usize, confined: bool) -> PyResult<BTreeMap<u64, u64>> {
    let dist = py
        .detach(|| simulate::exhaustive_distribution(m, n, confined))
        .map_err(value_error)?;
    Ok(dist.histogram)
}

/// Histogram `{d: count}` from `trials` seeded random hash sequences.
#[pyfunction]
fn monte_carlo(py: Python<'_>, m: usize, n: usize, trials: u64, seed: u64) -> PyResult<BTreeMap<u64, u64>> {
    let dist = py
        .detach(|| simulate::monte_carlo(m, n, trials, seed))
        .map_err(value_error)?;
    Ok(dist.histogram)
}

/// Runs the cross-route identity suite; raises if any check fails.
#[pyfunction]
fn selfcheck(py: Python<'_>) -> PyResult<Vec<String>> {
    let outcomes = py.detach(checks::run_all);
    let failed: Vec<String> = outcomes
        .iter()
        .filter_map(|o| o.failure.as_ref().map(|f| format!("{}: {f}", o.name)))
        .collect();
    if !failed.is_empty() {
        return Err(PyRuntimeError::new_err(failed.join("; ")));
    }
    Ok(outcomes.into_iter().map(|o| o.name.to_string()).collect())
}

#[pymodule]
fn linprobe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<MomentReport>()?;
    m.add_function(wrap_pyfunction!(parking_poly, m)?)?;
    m.add_function(wrap_pyfunction!(confined_poly, m)?)?;
    m.add_function(wrap_pyfunction!(displacement_poly, m)?)?;
    m.add_function(wrap_pyfunction!(graph_counts, m)?)?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(factorial_moment, m)?)?;
    m.add_function(wrap_pyfunction!(moment_report, m)?)?;
    m.add_function(wrap_pyfunction!(lp_insert, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(selfcheck, m)?)?;
    Ok(())
}
