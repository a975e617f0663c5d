use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use chromstat::coloring::{self, ClassSpec, Composition};
use chromstat::exact::Rational;
use chromstat::experiments;
use chromstat::graph;
use chromstat::moments;
use chromstat::oracle;
use chromstat::randgraph::{self, ModelTemplate};
use chromstat::seed;
use chromstat::symfun::{self, IntVector};

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn composition(classes: Vec<usize>) -> PyResult<Composition> {
    Composition::new(classes).map_err(value_error)
}

fn int_vector(values: Vec<BigInt>) -> PyResult<IntVector> {
    IntVector::new(values).map_err(value_error)
}

/// Simple undirected graph on vertices 0..n.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: graph::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = graph::Graph::new(n, edges).map_err(value_error)?;
        Ok(Graph { inner })
    }

    /// `path:8`, `star:8`, `cycle:8`, `complete:5`, `circulant:12:4`,
    /// `threshold:IDID`, or an edge-list file.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        let inner = experiments::parse_graph(spec).map_err(value_error)?;
        Ok(Graph { inner })
    }

    /// One draw from a random model such as `gnp:n=100,p=0.1`.
    #[staticmethod]
    fn random(model: &str, seed: u64) -> PyResult<Self> {
        let spec = ModelTemplate::parse(model)
            .and_then(|t| t.spec())
            .map_err(value_error)?;
        let sample = randgraph::generate(&spec, &mut seed::stream(seed, &[])).map_err(value_error)?;
        Ok(Graph { inner: sample.graph })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = graph::Graph::load_edge_list(path).map_err(value_error)?;
        Ok(Graph { inner })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save_edge_list(path).map_err(value_error)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees().to_vec()
    }

    /// Σ₂, the sum of squared degrees.
    fn sigma2(&self) -> u128 {
        self.inner.stats().sigma2
    }

    fn zeta_squared(&self) -> PyResult<Rational> {
        self.inner.zeta_squared().map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// Exact moment report as a dict of ints and Fractions.
#[pyfunction]
fn moment_report<'py>(py: Python<'py>, graph: &Graph, classes: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    let c = composition(classes)?;
    let r = moments::full_report(&graph.inner, &c).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("m", r.m)?;
    d.set_item("sigma2", r.sigma2)?;
    d.set_item("classes", r.classes.clone())?;
    d.set_item("per_color_mean", r.per_color_mean.clone())?;
    d.set_item("per_color_var", r.per_color_var.clone())?;
    d.set_item("mean_M", r.mean_M.clone())?;
    d.set_item("mean_L", r.mean_L.clone())?;
    d.set_item("var_common", r.var_common.clone())?;
    d.set_item("a_c", r.a_c.clone())?;
    d.set_item("b_c", r.b_c.clone())?;
    d.set_item("rho", r.rho.clone())?;
    d.set_item("zeta_sq", r.zeta_sq.clone())?;
    d.set_item("imbalance_sq", r.imbalance_sq.clone())?;
    d.set_item("normalized_var", r.normalized_var.clone())?;
    d.set_item("rho_zeta_product", r.rho_zeta_product())?;
    Ok(d)
}

/// Class sizes for n vertices from `50,30,20`, `balanced:3` or `ratios:3/4,1/4`.
#[pyfunction]
fn resolve_classes(spec: &str, n: usize) -> PyResult<Vec<usize>> {
    let spec: ClassSpec = spec.parse().map_err(value_error)?;
    Ok(spec.resolve(n).map_err(value_error)?.classes().to_vec())
}

#[pyfunction]
fn falling_factorial(a: u64, b: u64) -> BigInt {
    symfun::falling_factorial(a, b)
}

#[pyfunction]
fn elementary_symmetric(values: Vec<BigInt>, k: usize) -> PyResult<BigInt> {
    Ok(symfun::elementary_symmetric(&int_vector(values)?, k))
}

#[pyfunction]
fn power_sum(values: Vec<BigInt>, k: u32) -> PyResult<BigInt> {
    Ok(symfun::power_sum(&int_vector(values)?, k))
}

/// P(the j-th of disjoint vertex sets of the given sizes is colored iota[j]).
#[pyfunction]
fn prob_fixed_colors(classes: Vec<usize>, sizes: Vec<usize>, iota: Vec<usize>) -> PyResult<Rational> {
    coloring::prob_fixed_colors(&composition(classes)?, &sizes, &iota).map_err(value_error)
}

/// P(disjoint vertex sets of the given sizes are each monochromatic in distinct colors).
#[pyfunction]
fn prob_distinct_colors(classes: Vec<usize>, sizes: Vec<usize>) -> PyResult<Rational> {
    coloring::prob_distinct_colors(&composition(classes)?, &sizes).map_err(value_error)
}

/// Uniform c-coloring as a list of 0-based colors.
#[pyfunction]
fn sample_coloring(classes: Vec<usize>, seed: u64) -> PyResult<Vec<u16>> {
    let c = composition(classes)?;
    Ok(coloring::sample(&c, &mut seed::stream(seed, &[])).colors)
}

/// (per-color monochromatic counts, M, L) for one coloring.
#[pyfunction]
fn count_edges(graph: &Graph, colors: Vec<u16>) -> PyResult<(Vec<u64>, u64, u64)> {
    let s = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let counts = coloring::count(&graph.inner, s, &colors).map_err(value_error)?;
    Ok((counts.per_color, counts.mono, counts.bi))
}

/// Exact law of M by enumerating every coloring: {M: Fraction}.
#[pyfunction]
#[pyo3(signature = (graph, classes, budget = oracle::DEFAULT_BUDGET))]
fn exact_law(graph: &Graph, classes: Vec<usize>, budget: u64) -> PyResult<BTreeMap<u64, Rational>> {
    let d = oracle::enumerate(&graph.inner, &composition(classes)?, budget).map_err(value_error)?;
    Ok(d.mono_law())
}

/// Mean and variance of M by enumeration.
#[pyfunction]
#[pyo3(signature = (graph, classes, budget = oracle::DEFAULT_BUDGET))]
fn exact_moments(graph: &Graph, classes: Vec<usize>, budget: u64) -> PyResult<(Rational, Rational)> {
    let d = oracle::enumerate(&graph.inner, &composition(classes)?, budget).map_err(value_error)?;
    let mo = oracle::exact_moments(&d);
    Ok((mo.mean_m, mo.var_m))
}

/// Monte Carlo comparison against the exact mean and variance, as JSON.
#[pyfunction]
fn simulate(graph: &Graph, classes: Vec<usize>, trials: usize, seed: u64) -> PyResult<String> {
    let cmp = experiments::run_comparison(&graph.inner, &composition(classes)?, trials, seed).map_err(value_error)?;
    serde_json::to_string(&cmp).map_err(value_error)
}

/// E[Σ₂]/[E m]² in closed form for a model string such as `config:n=500,law=3:1`.
#[pyfunction]
fn ratio_closed_form(model: &str) -> PyResult<Option<f64>> {
    let spec = ModelTemplate::parse(model)
        .and_then(|t| t.spec())
        .map_err(value_error)?;
    Ok(randgraph::ratio_closed_form(&spec).map_err(value_error)?.ratio)
}

#[pymodule]
fn pychromstat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(moment_report, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_classes, m)?)?;
    m.add_function(wrap_pyfunction!(falling_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(elementary_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(prob_fixed_colors, m)?)?;
    m.add_function(wrap_pyfunction!(prob_distinct_colors, m)?)?;
    m.add_function(wrap_pyfunction!(sample_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(count_edges, m)?)?;
    m.add_function(wrap_pyfunction!(exact_law, m)?)?;
    m.add_function(wrap_pyfunction!(exact_moments, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(ratio_closed_form, m)?)?;
    Ok(())
}
