//! Python bindings: clustering and selection instances, solvers, distances,
//! centroids, reduction generation and verification.
//!
//! Costs are returned as exact strings together with a float approximation.

pub mod api;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: kclust::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn stats_dict<'py>(py: Python<'py>, stats: &[(&'static str, f64)]) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (name, value) in stats {
        d.set_item(*name, *value)?;
    }
    Ok(d)
}

/// A k-clustering instance.
#[pyclass(name = "ClusteringInstance", module = "kclust")]
struct PyClustering {
    inner: kclust::ClusteringInstance,
}

#[pymethods]
impl PyClustering {
    #[new]
    #[pyo3(signature = (p, vectors, k, budget, multiplicities=None))]
    fn new(
        p: &str,
        vectors: Vec<Vec<i64>>,
        k: usize,
        budget: &str,
        multiplicities: Option<Vec<u64>>,
    ) -> PyResult<Self> {
        let inner = api::clustering_instance(p, &vectors, k, budget, multiplicities.as_deref()).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: api::clustering_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        api::clustering_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn p(&self) -> String {
        self.inner.order().to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn budget(&self) -> String {
        self.inner.budget().to_string()
    }

    fn with_budget(&self, budget: &str) -> PyResult<Self> {
        let parsed = kclust_cli::budget::parse_budget(budget, self.inner.order()).map_err(err)?;
        Ok(Self { inner: self.inner.with_budget(parsed) })
    }

    /// Decides the instance; `mode` is "paper" (color coding) or "oracle".
    #[pyo3(signature = (policy="auto", seed=0, jobs=1, mode="paper"))]
    fn solve<'py>(
        &self,
        py: Python<'py>,
        policy: &str,
        seed: u64,
        jobs: usize,
        mode: &str,
    ) -> PyResult<Bound<'py, PyDict>> {
        let inner = &self.inner;
        let report = py.detach(|| api::solve(inner, policy, seed, jobs, mode)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("decision", report.decision)?;
        d.set_item("cost", report.cost)?;
        d.set_item("cost_float", report.cost_float)?;
        let clusters = report
            .clusters
            .into_iter()
            .map(|c| {
                let cd = PyDict::new(py);
                cd.set_item("members", c.members)?;
                cd.set_item("weights", c.weights)?;
                cd.set_item("centroid", c.centroid)?;
                cd.set_item("cost", c.cost)?;
                Ok(cd)
            })
            .collect::<PyResult<Vec<_>>>()?;
        d.set_item("clusters", clusters)?;
        d.set_item("stats", stats_dict(py, &report.stats)?)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "ClusteringInstance(p={}, k={}, budget={}, vectors={})",
            self.inner.order(),
            self.inner.k(),
            self.inner.budget(),
            self.inner.dataset().len()
        )
    }
}

/// A cluster selection instance.
#[pyclass(name = "SelectionInstance", module = "kclust")]
struct PySelection {
    inner: kclust::SelectionInstance,
}

#[pymethods]
impl PySelection {
    #[new]
    #[pyo3(signature = (p, groups, budget, weights=None))]
    fn new(p: &str, groups: Vec<Vec<Vec<i64>>>, budget: &str, weights: Option<Vec<Vec<u64>>>) -> PyResult<Self> {
        let inner = api::selection_instance(p, &groups, budget, weights.as_deref()).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: api::selection_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        api::selection_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn p(&self) -> String {
        self.inner.order().to_string()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn budget(&self) -> String {
        self.inner.budget().to_string()
    }

    fn with_budget(&self, budget: &str) -> PyResult<Self> {
        let parsed = kclust_cli::budget::parse_budget(budget, self.inner.order()).map_err(err)?;
        Ok(Self { inner: self.inner.with_budget(parsed) })
    }

    /// Decides the instance; `mode` is "paper" (specialised solver) or "oracle".
    #[pyo3(signature = (mode="paper"))]
    fn select<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyDict>> {
        let inner = &self.inner;
        let report = py.detach(|| api::select_report(inner, mode)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("decision", report.decision)?;
        d.set_item("cost", report.cost)?;
        d.set_item("cost_float", report.cost_float)?;
        d.set_item("chosen", report.chosen)?;
        d.set_item("centroid", report.centroid)?;
        d.set_item("stats", stats_dict(py, &report.stats)?)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "SelectionInstance(p={}, t={}, budget={}, vectors={})",
            self.inner.order(),
            self.inner.t(),
            self.inner.budget(),
            self.inner.m()
        )
    }
}

/// `dist_p(x, y)` without the outer root, as an exact string.
#[pyfunction]
fn distance(p: &str, x: Vec<i64>, y: Vec<i64>) -> PyResult<String> {
    api::distance(p, &x, &y).map_err(err)
}

/// The optimal centroid coordinates and cost of a weighted cluster.
#[pyfunction]
#[pyo3(signature = (p, points, weights=None))]
fn centroid(p: &str, points: Vec<Vec<i64>>, weights: Option<Vec<u64>>) -> PyResult<(Vec<String>, String)> {
    api::centroid(p, &points, weights.as_deref()).map_err(err)
}

/// The canonical string form of a budget under `p`.
#[pyfunction]
fn canonical_budget(budget: &str, p: &str) -> PyResult<String> {
    api::canonical_budget(budget, p).map_err(err)
}

/// The instance file (JSON text) produced by a reduction on a graph file.
#[pyfunction]
#[pyo3(signature = (reduction, graph_json, k=3, p="2", figure=false))]
fn generate(reduction: &str, graph_json: &str, k: usize, p: &str, figure: bool) -> PyResult<String> {
    api::generate(reduction, graph_json, k, p, figure).map_err(err)
}

/// Decides source and target of a reduction and reports whether they agree.
#[pyfunction]
#[pyo3(signature = (reduction, graph_json, k=3, p="2", mode="oracle"))]
fn verify<'py>(
    py: Python<'py>,
    reduction: &str,
    graph_json: &str,
    k: usize,
    p: &str,
    mode: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let s = py.detach(|| api::verify(reduction, graph_json, k, p, mode)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("agree", s.agree)?;
    d.set_item("source", s.source)?;
    d.set_item("target", s.target)?;
    d.set_item("hioct", s.hioct)?;
    d.set_item("budget", s.budget)?;
    d.set_item("target_cost", s.target_cost)?;
    d.set_item("report", s.report)?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "kclust")]
fn kclust_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyClustering>()?;
    m.add_class::<PySelection>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(centroid, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_budget, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
