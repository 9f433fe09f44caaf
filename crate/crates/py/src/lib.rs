//! Python bindings. Documents cross the boundary as Python dicts built from
//! the same JSON the CLI reads and writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};
use sumnet_core::code::{CodeDoc, LinkCode, RegionCode};
use sumnet_core::codegen::choose_field;
use sumnet_core::decide::{decide_region_graph, decision_doc, solve_network, DecideOptions, Verdict};
use sumnet_core::network::{Network as CoreNetwork, NetworkDoc};
use sumnet_core::regions::{basic_region_decomposition, build_region_graph, RegionGraph as CoreRegionGraph, RegionGraphDoc};
use sumnet_core::structure::compute_structure;
use sumnet_core::verify::random::{random_region_graph as core_random_region_graph, RegionGraphParams};
use sumnet_core::verify::{brute_force_feasible, verify_network_code, verify_region_code, OracleConfig, OracleOutcome};

fn core_err(e: sumnet_core::Error) -> PyErr {
    match e {
        sumnet_core::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(json_err)
}

/// A network of nodes and links with three sources.
#[pyclass(frozen)]
struct Network {
    inner: CoreNetwork,
}

#[pymethods]
impl Network {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: NetworkDoc = serde_json::from_str(text).map_err(json_err)?;
        Ok(Network { inner: CoreNetwork::from_doc(doc).map_err(core_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_doc()).expect("network documents serialize")
    }

    #[getter]
    fn num_links(&self) -> usize {
        self.inner.links().len()
    }

    /// Region graph of the basic region decomposition.
    fn decompose(&self) -> PyResult<RegionGraph> {
        let dec = basic_region_decomposition(&self.inner).map_err(core_err)?;
        Ok(RegionGraph { inner: build_region_graph(&dec, &self.inner).map_err(core_err)? })
    }
}

/// A DAG of regions with source and terminal roles.
#[pyclass(frozen)]
struct RegionGraph {
    inner: CoreRegionGraph,
}

#[pymethods]
impl RegionGraph {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc: RegionGraphDoc = serde_json::from_str(text).map_err(json_err)?;
        Ok(RegionGraph { inner: CoreRegionGraph::from_doc(doc).map_err(core_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_doc()).expect("region graphs serialize")
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn ids(&self) -> Vec<String> {
        (0..self.inner.len()).map(|r| self.inner.id(r).to_string()).collect()
    }

    fn parents(&self, id: &str) -> PyResult<Vec<String>> {
        let r = self.inner.index_of(id).ok_or_else(|| PyValueError::new_err(format!("unknown region `{id}`")))?;
        Ok(self.inner.parents(r).iter().map(|&u| self.inner.id(u).to_string()).collect())
    }

    /// Π, Ω and Λ as a dict keyed by comma-separated 1-based labels.
    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let sm = compute_structure(&self.inner).map_err(core_err)?;
        to_py(py, &serde_json::to_value(sm.to_doc(&self.inner)).map_err(json_err)?)
    }
}

/// Decides feasibility. The result holds the verdict document and, when
/// feasible, a verified code under "code".
#[pyfunction]
#[pyo3(signature = (instance, field_min = 0))]
fn decide<'py>(instance: &Bound<'py, PyAny>, field_min: u64) -> PyResult<Bound<'py, PyAny>> {
    let opts = DecideOptions { field_min };
    let doc = if let Ok(net) = instance.cast::<Network>() {
        let net = &net.get().inner;
        let nd = solve_network(net, opts).map_err(core_err)?;
        let mut doc = decision_doc(&nd.region_graph, &nd.decision);
        if let Some(c) = &nd.link_code {
            doc["code"] = serde_json::to_value(c.to_doc(net)).map_err(json_err)?;
        }
        doc
    } else if let Ok(g) = instance.cast::<RegionGraph>() {
        let g = &g.get().inner;
        let d = decide_region_graph(g, opts).map_err(core_err)?;
        let mut doc = decision_doc(g, &d);
        if let Verdict::Feasible { code } = &d.verdict {
            doc["code"] = serde_json::to_value(code.to_doc(g)).map_err(json_err)?;
        }
        doc
    } else {
        return Err(PyValueError::new_err("expected a Network or RegionGraph"));
    };
    to_py(instance.py(), &doc)
}

/// Checks a code dict ({"p": ..., "vectors": {...}}). Returns None when
/// valid, otherwise a description of the first violation.
#[pyfunction]
fn verify(instance: &Bound<'_, PyAny>, code: &Bound<'_, PyAny>) -> PyResult<Option<String>> {
    let doc: CodeDoc = serde_json::from_value(from_py(code)?).map_err(json_err)?;
    let result = if let Ok(net) = instance.cast::<Network>() {
        let net = &net.get().inner;
        verify_network_code(net, &LinkCode::from_doc(&doc, net).map_err(core_err)?)
    } else if let Ok(g) = instance.cast::<RegionGraph>() {
        let g = &g.get().inner;
        verify_region_code(g, &RegionCode::from_doc(&doc, g).map_err(core_err)?)
    } else {
        return Err(PyValueError::new_err("expected a Network or RegionGraph"));
    };
    Ok(result.map_err(core_err)?.err().map(|v| v.to_string()))
}

/// Exhaustive search for a region code over the given primes.
#[pyfunction]
#[pyo3(signature = (graph, primes = vec![2, 3, 5, 7], max_coding = 6, budget = 20_000_000))]
fn oracle<'py>(
    py: Python<'py>,
    graph: &RegionGraph,
    primes: Vec<u64>,
    max_coding: usize,
    budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let g = &graph.inner;
    let res = brute_force_feasible(g, &primes, OracleConfig { max_coding, budget }).map_err(core_err)?;
    let doc = match res.outcome {
        OracleOutcome::Solution { p, code } => json!({"outcome": "solution", "p": p, "code": code.to_doc(g)}),
        OracleOutcome::NoSolution { primes } => json!({"outcome": "no_solution", "primes": primes}),
        OracleOutcome::BudgetExceeded { reason } => json!({"outcome": "budget_exceeded", "reason": reason}),
    };
    to_py(py, &doc)
}

/// The K vector sets over the smallest prime that supports them.
#[pyfunction]
#[pyo3(signature = (k, field_min = 0))]
fn vector_family(k: usize, field_min: u64) -> PyResult<(u64, Vec<Vec<[u64; 3]>>)> {
    let f = choose_field(k, field_min).map_err(core_err)?;
    Ok((f.p, f.sets))
}

#[pyfunction]
#[pyo3(signature = (seed, terminals = 3, coding = 4, density = 0.2))]
fn random_region_graph(seed: u64, terminals: usize, coding: usize, density: f64) -> PyResult<RegionGraph> {
    let params = RegionGraphParams { terminals, coding, density };
    Ok(RegionGraph { inner: core_random_region_graph(seed, params).map_err(core_err)? })
}

/// JSON text of a bundled example instance.
#[pyfunction]
fn fixture(name: &str) -> PyResult<&'static str> {
    use sumnet_core::fixtures::*;
    Ok(match name {
        "fix_a" => FIX_A,
        "fix_b" => FIX_B,
        "g1" => G1,
        "rg5a" => RG5A,
        "rg5b" => RG5B,
        "rg7" => RG7,
        "rg8a" => RG8A,
        "rg8b" => RG8B,
        _ => return Err(PyValueError::new_err(format!("no fixture named `{name}`"))),
    })
}

#[pymodule]
fn sumnet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Network>()?;
    m.add_class::<RegionGraph>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(vector_family, m)?)?;
    m.add_function(wrap_pyfunction!(random_region_graph, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    Ok(())
}
