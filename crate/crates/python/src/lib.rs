//! Python bindings: a thin veneer over the core crate for notebook-style
//! exploration. Heavyweight artifacts (certificates, decomposition
//! witnesses) cross the boundary as JSON strings.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use twincut::coloring::{self, Budget, ChiOutcome};
use twincut::criticality;
use twincut::graph::{self, Graph, VertexId};
use twincut::structure;
use twincut::{closure, TwincutFamily};

fn err(e: twincut::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph")]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: Graph::new(n, &edges).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.inner.neighbors(v).to_vec()
    }

    fn labels(&self) -> Option<Vec<String>> {
        self.inner
            .labels()
            .map(|ls| ls.iter().map(|a| a.to_string()).collect())
    }

    fn graph6(&self) -> String {
        graph::encode_graph6(&self.inner)
    }

    fn to_json(&self) -> String {
        graph::encode_json(&self.inner)
    }

    fn has_triangle(&self) -> Option<(VertexId, VertexId, VertexId)> {
        structure::has_triangle(&self.inner)
    }

    /// Exact chromatic number with a witness, or None when the budget ran
    /// out; returns (chi, (lower, upper), assignment).
    #[pyo3(signature = (max_nodes=None, max_millis=None))]
    fn chromatic_number(
        &self,
        max_nodes: Option<u64>,
        max_millis: Option<u64>,
    ) -> (Option<u32>, (u32, u32), Vec<u32>) {
        let budget = Budget {
            max_nodes,
            max_millis,
        };
        match coloring::chromatic_number(&self.inner, budget) {
            ChiOutcome::Exact(r) => (Some(r.chi), (r.chi, r.chi), r.witness.assignment),
            ChiOutcome::Unknown {
                lower, upper, best, ..
            } => (None, (lower, upper), best.assignment),
        }
    }

    fn is_proper(&self, assignment: Vec<u32>) -> PyResult<bool> {
        coloring::is_proper(&self.inner, &coloring::Coloring::from_assignment(assignment))
            .map_err(err)
    }

    fn kcolor_cnf(&self, q: u32) -> String {
        coloring::export_kcolor_cnf(&self.inner, q)
    }

    /// Decomposition witness as a JSON string.
    fn decompose(&self) -> String {
        serde_json::to_string(&structure::decompose(&self.inner)).expect("witness serializes")
    }

    fn contains_induced_cube(&self) -> PyResult<Option<Vec<VertexId>>> {
        structure::contains_induced_cube(&self.inner).map_err(err)
    }

    fn is_isomorphic(&self, other: &PyGraph) -> PyResult<bool> {
        graph::is_isomorphic(&self.inner, &other.inner).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

#[pyfunction]
fn build_graph(k: u32) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: twincut::twincut::build_graph(k).map_err(err)?,
    })
}

#[pyfunction]
fn decode_graph6(text: &str) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: graph::decode_graph6(text).map_err(err)?,
    })
}

/// |V(G_k)| from the size recurrence; exact for any k.
#[pyfunction]
fn vertex_count(k: u32) -> BigUint {
    twincut::twincut::vertex_count(k)
}

#[pyfunction]
fn constructive_coloring(k: u32) -> PyResult<Vec<u32>> {
    let fam = TwincutFamily::new(k).map_err(err)?;
    Ok(coloring::constructive_coloring(&fam, k).map_err(err)?.assignment)
}

#[pyfunction]
fn unique_top_coloring(k: u32, v: VertexId) -> PyResult<Vec<u32>> {
    let fam = TwincutFamily::new(k).map_err(err)?;
    Ok(coloring::unique_top_coloring(&fam, k, v).map_err(err)?.assignment)
}

/// Derives and replay-checks the closure certificate for G_k; returns the
/// certificate as a JSON string.
#[pyfunction]
fn certificate(k: u32) -> PyResult<String> {
    let fam = TwincutFamily::new(k).map_err(err)?;
    let cert = closure::twincut_certificate(&fam, k).map_err(err)?;
    closure::replay(&cert).map_err(err)?;
    serde_json::to_string(&cert).map_err(|e| err(e.into()))
}

/// Replays a certificate JSON string and returns the resulting graph.
#[pyfunction]
fn replay_certificate(text: &str) -> PyResult<PyGraph> {
    let cert: closure::ClosureCertificate =
        serde_json::from_str(text).map_err(|e| err(e.into()))?;
    Ok(PyGraph {
        inner: closure::replay(&cert).map_err(err)?,
    })
}

/// Criticality sweep; returns (chi, edge count, verified count).
#[pyfunction]
fn verify_critical(k: u32) -> PyResult<(Option<u32>, usize, usize)> {
    let fam = TwincutFamily::new(k).map_err(err)?;
    let report = criticality::verify_critical(&fam, k, Budget::default()).map_err(err)?;
    let verified = report.per_edge.iter().filter(|r| r.verified).count();
    Ok((report.chi, report.per_edge.len(), verified))
}

#[pymodule]
fn twincut_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(decode_graph6, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_count, m)?)?;
    m.add_function(wrap_pyfunction!(constructive_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(unique_top_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(replay_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_critical, m)?)?;
    Ok(())
}
