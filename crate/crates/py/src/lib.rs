//! Python bindings. Rationals cross the boundary as `"num/den"` strings, which
//! `fractions.Fraction` parses directly; reports cross as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use witness_core::instances;
use witness_core::json::{Instance, InstanceKind};
use witness_core::{claw_solver, laminar, lemma_audit, nwt_solver, oracle, NodeId, Rational, Variant, WitnessError};

fn err(e: WitnessError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(err)
}

fn json_text<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("report serializes")
}

#[pyclass(frozen, module = "witness_trees")]
pub struct Tree {
    inner: witness_core::Tree,
    kind: InstanceKind,
}

#[pymethods]
impl Tree {
    /// Parses instance JSON.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Tree> {
        let inst = Instance::parse(text).map_err(err)?;
        Ok(Tree { inner: inst.to_tree().map_err(err)?, kind: inst.kind })
    }

    fn to_json(&self) -> String {
        Instance::from_tree(self.kind, &self.inner, serde_json::Value::Null).to_json()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn terminals(&self) -> Vec<NodeId> {
        self.inner.terminals()
    }

    fn total_cost(&self) -> String {
        self.inner.total_cost().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Tree(nodes={}, terminals={})", self.inner.node_count(), self.inner.terminals().len())
    }
}

#[pyclass(frozen, module = "witness_trees")]
pub struct WitnessTree {
    inner: witness_core::WitnessTree,
}

#[pymethods]
impl WitnessTree {
    #[new]
    fn new(edges: Vec<(NodeId, NodeId)>) -> PyResult<WitnessTree> {
        Ok(WitnessTree { inner: witness_core::WitnessTree::new(edges).map_err(err)? })
    }

    #[getter]
    fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.inner.edges().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("WitnessTree({})", self.inner)
    }
}

fn wrap(w: witness_core::WitnessTree) -> WitnessTree {
    WitnessTree { inner: w }
}

/// `H_n` as `"num/den"`.
#[pyfunction]
fn harmonic(n: usize) -> String {
    witness_core::harmonic(n).to_string()
}

/// Objective of `w` on `tree`: `"node"`, `"edge"` or `"component-node"`.
#[pyfunction]
#[pyo3(signature = (tree, w, variant_name = "node"))]
fn evaluate(tree: &Tree, w: &WitnessTree, variant_name: &str) -> PyResult<String> {
    Ok(witness_core::eval(&tree.inner, &w.inner, variant(variant_name)?).map_err(err)?.to_string())
}

#[pyfunction]
fn is_laminar(tree: &Tree, w: &WitnessTree) -> PyResult<bool> {
    laminar::is_laminar(&tree.inner, &w.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (tree, w, variant_name = "node"))]
fn laminarize(tree: &Tree, w: &WitnessTree, variant_name: &str) -> PyResult<WitnessTree> {
    laminar::laminarize(&tree.inner, &w.inner, variant(variant_name)?).map(wrap).map_err(err)
}

/// Optimal laminar witness tree: `(value, witness)`.
#[pyfunction]
#[pyo3(signature = (tree, variant_name = "node", budget = None))]
fn optimal_laminar(tree: &Tree, variant_name: &str, budget: Option<u128>) -> PyResult<(String, WitnessTree)> {
    let b = budget.unwrap_or(oracle::DEFAULT_BUDGET);
    let opt = oracle::optimal_laminar(&tree.inner, variant(variant_name)?, b).map_err(err)?;
    Ok((opt.value.to_string(), wrap(opt.witness)))
}

/// Report of the bottom-up construction, as JSON text.
#[pyfunction]
fn solve_nwt(tree: &Tree) -> PyResult<String> {
    Ok(json_text(&nwt_solver::solve_nwt(&tree.inner).map_err(err)?))
}

/// Report of the offset construction, as JSON text.
#[pyfunction]
#[pyo3(signature = (tree, seed = None))]
fn solve_claw(tree: &Tree, seed: Option<u64>) -> PyResult<String> {
    Ok(json_text(&claw_solver::solve_claw(&tree.inner, seed).map_err(err)?))
}

#[pyfunction]
fn gen_nwt_lb(q: usize) -> PyResult<(Tree, WitnessTree)> {
    let t = instances::gen_nwt_lb(q).map_err(err)?;
    let w = instances::canonical_nwt_witness(q).map_err(err)?;
    Ok((Tree { inner: t, kind: InstanceKind::Nwt }, wrap(w)))
}

#[pyfunction]
#[pyo3(signature = (q, alpha = "8/45"))]
fn gen_claw_lb(q: usize, alpha: &str) -> PyResult<(Tree, WitnessTree)> {
    let a: Rational = alpha.parse().map_err(err)?;
    let t = instances::gen_claw_lb(q, &a).map_err(err)?;
    let w = instances::build_section_witness(q, &instances::tiling_11(q)).map_err(err)?;
    Ok((Tree { inner: t, kind: InstanceKind::Ewt }, wrap(w)))
}

/// One audit report as JSON text; `range` overrides its main range.
#[pyfunction]
#[pyo3(signature = (name, range = None))]
fn audit_lemma(name: &str, range: Option<i64>) -> PyResult<String> {
    let r = lemma_audit::run(name, range, &lemma_audit::AuditRanges::default())
        .ok_or_else(|| PyValueError::new_err(format!("unknown lemma {name:?}")))?;
    Ok(json_text(&r))
}

#[pymodule]
fn witness_trees(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Tree>()?;
    m.add_class::<WitnessTree>()?;
    m.add_function(wrap_pyfunction!(harmonic, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(is_laminar, m)?)?;
    m.add_function(wrap_pyfunction!(laminarize, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_laminar, m)?)?;
    m.add_function(wrap_pyfunction!(solve_nwt, m)?)?;
    m.add_function(wrap_pyfunction!(solve_claw, m)?)?;
    m.add_function(wrap_pyfunction!(gen_nwt_lb, m)?)?;
    m.add_function(wrap_pyfunction!(gen_claw_lb, m)?)?;
    m.add_function(wrap_pyfunction!(audit_lemma, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
