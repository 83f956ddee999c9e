//! Python bindings for the ordervc library: order types, enumeration,
//! shattering/VC-dimension search, the shattered-set constructions and the
//! proof replay, mirroring the Rust API.

use std::time::Duration;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyType;

use ordervc::construct as c;
use ordervc::enumerate as e;
use ordervc::shatter as s;
use ordervc::{json, Error};

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyIOError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct DirectedGraph {
    inner: ordervc::DirectedGraph,
}

#[pymethods]
impl DirectedGraph {
    #[new]
    #[pyo3(signature = (n, edges=vec![]))]
    fn new(n: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        Ok(DirectedGraph {
            inner: ordervc::DirectedGraph::from_edge_list(n, &edges).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.inner.has_edge(u, v)
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn topological_sort(&self) -> PyResult<TotalOrder> {
        Ok(TotalOrder {
            inner: self.inner.topological_sort().map_err(to_py_err)?,
        })
    }

    fn topological_sort_seeded(&self, seed: u64) -> PyResult<TotalOrder> {
        Ok(TotalOrder {
            inner: self
                .inner
                .topological_sort_seeded(seed)
                .map_err(to_py_err)?,
        })
    }

    fn transitive_closure(&self) -> PyResult<OrderRelation> {
        Ok(OrderRelation {
            inner: self.inner.transitive_closure().map_err(to_py_err)?,
        })
    }

    fn union(&self, other: &DirectedGraph) -> PyResult<DirectedGraph> {
        Ok(DirectedGraph {
            inner: self.inner.union_graph(&other.inner).map_err(to_py_err)?,
        })
    }

    fn to_dot(&self) -> String {
        ordervc::dot::graph_to_dot(&self.inner, "g")
    }

    fn __eq__(&self, other: &DirectedGraph) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "DirectedGraph(n={}, edges={:?})",
            self.inner.n(),
            self.inner.edges()
        )
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct OrderRelation {
    inner: ordervc::OrderRelation,
}

#[pymethods]
impl OrderRelation {
    /// Transitive closure of generator edges.
    #[new]
    #[pyo3(signature = (n, relations=vec![]))]
    fn new(n: usize, relations: Vec<(u32, u32)>) -> PyResult<Self> {
        Ok(OrderRelation {
            inner: ordervc::OrderRelation::from_generators(n, &relations).map_err(to_py_err)?,
        })
    }

    #[classmethod]
    fn empty(_cls: &Bound<'_, PyType>, n: usize) -> PyResult<Self> {
        Ok(OrderRelation {
            inner: ordervc::OrderRelation::empty(n).map_err(to_py_err)?,
        })
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        Ok(OrderRelation {
            inner: json::parse_order(text).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn less(&self, a: u32, b: u32) -> bool {
        self.inner.less(a, b)
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn compatible(&self, other: &OrderRelation) -> PyResult<bool> {
        self.inner.compatible(&other.inner).map_err(to_py_err)
    }

    fn union(&self, other: &OrderRelation) -> PyResult<DirectedGraph> {
        Ok(DirectedGraph {
            inner: self.inner.union(&other.inner).map_err(to_py_err)?,
        })
    }

    fn as_graph(&self) -> DirectedGraph {
        DirectedGraph {
            inner: self.inner.as_graph(),
        }
    }

    fn is_total(&self) -> bool {
        self.inner.is_total()
    }

    fn as_total(&self) -> Option<TotalOrder> {
        self.inner.as_total().map(|inner| TotalOrder { inner })
    }

    fn to_json(&self) -> String {
        json::order_json_string(&self.inner)
    }

    fn __eq__(&self, other: &OrderRelation) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!(
            "OrderRelation(n={}, relations={:?})",
            self.inner.n(),
            self.inner.edges()
        )
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct TotalOrder {
    inner: ordervc::TotalOrder,
}

#[pymethods]
impl TotalOrder {
    #[new]
    fn new(seq: Vec<u32>) -> PyResult<Self> {
        Ok(TotalOrder {
            inner: ordervc::TotalOrder::from_seq(seq).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn seq(&self) -> Vec<u32> {
        self.inner.seq().to_vec()
    }

    fn position(&self, label: u32) -> PyResult<usize> {
        self.inner.position(label).map_err(to_py_err)
    }

    /// True iff the edge (tail, head) is reversed in this order.
    fn contradicts(&self, edge: (u32, u32)) -> PyResult<bool> {
        self.inner.contradicts(edge).map_err(to_py_err)
    }

    fn to_relation(&self) -> OrderRelation {
        OrderRelation {
            inner: self.inner.to_relation(),
        }
    }

    fn lex_rank(&self) -> u64 {
        self.inner.lex_rank()
    }

    fn __eq__(&self, other: &TotalOrder) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("TotalOrder({:?})", self.inner.seq())
    }
}

#[pyclass(frozen)]
struct Family {
    inner: e::Family,
}

#[pymethods]
impl Family {
    #[classmethod]
    fn all_partial(_cls: &Bound<'_, PyType>, n: usize) -> PyResult<Self> {
        Ok(Family {
            inner: e::Family::all_partial(n).map_err(to_py_err)?,
        })
    }

    #[classmethod]
    fn all_total(_cls: &Bound<'_, PyType>, n: usize) -> PyResult<Self> {
        Ok(Family {
            inner: e::Family::all_total(n).map_err(to_py_err)?,
        })
    }

    #[classmethod]
    fn explicit(_cls: &Bound<'_, PyType>, members: Vec<OrderRelation>) -> PyResult<Self> {
        let members = members.into_iter().map(|m| m.inner).collect();
        Ok(Family {
            inner: e::Family::explicit(members).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind() {
            e::FamilyKind::AllPartial => "partial",
            e::FamilyKind::AllTotal => "total",
            e::FamilyKind::Explicit => "explicit",
        }
    }

    fn member_at(&self, i: usize) -> Option<OrderRelation> {
        self.inner
            .member_at(i)
            .map(|m| OrderRelation { inner: m.clone() })
    }

    fn index_of(&self, x: &OrderRelation) -> PyResult<usize> {
        self.inner.index_of(&x.inner).map_err(to_py_err)
    }

    fn members(&self) -> Vec<OrderRelation> {
        self.inner
            .members()
            .iter()
            .map(|m| OrderRelation { inner: m.clone() })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Family(kind={}, n={}, len={})",
            self.kind(),
            self.inner.n(),
            self.inner.len()
        )
    }
}

#[pyclass(frozen)]
struct ShatterCertificate {
    inner: s::ShatterCertificate,
}

#[pymethods]
impl ShatterCertificate {
    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        Ok(ShatterCertificate {
            inner: json::parse_certificate(text).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn ground(&self) -> Vec<OrderRelation> {
        self.inner
            .ground()
            .iter()
            .map(|g| OrderRelation { inner: g.clone() })
            .collect()
    }

    fn witnesses(&self) -> std::collections::BTreeMap<u64, OrderRelation> {
        self.inner
            .witnesses()
            .iter()
            .map(|(&mask, w)| (mask, OrderRelation { inner: w.clone() }))
            .collect()
    }

    /// Recheck every (mask, witness) pair; raises ValueError on the first
    /// defect.
    fn verify(&self) -> PyResult<()> {
        s::verify_certificate(&self.inner).map_err(|d| PyValueError::new_err(d.to_string()))
    }

    fn is_valid(&self) -> bool {
        s::verify_certificate(&self.inner).is_ok()
    }

    fn to_json(&self) -> String {
        json::certificate_json_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "ShatterCertificate(size={}, witnesses={})",
            self.inner.size(),
            self.inner.witnesses().len()
        )
    }
}

#[pyclass(frozen)]
struct VcReport {
    inner: s::VcReport,
}

#[pymethods]
impl VcReport {
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension
    }

    #[getter]
    fn search_complete(&self) -> bool {
        self.inner.exhaustion.search_complete
    }

    #[getter]
    fn termination(&self) -> &'static str {
        match self.inner.exhaustion.termination {
            s::Termination::LevelExhausted => "level_exhausted",
            s::Termination::InformationBound => "information_bound",
            s::Termination::GroundExhausted => "ground_exhausted",
            s::Termination::Budget => "budget",
        }
    }

    #[getter]
    fn candidates_tested(&self) -> u64 {
        self.inner.exhaustion.candidates_tested
    }

    #[getter]
    fn ground_indices(&self) -> Vec<u32> {
        self.inner.ground_indices.clone()
    }

    fn certificate(&self) -> ShatterCertificate {
        ShatterCertificate {
            inner: self.inner.certificate.clone(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "VcReport(dimension={}, search_complete={})",
            self.inner.dimension, self.inner.exhaustion.search_complete
        )
    }
}

#[pyclass(frozen)]
struct ConstructionFamily {
    inner: c::ConstructionFamily,
}

#[pymethods]
impl ConstructionFamily {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> Option<usize> {
        self.inner.k()
    }

    fn parts(&self) -> Vec<DirectedGraph> {
        self.inner
            .parts()
            .iter()
            .map(|p| DirectedGraph { inner: p.clone() })
            .collect()
    }

    fn part_names(&self) -> Vec<String> {
        self.inner.part_names().to_vec()
    }

    fn vertex_names(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    fn closed_parts(&self) -> PyResult<Vec<OrderRelation>> {
        Ok(self
            .inner
            .closed_parts()
            .map_err(to_py_err)?
            .into_iter()
            .map(|p| OrderRelation { inner: p })
            .collect())
    }

    fn union_of_parts(&self) -> PyResult<DirectedGraph> {
        Ok(DirectedGraph {
            inner: self.inner.union_of_parts().map_err(to_py_err)?,
        })
    }

    fn to_dot(&self) -> String {
        ordervc::dot::family_to_dot(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "ConstructionFamily(kind={}, n={}, parts={})",
            self.inner.kind(),
            self.inner.n(),
            self.inner.len()
        )
    }
}

#[pyclass(frozen)]
struct FlipWitness {
    inner: c::FlipWitness,
}

#[pymethods]
impl FlipWitness {
    #[getter]
    fn graph(&self) -> DirectedGraph {
        DirectedGraph {
            inner: self.inner.graph.clone(),
        }
    }

    #[getter]
    fn order(&self) -> TotalOrder {
        TotalOrder {
            inner: self.inner.order.clone(),
        }
    }

    #[getter]
    fn fallback_used(&self) -> bool {
        self.inner.fallback_used
    }
}

#[pyclass(frozen)]
struct StarReport {
    inner: c::StarReport,
}

#[pymethods]
impl StarReport {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn part_count(&self) -> usize {
        self.inner.part_count
    }

    #[getter]
    fn subsets_tested(&self) -> u64 {
        self.inner.subsets_tested
    }

    #[getter]
    fn fallback_count(&self) -> u64 {
        self.inner.fallback_count
    }

    fn failures(&self) -> Vec<(u64, String)> {
        self.inner
            .failures
            .iter()
            .map(|f| (f.subset, f.detail.clone()))
            .collect()
    }

    fn passed(&self) -> bool {
        self.inner.passed()
    }

    fn __repr__(&self) -> String {
        format!(
            "StarReport(kind={}, n={}, tested={}, failures={}, fallbacks={})",
            self.inner.kind,
            self.inner.n,
            self.inner.subsets_tested,
            self.inner.failures.len(),
            self.inner.fallback_count
        )
    }
}

#[pyclass(frozen)]
struct ProofCheckReport {
    inner: c::ProofCheckReport,
}

#[pymethods]
impl ProofCheckReport {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn set_size(&self) -> usize {
        self.inner.set_size
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edge_graph.edges()
    }

    fn edge_assignment(&self) -> Vec<(usize, (u32, u32), OrderRelation)> {
        self.inner
            .edge_assignment
            .iter()
            .map(|a| {
                (
                    a.ground_index,
                    a.edge,
                    OrderRelation {
                        inner: a.witness.clone(),
                    },
                )
            })
            .collect()
    }

    fn checks(&self) -> std::collections::BTreeMap<&'static str, bool> {
        let ch = &self.inner.checks;
        [
            ("acyclic", ch.acyclic),
            ("no_parallel_path", ch.no_parallel_path),
            ("triangle_free", ch.triangle_free),
            ("mantel_bound", ch.mantel_bound),
        ]
        .into_iter()
        .collect()
    }

    fn all_checks_passed(&self) -> bool {
        self.inner.checks.all()
    }

    fn __repr__(&self) -> String {
        format!(
            "ProofCheckReport(set_size={}, edge_count={}, all_checks={})",
            self.inner.set_size,
            self.inner.edge_count,
            self.inner.checks.all()
        )
    }
}

#[pyfunction]
fn all_total_orders(n: usize) -> PyResult<Vec<TotalOrder>> {
    Ok(e::all_total_orders(n)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| TotalOrder { inner })
        .collect())
}

#[pyfunction]
fn all_partial_orders(n: usize) -> PyResult<Vec<OrderRelation>> {
    Ok(e::all_partial_orders(n)
        .map_err(to_py_err)?
        .into_iter()
        .map(|inner| OrderRelation { inner })
        .collect())
}

#[pyfunction]
fn compatible(a: &OrderRelation, b: &OrderRelation) -> PyResult<bool> {
    a.inner.compatible(&b.inner).map_err(to_py_err)
}

/// Bitmask whose bit i is set iff the witness is compatible with ground[i].
#[pyfunction]
fn trace(witness: &OrderRelation, ground: Vec<OrderRelation>) -> PyResult<u64> {
    let ground: Vec<ordervc::OrderRelation> = ground.into_iter().map(|g| g.inner).collect();
    s::trace(&witness.inner, &ground).map_err(to_py_err)
}

#[pyfunction]
fn is_shattered(
    ground: Vec<OrderRelation>,
    witnesses: &Family,
) -> PyResult<Option<ShatterCertificate>> {
    let ground: Vec<ordervc::OrderRelation> = ground.into_iter().map(|g| g.inner).collect();
    Ok(s::is_shattered(&ground, &witnesses.inner)
        .map_err(to_py_err)?
        .map(|inner| ShatterCertificate { inner }))
}

#[pyfunction]
#[pyo3(signature = (ground, witnesses, budget_seconds=None))]
fn vc_dimension(
    ground: &Family,
    witnesses: &Family,
    budget_seconds: Option<f64>,
) -> PyResult<VcReport> {
    let config = s::SearchConfig {
        budget: budget_seconds.map(Duration::from_secs_f64),
    };
    Ok(VcReport {
        inner: s::vc_dimension(&ground.inner, &witnesses.inner, &config).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn thm1_shattered_set(n: usize) -> PyResult<(ConstructionFamily, Vec<TotalOrder>)> {
    let (fam, orders) = c::thm1_shattered_set(n).map_err(to_py_err)?;
    Ok((
        ConstructionFamily { inner: fam },
        orders
            .into_iter()
            .map(|inner| TotalOrder { inner })
            .collect(),
    ))
}

#[pyfunction]
fn thm1_shattered_set_seeded(
    n: usize,
    seed: u64,
) -> PyResult<(ConstructionFamily, Vec<TotalOrder>)> {
    let (fam, orders) = c::thm1_shattered_set_seeded(n, seed).map_err(to_py_err)?;
    Ok((
        ConstructionFamily { inner: fam },
        orders
            .into_iter()
            .map(|inner| TotalOrder { inner })
            .collect(),
    ))
}

#[pyfunction]
fn thm1_witness(n: usize, chosen: Vec<(u32, u32)>) -> PyResult<OrderRelation> {
    Ok(OrderRelation {
        inner: c::thm1_witness(n, &chosen).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn thm2_g_family(n: usize) -> PyResult<ConstructionFamily> {
    Ok(ConstructionFamily {
        inner: c::thm2_g_family(n).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn thm2_h_family(n: usize) -> PyResult<ConstructionFamily> {
    Ok(ConstructionFamily {
        inner: c::thm2_h_family(n).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn thm2_witness(fam: &ConstructionFamily, selected: Vec<usize>) -> PyResult<FlipWitness> {
    Ok(FlipWitness {
        inner: c::thm2_witness(&fam.inner, &selected).map_err(to_py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (fam, mode="exhaustive", count=100_000, seed=0))]
fn verify_property_star(
    fam: &ConstructionFamily,
    mode: &str,
    count: u64,
    seed: u64,
) -> PyResult<StarReport> {
    let mode = match mode {
        "exhaustive" => c::StarMode::Exhaustive,
        "sampled" => c::StarMode::Sampled { count, seed },
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be 'exhaustive' or 'sampled', got {other:?}"
            )))
        }
    };
    Ok(StarReport {
        inner: c::verify_property_star(&fam.inner, mode).map_err(to_py_err)?,
    })
}

#[pyfunction]
fn proofcheck_thm1_upper(set: Vec<TotalOrder>, witnesses: &Family) -> PyResult<ProofCheckReport> {
    let set: Vec<ordervc::TotalOrder> = set.into_iter().map(|t| t.inner).collect();
    Ok(ProofCheckReport {
        inner: c::proofcheck_thm1_upper(&set, &witnesses.inner).map_err(to_py_err)?,
    })
}

#[pymodule]
fn ordervc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DirectedGraph>()?;
    m.add_class::<OrderRelation>()?;
    m.add_class::<TotalOrder>()?;
    m.add_class::<Family>()?;
    m.add_class::<ShatterCertificate>()?;
    m.add_class::<VcReport>()?;
    m.add_class::<ConstructionFamily>()?;
    m.add_class::<FlipWitness>()?;
    m.add_class::<StarReport>()?;
    m.add_class::<ProofCheckReport>()?;
    m.add_function(wrap_pyfunction!(all_total_orders, m)?)?;
    m.add_function(wrap_pyfunction!(all_partial_orders, m)?)?;
    m.add_function(wrap_pyfunction!(compatible, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(is_shattered, m)?)?;
    m.add_function(wrap_pyfunction!(vc_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(thm1_shattered_set, m)?)?;
    m.add_function(wrap_pyfunction!(thm1_shattered_set_seeded, m)?)?;
    m.add_function(wrap_pyfunction!(thm1_witness, m)?)?;
    m.add_function(wrap_pyfunction!(thm2_g_family, m)?)?;
    m.add_function(wrap_pyfunction!(thm2_h_family, m)?)?;
    m.add_function(wrap_pyfunction!(thm2_witness, m)?)?;
    m.add_function(wrap_pyfunction!(verify_property_star, m)?)?;
    m.add_function(wrap_pyfunction!(proofcheck_thm1_upper, m)?)?;
    Ok(())
}
