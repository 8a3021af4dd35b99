//! Python bindings: categories, topologies and modules as classes, reports as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use finsite::fincat::{Budget, FiniteCategory};
use finsite::fixtures::{build_standard_category, fixture, BuildSpec};
use finsite::linalg::Field;
use finsite::modrep::{random_module, KModule};
use finsite::report::{label_topologies, render_topology_table, render_torsion_table, topology_table, torsion_pair_table};
use finsite::topology::{
    check_axioms, enumerate_topologies, named_topology, rigidity, CoverRule, GrothendieckTopology, NamedTopology,
    TopologyDoc,
};
use finsite::typen::{spec_census, symbolic_pullback, validate_spec, DSpec, SymbolicSieve};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or_default().into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn report<T: serde::Serialize>(py: Python<'_>, r: &T) -> PyResult<Py<PyAny>> {
    to_py(py, &serde_json::to_value(r).map_err(err)?)
}

fn parse_field(s: &str) -> PyResult<Field> {
    Field::parse(s).map_err(err)
}

/// A finite category.
#[pyclass(name = "Category", module = "finsite_py", skip_from_py_object)]
#[derive(Clone)]
struct PyCategory {
    inner: FiniteCategory,
}

#[pymethods]
impl PyCategory {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: FiniteCategory::from_json(text).map_err(err)? })
    }

    /// One of the built-in test categories, e.g. `quiver2` or `orbit_s3`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        Ok(Self { inner: fixture(name).map_err(err)? })
    }

    /// Builds from a spec such as `{"kind": "chain", "n": 3}`.
    #[staticmethod]
    fn build(spec: &str) -> PyResult<Self> {
        let spec: BuildSpec = serde_json::from_str(spec).map_err(err)?;
        Ok(Self { inner: build_standard_category(&spec).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.objects().map(|x| self.inner.obj_name(x).to_string()).collect()
    }

    #[getter]
    fn morphisms(&self) -> Vec<String> {
        self.inner.morphisms().map(|f| self.inner.mor_name(f).to_string()).collect()
    }

    fn hom(&self, x: &str, y: &str) -> PyResult<Vec<String>> {
        let (a, b) = (self.inner.obj(x).map_err(err)?, self.inner.obj(y).map_err(err)?);
        Ok(self.inner.hom(a, b).iter().map(|&f| self.inner.mor_name(f).to_string()).collect())
    }

    fn flags(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report(py, &self.inner.flags())
    }

    fn __repr__(&self) -> String {
        format!("Category({} objects, {} morphisms)", self.inner.num_objects(), self.inner.num_morphisms())
    }
}

/// A cover rule on a category; not necessarily a topology.
#[pyclass(name = "Topology", module = "finsite_py", skip_from_py_object)]
#[derive(Clone)]
struct PyTopology {
    category: FiniteCategory,
    rule: CoverRule,
}

impl PyTopology {
    fn certified(&self) -> PyResult<GrothendieckTopology> {
        GrothendieckTopology::certify(&self.category, self.rule.clone()).map_err(err)
    }
}

#[pymethods]
impl PyTopology {
    /// `{"covers": {object: [[member, ...], ...]}}`.
    #[staticmethod]
    fn from_json(category: &PyCategory, text: &str) -> PyResult<Self> {
        let doc: TopologyDoc = serde_json::from_str(text).map_err(err)?;
        let rule = CoverRule::from_doc(&category.inner, &doc).map_err(err)?;
        Ok(Self { category: category.inner.clone(), rule })
    }

    /// `trivial`, `dense`, `maximal` or `atomic`.
    #[staticmethod]
    fn named(category: &PyCategory, name: &str) -> PyResult<Self> {
        let kind = NamedTopology::parse(name).ok_or_else(|| err(format!("unknown topology {name:?}")))?;
        let t = named_topology(&category.inner, kind).map_err(err)?;
        Ok(Self { category: category.inner.clone(), rule: t.into_rule() })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.rule.to_doc(&self.category)).expect("rule serializes")
    }

    fn covers(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report(py, &self.rule.to_doc(&self.category).covers)
    }

    /// Maximal, stability and transitivity checks with witnesses.
    fn check(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report(py, &check_axioms(&self.category, &self.rule).map_err(err)?)
    }

    fn is_topology(&self) -> PyResult<bool> {
        Ok(check_axioms(&self.category, &self.rule).map_err(err)?.is_topology())
    }

    fn is_rigid(&self) -> PyResult<bool> {
        Ok(rigidity(&self.category, &self.certified()?).rigid)
    }

    fn irreducible(&self) -> PyResult<Vec<String>> {
        let r = rigidity(&self.category, &self.certified()?);
        Ok(r.irreducible.iter().map(|&x| self.category.obj_name(x).to_string()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Topology({})", self.rule.key(&self.category))
    }
}

/// A module over a category with coefficients in `Q` or `F_p`.
#[pyclass(name = "Module", module = "finsite_py", skip_from_py_object)]
#[derive(Clone)]
struct PyModuleRep {
    category: FiniteCategory,
    inner: KModule,
}

#[pymethods]
impl PyModuleRep {
    #[staticmethod]
    fn from_json(category: &PyCategory, text: &str) -> PyResult<Self> {
        let inner = KModule::from_json(&category.inner, text).map_err(err)?;
        Ok(Self { category: category.inner.clone(), inner })
    }

    #[staticmethod]
    #[pyo3(signature = (category, field = "Q", seed = 0, max_dim = 2))]
    fn random(category: &PyCategory, field: &str, seed: u64, max_dim: usize) -> PyResult<Self> {
        let inner = random_module(&category.inner, parse_field(field)?, seed, max_dim);
        Ok(Self { category: category.inner.clone(), inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_doc(&self.category)).expect("module serializes")
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Module({} over {})", self.dims_text(), self.inner.field().name())
    }
}

impl PyModuleRep {
    fn dims_text(&self) -> String {
        let parts: Vec<String> = self
            .category
            .objects()
            .map(|x| format!("{}:{}", self.category.obj_name(x), self.inner.dim(x)))
            .collect();
        parts.join(", ")
    }
}

/// All topologies, named ones first.
#[pyfunction]
fn enumerate(category: &PyCategory) -> PyResult<Vec<(String, PyTopology)>> {
    let list = enumerate_topologies(&category.inner, &Budget::default()).map_err(err)?;
    Ok(label_topologies(&category.inner, &list)
        .into_iter()
        .map(|(label, t)| (label, PyTopology { category: category.inner.clone(), rule: t.into_rule() }))
        .collect())
}

/// The cover table and the torsion pair table as text.
#[pyfunction]
fn census_tables(category: &PyCategory) -> PyResult<(String, String)> {
    let c = &category.inner;
    let list = enumerate_topologies(c, &Budget::default()).map_err(err)?;
    Ok((render_topology_table(c, &topology_table(c, &list)), render_torsion_table(&torsion_pair_table(c, &list))))
}

#[pyfunction]
fn torsion_class(py: Python<'_>, topology: &PyTopology, module: &PyModuleRep) -> PyResult<Py<PyAny>> {
    report(py, &finsite::torsion::torsion_class(&topology.category, &topology.rule, &module.inner).map_err(err)?)
}

#[pyfunction]
fn torsion_submodule(topology: &PyTopology, module: &PyModuleRep) -> PyResult<PyModuleRep> {
    let part = finsite::torsion::torsion_submodule(&topology.category, &topology.rule, &module.inner).map_err(err)?;
    Ok(PyModuleRep { category: topology.category.clone(), inner: part.module })
}

#[pyfunction]
#[pyo3(signature = (topology, field = "F2", samples = 50, seed = 0))]
fn verify_torsion_pair(py: Python<'_>, topology: &PyTopology, field: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let r = finsite::torsion::verify_torsion_pair(&topology.category, &topology.rule, parse_field(field)?, samples, seed)
        .map_err(err)?;
    report(py, &r)
}

#[pyfunction]
fn nullstellensatz_roundtrip(py: Python<'_>, topology: &PyTopology, p: u64) -> PyResult<Py<PyAny>> {
    report(py, &finsite::torsion::nullstellensatz_roundtrip(&topology.category, &topology.rule, p).map_err(err)?)
}

#[pyfunction]
fn sheaf_verdict(py: Python<'_>, topology: &PyTopology, module: &PyModuleRep) -> PyResult<Py<PyAny>> {
    report(py, &finsite::sheaves::sheaf_verdict(&topology.category, &topology.rule, &module.inner).map_err(err)?)
}

/// The sheafification and whether it passed its own checks.
#[pyfunction]
fn sheafify(topology: &PyTopology, module: &PyModuleRep) -> PyResult<(PyModuleRep, bool)> {
    let s = finsite::sheaves::sheafify(&topology.category, &topology.rule, &module.inner).map_err(err)?;
    let ok = s.verified();
    Ok((PyModuleRep { category: topology.category.clone(), inner: s.module }, ok))
}

#[pyfunction]
#[pyo3(signature = (topology, field = "Q", samples = 20, seed = 0))]
fn verify_rigid_equivalence(py: Python<'_>, topology: &PyTopology, field: &str, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let j = topology.certified()?;
    let r = finsite::sheaves::verify_rigid_equivalence(&topology.category, &j, parse_field(field)?, samples, seed)
        .map_err(err)?;
    report(py, &r)
}

/// Validates a spec document given as JSON text.
#[pyfunction]
fn typen_validate(py: Python<'_>, spec: &str) -> PyResult<Py<PyAny>> {
    let spec = DSpec::from_json(spec).map_err(err)?;
    report(py, &validate_spec(&spec))
}

/// Number of generic and nongeneric specs with indicator length `n`.
#[pyfunction]
fn typen_census(n: usize) -> PyResult<(usize, usize)> {
    if n > 20 {
        return Err(err("horizon above 20"));
    }
    let c = spec_census(n);
    Ok((c.generic.len(), c.nongeneric.len()))
}

/// `(object, rank)` of the pullback of `S(object, rank)`; `rank = None` is the empty sieve.
#[pyfunction]
#[pyo3(signature = (object, rank, degree))]
fn typen_pullback(object: usize, rank: Option<usize>, degree: usize) -> (usize, Option<usize>) {
    let p = symbolic_pullback(SymbolicSieve { object, rank }, degree);
    (p.object, p.rank)
}

#[pymodule]
fn finsite_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCategory>()?;
    m.add_class::<PyTopology>()?;
    m.add_class::<PyModuleRep>()?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(census_tables, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_class, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_submodule, m)?)?;
    m.add_function(wrap_pyfunction!(verify_torsion_pair, m)?)?;
    m.add_function(wrap_pyfunction!(nullstellensatz_roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(sheaf_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(sheafify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rigid_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(typen_validate, m)?)?;
    m.add_function(wrap_pyfunction!(typen_census, m)?)?;
    m.add_function(wrap_pyfunction!(typen_pullback, m)?)?;
    Ok(())
}
