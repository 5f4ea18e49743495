use homfill_core::cayley::{h1_evidence, relative_cayley_complex, CayleyBall};
use homfill_core::cube::{fellow_travel, fill_loop_cubical, normal_cube_path, CubeBall as CoreCubeBall};
use homfill_core::filling::{delta_ab_table, fa_table, harea, superadditive_closure, FaMode, FillingTable, HareaOptions, TableOptions};
use homfill_core::flag::{spherical_double, FlagComplex as CoreFlag};
use homfill_core::leary::{leary_presentation, raag_presentation};
use homfill_core::library::{builtin as core_builtin, Builtin};
use homfill_core::oracle::EqualityOracle;
use homfill_core::small_cancellation::{c_prime_check, Ratio};
use homfill_core::{Error, Presentation as CorePresentation, TwoComplex as CoreComplex};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::{json, Value};

create_exception!(homfill, ResourceError, PyRuntimeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Resource { .. } => ResourceError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn oracle_of(spec: &str, p: &CorePresentation) -> PyResult<EqualityOracle> {
    let v: Value = serde_json::from_str(spec).map_err(|e| PyValueError::new_err(format!("oracle JSON: {e}")))?;
    EqualityOracle::from_spec(&v, p).map_err(err)
}

fn table_json(t: &FillingTable) -> Value {
    Value::Array(t.entries.iter().map(|e| json!({"n": e.n, "value": e.value, "status": e.status, "witness": e.witness})).collect())
}

/// A finite group presentation.
#[pyclass(frozen)]
struct Presentation {
    inner: CorePresentation,
}

#[pymethods]
impl Presentation {
    #[new]
    fn new(generators: Vec<String>, relators: Vec<String>) -> PyResult<Self> {
        let words = relators
            .iter()
            .map(|r| homfill_core::presentation::parse_word(&generators, r))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        CorePresentation::new(generators, words).map(|inner| Presentation { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CorePresentation::from_json_str(text).map(|inner| Presentation { inner }).map_err(err)
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators().to_vec()
    }

    #[getter]
    fn relators(&self) -> Vec<String> {
        self.inner.relators().iter().map(|r| self.inner.render(r)).collect()
    }

    fn complex(&self) -> TwoComplex {
        TwoComplex { inner: self.inner.presentation_complex() }
    }

    #[pyo3(signature = (lambda_ = "1/6"))]
    fn c_prime_check<'py>(&self, py: Python<'py>, lambda_: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = Ratio::parse(lambda_).map_err(err)?;
        to_py(py, &serde_json::to_value(c_prime_check(&self.inner, r)).expect("report serialises"))
    }

    /// Homological area of a loop at the identity, filled in the radius ball.
    fn harea<'py>(&self, py: Python<'py>, oracle: &str, radius: usize, word: &str) -> PyResult<Bound<'py, PyAny>> {
        let o = oracle_of(oracle, &self.inner)?;
        let w = self.inner.parse_word(word).map_err(err)?;
        let ball = CayleyBall::build(&self.inner, &o, radius).map_err(err)?;
        let x = relative_cayley_complex(&ball, self.inner.relators()).map_err(err)?.complex;
        let gamma = ball.walk_chain(0, &w).ok_or_else(|| err(Error::Radius { required: w.len(), actual: radius }))?;
        let opts = HareaOptions { complete: ball.is_complete(), support_radius: Some(radius), ..HareaOptions::default() };
        to_py(py, &harea(&x, &gamma, &opts).map_err(err)?.to_json())
    }

    #[pyo3(signature = (oracle, n_max, radius, jobs = 1))]
    fn delta_ab<'py>(&self, py: Python<'py>, oracle: &str, n_max: usize, radius: usize, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
        let o = oracle_of(oracle, &self.inner)?;
        let opts = TableOptions { jobs: jobs.max(1), ..TableOptions::default() };
        to_py(py, &table_json(&delta_ab_table(&self.inner, &o, n_max, radius, &opts).map_err(err)?))
    }

    #[pyo3(signature = (oracle, n_max, radius, direct = false, jobs = 1))]
    fn fa_table<'py>(&self, py: Python<'py>, oracle: &str, n_max: usize, radius: usize, direct: bool, jobs: usize) -> PyResult<Bound<'py, PyAny>> {
        let o = oracle_of(oracle, &self.inner)?;
        let mode = if direct { FaMode::DirectCycles } else { FaMode::ViaClosure };
        let opts = TableOptions { jobs: jobs.max(1), ..TableOptions::default() };
        to_py(py, &table_json(&fa_table(&self.inner, &o, n_max, radius, mode, &opts).map_err(err)?))
    }

    fn h1_evidence<'py>(&self, py: Python<'py>, oracle: &str, radius: usize, max_len: usize) -> PyResult<Bound<'py, PyAny>> {
        let o = oracle_of(oracle, &self.inner)?;
        let e = h1_evidence(&self.inner, &o, radius, max_len).map_err(err)?;
        to_py(py, &serde_json::to_value(e).expect("evidence serialises"))
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.to_json()).expect("presentation serialises"))
    }

    fn __repr__(&self) -> String {
        format!("Presentation({} generators, {} relators)", self.inner.ngens(), self.inner.relators().len())
    }
}

/// A combinatorial 2-complex.
#[pyclass(frozen)]
struct TwoComplex {
    inner: CoreComplex,
}

#[pymethods]
impl TwoComplex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreComplex::from_json_str(text).map(|inner| TwoComplex { inner }).map_err(err)
    }

    fn homology<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.homology()).expect("homology serialises"))
    }

    fn euler_characteristic(&self) -> i64 {
        self.inner.euler_characteristic()
    }

    fn f_vector(&self) -> (usize, usize, usize) {
        (self.inner.vertices().len(), self.inner.edges().len(), self.inner.faces().len())
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.to_json()).expect("complex serialises"))
    }
}

/// A finite simplicial complex, usually flag.
#[pyclass(frozen)]
struct FlagComplex {
    inner: CoreFlag,
}

#[pymethods]
impl FlagComplex {
    #[new]
    #[pyo3(signature = (vertices, simplices, flag_closure = true))]
    fn new(vertices: Vec<String>, simplices: Vec<Vec<String>>, flag_closure: bool) -> PyResult<Self> {
        CoreFlag::new(vertices, simplices, flag_closure).map(|inner| FlagComplex { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        CoreFlag::from_json_str(text).map(|inner| FlagComplex { inner }).map_err(err)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().to_vec()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.report()).expect("report serialises"))
    }

    fn spherical_double(&self) -> FlagComplex {
        FlagComplex { inner: spherical_double(&self.inner) }
    }

    fn raag_presentation(&self) -> PyResult<Presentation> {
        raag_presentation(&self.inner).map(|inner| Presentation { inner }).map_err(err)
    }

    /// Returns the presentation and its relator-family counts.
    fn leary_presentation<'py>(&self, py: Python<'py>, s: Vec<i64>) -> PyResult<(Presentation, Bound<'py, PyAny>)> {
        let lp = leary_presentation(&self.inner, &s).map_err(err)?;
        let info = to_py(py, &serde_json::to_value(&lp).expect("Leary presentation serialises"))?;
        Ok((Presentation { inner: lp.presentation }, info))
    }

    fn two_skeleton(&self) -> TwoComplex {
        TwoComplex { inner: self.inner.two_skeleton() }
    }

    fn to_json<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &serde_json::to_value(self.inner.to_json()).expect("flag complex serialises"))
    }

    fn __repr__(&self) -> String {
        format!("FlagComplex(f_vector={:?})", self.inner.f_vector())
    }
}

/// Ball in the universal cover of the Salvetti complex of a flag complex.
#[pyclass(frozen)]
struct CubeBall {
    inner: CoreCubeBall,
}

impl CubeBall {
    fn at(&self, v: &str) -> PyResult<usize> {
        self.inner.vertex(v).map_err(err)
    }
}

#[pymethods]
impl CubeBall {
    #[new]
    fn new(l: &FlagComplex, radius: usize) -> PyResult<Self> {
        CoreCubeBall::build(&l.inner, radius).map(|inner| CubeBall { inner }).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn distance(&self, v: &str, w: &str) -> PyResult<usize> {
        Ok(self.inner.distance(self.at(v)?, self.at(w)?))
    }

    fn height(&self, v: &str) -> PyResult<i64> {
        Ok(self.inner.height(self.at(v)?))
    }

    fn normal_cube_path<'py>(&self, py: Python<'py>, v: &str, w: &str) -> PyResult<Bound<'py, PyAny>> {
        let p = normal_cube_path(&self.inner, self.at(v)?, self.at(w)?).map_err(err)?;
        to_py(py, &p.to_json(&self.inner))
    }

    #[pyo3(signature = (w_prime, w, v = "1", rho = None))]
    fn fellow_travel<'py>(&self, py: Python<'py>, w_prime: &str, w: &str, v: &str, rho: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
        let (v, wp, w) = (self.at(v)?, self.at(w_prime)?, self.at(w)?);
        let rho = match rho {
            Some(r) => self.inner.presentation().parse_word(r).map_err(err)?,
            None => normal_cube_path(&self.inner, v, wp).map_err(err)?.carried_geodesic(),
        };
        to_py(py, &fellow_travel(&self.inner, v, wp, w, &rho).map_err(err)?.to_json(&self.inner))
    }

    #[pyo3(signature = (word, base = "1"))]
    fn fill_loop<'py>(&self, py: Python<'py>, word: &str, base: &str) -> PyResult<Bound<'py, PyAny>> {
        let alpha = self.inner.presentation().parse_word(word).map_err(err)?;
        to_py(py, &fill_loop_cubical(&self.inner, self.at(base)?, &alpha).map_err(err)?.to_json())
    }

    /// `(full, ascending, descending)` links at `v`.
    #[pyo3(signature = (v = "1"))]
    fn morse_links(&self, v: &str) -> PyResult<(FlagComplex, FlagComplex, FlagComplex)> {
        let m = self.inner.morse_links(self.at(v)?).map_err(err)?;
        Ok((FlagComplex { inner: m.full }, FlagComplex { inner: m.ascending }, FlagComplex { inner: m.descending }))
    }
}

/// A named presentation, flag complex or 2-complex.
#[pyfunction]
#[pyo3(signature = (name, m = None))]
fn builtin<'py>(py: Python<'py>, name: &str, m: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
    Ok(match core_builtin(name, m).map_err(err)? {
        Builtin::Presentation(inner) => Bound::new(py, Presentation { inner })?.into_any(),
        Builtin::Flag { complex, .. } => Bound::new(py, FlagComplex { inner: complex })?.into_any(),
        Builtin::Complex(inner) => Bound::new(py, TwoComplex { inner })?.into_any(),
    })
}

#[pyfunction]
#[pyo3(name = "superadditive_closure")]
fn superadditive_closure_py(values: Vec<u64>) -> Vec<u64> {
    superadditive_closure(&values)
}

#[pymodule]
fn homfill(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_class::<TwoComplex>()?;
    m.add_class::<FlagComplex>()?;
    m.add_class::<CubeBall>()?;
    m.add_function(wrap_pyfunction!(builtin, m)?)?;
    m.add_function(wrap_pyfunction!(superadditive_closure_py, m)?)?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    Ok(())
}
