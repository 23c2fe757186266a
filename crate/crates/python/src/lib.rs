//! Python bindings: problems, critical points, parametrizations, lifting
//! fibers and the polar-degree bounds.

use polarcrit_core::bounds::{self, delta_of_variety, DeltaVector};
use polarcrit_core::critpoints::{self, algorithm1, crit_points_direct, CritResult, Route};
use polarcrit_core::geores::{build_lifting_fiber, extend_fiber, validate_fiber, LiftingFiber, RationalParametrization};
use polarcrit_core::parse::parse_poly;
use polarcrit_core::polar::{crit_ideal, DirectionSequence};
use polarcrit_core::problem::{parse_field_spec, Problem, ProblemFile};
use polarcrit_core::{Error, FieldSpec, PrimeField, Rationals};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(polarcrit, PolarcritError, PyException, "Base class for library errors.");
create_exception!(polarcrit, ParseError, PolarcritError, "Malformed polynomial, field or problem text.");
create_exception!(polarcrit, FailError, PolarcritError, "A probabilistic routine failed after its reseed.");

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Syntax { .. } | Error::UnknownVariable(_) | Error::Coefficient(_) | Error::Field(_) | Error::Format(_) => {
            ParseError::new_err(msg)
        }
        Error::Fail(_) | Error::Unstable(_) => FailError::new_err(msg),
        _ => PolarcritError::new_err(msg),
    }
}

/// Converts through JSON into plain Python dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PolarcritError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn delta_vector(values: Vec<u128>) -> PyResult<DeltaVector> {
    DeltaVector::new(values).map_err(py_err)
}

enum AnyProblem {
    Q(Problem<Rationals>),
    P(Problem<PrimeField>),
}

enum AnyParam {
    Q(RationalParametrization<Rationals>),
    P(RationalParametrization<PrimeField>),
}

enum AnyFiber {
    Q(LiftingFiber<Rationals>),
    P(LiftingFiber<PrimeField>),
}

macro_rules! each {
    ($value:expr, $enum:ident, $x:ident => $body:expr) => {
        match $value {
            $enum::Q($x) => $body,
            $enum::P($x) => $body,
        }
    };
}

/// A variety `V(gens)` of dimension `dim`, with an optional objective.
#[pyclass(frozen, name = "Problem")]
struct PyProblem {
    file: ProblemFile,
    inner: AnyProblem,
}

impl PyProblem {
    fn build(mut file: ProblemFile, field: Option<&str>) -> PyResult<Self> {
        if let Some(f) = field {
            file.field = Some(parse_field_spec(f).map_err(py_err)?);
        }
        let inner = match file.field.unwrap_or_default() {
            FieldSpec::Rationals => AnyProblem::Q(file.instantiate(Rationals).map_err(py_err)?),
            FieldSpec::Prime { modulus } => {
                AnyProblem::P(file.instantiate(PrimeField::new(modulus).map_err(py_err)?).map_err(py_err)?)
            }
        };
        Ok(PyProblem { file, inner })
    }
}

fn crit_with<F: polarcrit_core::Field>(
    p: &Problem<F>,
    route: &str,
    objective: Option<&str>,
    seed: u64,
) -> polarcrit_core::Result<CritResult<F>> {
    let g = match objective {
        Some(text) => parse_poly(text, &p.ring)?,
        None => p.objective()?.clone(),
    };
    match route {
        "algorithm1" => algorithm1(&p.variety, &g, seed),
        "direct" => crit_points_direct(&p.variety, &g, seed),
        other => Err(Error::Format(format!("unknown route {other:?}; use algorithm1 or direct"))),
    }
}

fn check_against<F: polarcrit_core::Field>(
    p: &Problem<F>,
    param: &RationalParametrization<F>,
) -> polarcrit_core::Result<polarcrit_core::geores::ParamReport> {
    if param.ring().vars() != p.ring.vars() {
        return Err(Error::Format("the parametrization uses other variables".into()));
    }
    let polys = match &p.objective {
        Some(g) => crit_ideal(&p.variety, g, &DirectionSequence::empty(p.ring.field(), p.ring.nvars()), 0)?,
        None => p.variety.generators().to_vec(),
    };
    Ok(param.check(&polys))
}

#[pymethods]
impl PyProblem {
    #[new]
    #[pyo3(signature = (vars, gens, dim, objective=None, field=None))]
    fn new(vars: Vec<String>, gens: Vec<String>, dim: usize, objective: Option<String>, field: Option<&str>) -> PyResult<Self> {
        let file = ProblemFile {
            vars,
            gens,
            dim: Some(dim),
            objective,
            ..Default::default()
        };
        Self::build(file, field)
    }

    /// Parses problem-file text (FIELD / VARS / DIM / GENS / OBJECTIVE / DELTA).
    #[staticmethod]
    #[pyo3(signature = (text, field=None))]
    fn parse(text: &str, field: Option<&str>) -> PyResult<Self> {
        Self::build(ProblemFile::parse(text).map_err(py_err)?, field)
    }

    #[staticmethod]
    #[pyo3(signature = (path, field=None))]
    fn load(path: &str, field: Option<&str>) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ParseError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text, field)
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.file.vars.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.file.dim.unwrap_or(0)
    }

    #[getter]
    fn field(&self) -> String {
        self.file.field.unwrap_or_default().to_string()
    }

    #[getter]
    fn objective(&self) -> Option<String> {
        each!(&self.inner, AnyProblem, p => p.objective.as_ref().map(|g| g.to_string()))
    }

    #[getter]
    fn gens(&self) -> Vec<String> {
        each!(&self.inner, AnyProblem, p => p.variety.generators().iter().map(|g| g.to_string()).collect())
    }

    /// Generic polar degrees `(δ_1, …, δ_{d+1})`.
    #[pyo3(signature = (seed=1))]
    fn delta(&self, py: Python<'_>, seed: u64) -> PyResult<Vec<u128>> {
        let d = py.detach(|| each!(&self.inner, AnyProblem, p => delta_of_variety(&p.variety, seed)));
        Ok(d.map_err(py_err)?.values().to_vec())
    }

    /// Critical points of the objective (or of `objective`).
    #[pyo3(signature = (route="algorithm1", seed=1, objective=None))]
    fn crit(&self, py: Python<'_>, route: &str, seed: u64, objective: Option<&str>) -> PyResult<PyCritResult> {
        py.detach(|| match &self.inner {
            AnyProblem::Q(p) => crit_with(p, route, objective, seed).map(|r| PyCritResult::from_result(r, AnyParam::Q)),
            AnyProblem::P(p) => crit_with(p, route, objective, seed).map(|r| PyCritResult::from_result(r, AnyParam::P)),
        })
        .map_err(py_err)
    }

    #[pyo3(signature = (seed=1))]
    fn check_hypotheses(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        let report = each!(&self.inner, AnyProblem, p => {
            let g = p.objective().map_err(py_err)?;
            py.detach(|| critpoints::check_hypotheses(&p.variety, g, seed)).map_err(py_err)?
        });
        to_py(py, &report)
    }

    /// Count against the polar-degree bound.
    #[pyo3(signature = (seed=1))]
    fn verify_bound(&self, py: Python<'_>, seed: u64) -> PyResult<Py<PyAny>> {
        let report = each!(&self.inner, AnyProblem, p => {
            let g = p.objective().map_err(py_err)?;
            py.detach(|| critpoints::verify_bound(&p.variety, g, seed)).map_err(py_err)?
        });
        to_py(py, &report)
    }

    #[pyo3(signature = (seed=1))]
    fn fiber(&self, seed: u64) -> PyResult<PyLiftingFiber> {
        let inner = match &self.inner {
            AnyProblem::Q(p) => AnyFiber::Q(build_lifting_fiber(&p.variety, seed).map_err(py_err)?),
            AnyProblem::P(p) => AnyFiber::P(build_lifting_fiber(&p.variety, seed).map_err(py_err)?),
        };
        Ok(PyLiftingFiber { inner })
    }

    /// Validates `param` against the critical ideal (or the variety when
    /// there is no objective).
    fn check(&self, py: Python<'_>, param: &PyParametrization) -> PyResult<Py<PyAny>> {
        let report = match (&self.inner, &param.inner) {
            (AnyProblem::Q(p), AnyParam::Q(x)) => check_against(p, x),
            (AnyProblem::P(p), AnyParam::P(x)) => check_against(p, x),
            _ => Err(Error::Field("the parametrization lives over another field".into())),
        }
        .map_err(py_err)?;
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!("Problem(vars={:?}, dim={}, field={})", self.file.vars, self.dim(), self.field())
    }
}

/// `q(T) = 0, q'(T)·X_i = v_i(T)` with separating form `lambda`.
#[pyclass(frozen, name = "Parametrization")]
struct PyParametrization {
    inner: AnyParam,
}

#[pymethods]
impl PyParametrization {
    /// Rebuilds a parametrization from the dict produced by `to_dict`.
    #[staticmethod]
    fn from_dict(py: Python<'_>, data: Bound<'_, PyAny>) -> PyResult<Self> {
        let text: String = py.import("json")?.call_method1("dumps", (data,))?.extract()?;
        let data: polarcrit_core::geores::ParametrizationData =
            serde_json::from_str(&text).map_err(|e| ParseError::new_err(e.to_string()))?;
        let inner = match data.field {
            FieldSpec::Rationals => AnyParam::Q(RationalParametrization::from_data(&data, &Rationals).map_err(py_err)?),
            FieldSpec::Prime { modulus } => AnyParam::P(
                RationalParametrization::from_data(&data, &PrimeField::new(modulus).map_err(py_err)?).map_err(py_err)?,
            ),
        };
        Ok(PyParametrization { inner })
    }

    #[getter]
    fn degree(&self) -> usize {
        each!(&self.inner, AnyParam, p => p.degree())
    }

    #[getter]
    fn q(&self) -> String {
        each!(&self.inner, AnyParam, p => p.q().to_string())
    }

    #[getter]
    fn v(&self) -> Vec<String> {
        each!(&self.inner, AnyParam, p => p.v().iter().map(|x| x.to_string()).collect())
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &each!(&self.inner, AnyParam, p => p.to_data()))
    }

    fn __repr__(&self) -> String {
        format!("Parametrization(degree={})", self.degree())
    }
}

#[pyclass(frozen, name = "CritResult")]
struct PyCritResult {
    #[pyo3(get)]
    route: String,
    #[pyo3(get)]
    count: usize,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    reseeded: bool,
    #[pyo3(get)]
    seconds: f64,
    #[pyo3(get)]
    radical: Option<bool>,
    #[pyo3(get)]
    multiplicity_count: Option<usize>,
    #[pyo3(get)]
    warnings: Vec<String>,
    #[pyo3(get)]
    pairs_reduced: usize,
    param: Option<Py<PyParametrization>>,
}

impl PyCritResult {
    fn from_result<F: polarcrit_core::Field>(r: CritResult<F>, wrap: fn(RationalParametrization<F>) -> AnyParam) -> Self {
        PyCritResult {
            route: match r.route {
                Route::Algorithm1 => "algorithm1",
                Route::Direct => "direct",
            }
            .into(),
            count: r.count,
            seed: r.seed,
            reseeded: r.reseeded,
            seconds: r.seconds,
            radical: r.hypotheses.radical,
            multiplicity_count: r.hypotheses.multiplicity_count,
            warnings: r.hypotheses.warnings.clone(),
            pairs_reduced: r.gb_stats.pairs_reduced,
            param: r.parametrization.map(|p| {
                Python::attach(|py| Py::new(py, PyParametrization { inner: wrap(p) }).expect("allocation"))
            }),
        }
    }
}

#[pymethods]
impl PyCritResult {
    #[getter]
    fn parametrization(&self, py: Python<'_>) -> Option<Py<PyParametrization>> {
        self.param.as_ref().map(|p| p.clone_ref(py))
    }

    fn __repr__(&self) -> String {
        format!("CritResult(route={:?}, count={})", self.route, self.count)
    }
}

/// A lifting fiber `(H, M, z, u, Q, v)` of a variety.
#[pyclass(frozen, name = "LiftingFiber")]
struct PyLiftingFiber {
    inner: AnyFiber,
}

#[pymethods]
impl PyLiftingFiber {
    #[getter]
    fn degree(&self) -> usize {
        each!(&self.inner, AnyFiber, l => l.degree())
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &each!(&self.inner, AnyFiber, l => validate_fiber(l)))
    }

    /// Lifting fiber of the graph of `objective`.
    fn extend(&self, objective: &str) -> PyResult<Self> {
        let inner = match &self.inner {
            AnyFiber::Q(l) => AnyFiber::Q(extend_fiber(l, &parse_poly(objective, l.ring()).map_err(py_err)?).map_err(py_err)?),
            AnyFiber::P(l) => AnyFiber::P(extend_fiber(l, &parse_poly(objective, l.ring()).map_err(py_err)?).map_err(py_err)?),
        };
        Ok(PyLiftingFiber { inner })
    }

    fn to_dict(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &each!(&self.inner, AnyFiber, l => l.to_data()))
    }

    fn __repr__(&self) -> String {
        format!("LiftingFiber(degree={})", self.degree())
    }
}

/// The polar-degree bound on critical points for index `i`.
#[pyfunction]
#[pyo3(signature = (delta, degree, i=0))]
fn theorem1_bound(delta: Vec<u128>, degree: u32, i: usize) -> PyResult<u128> {
    bounds::theorem1_bound(&delta_vector(delta)?, degree, i).map_err(py_err)
}

/// The same bound through the bidegree product in `P^n × P^n`.
#[pyfunction]
#[pyo3(signature = (delta, n, degree, i=0))]
fn bound_via_bidegrees(delta: Vec<u128>, n: usize, degree: u32, i: usize) -> PyResult<u128> {
    bounds::bound_via_bidegrees(&delta_vector(delta)?, n, degree, i).map_err(py_err)
}

/// Bézout-type comparison bound for a complete intersection.
#[pyfunction]
fn naive_bound(degrees: Vec<u32>, degree: u32, n: usize, d: usize) -> PyResult<u128> {
    bounds::naive_bound(&degrees, degree, n, d).map_err(py_err)
}

#[pymodule]
fn polarcrit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PyParametrization>()?;
    m.add_class::<PyCritResult>()?;
    m.add_class::<PyLiftingFiber>()?;
    m.add_function(wrap_pyfunction!(theorem1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bound_via_bidegrees, m)?)?;
    m.add_function(wrap_pyfunction!(naive_bound, m)?)?;
    m.add("PolarcritError", m.py().get_type::<PolarcritError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("FailError", m.py().get_type::<FailError>())?;
    Ok(())
}
