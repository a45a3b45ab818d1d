//! Python bindings. Reports cross the boundary as plain dicts and lists built
//! from the same serialization the command-line tool emits.

use fedder_core::census::{census, CensusError, CensusMode, CensusSpace, CensusSpec};
use fedder_core::classify::{classify_with_bound, lemma_predicate, ClassifyError};
use fedder_core::dp1::{
    complete_square_cube, discriminant, j_invariant, smoothness, DP1Equation, DP1Record, DiscriminantPath, Dp1Error,
    DEFAULT_SEARCH_BOUND,
};
use fedder_core::fedder::{is_fsplit_hypersurface, FedderError as CoreFedderError};
use fedder_core::fields::{make_field, FieldError};
use fedder_core::mpoly::{parse_dp1, parse_poly, Alphabet, BinaryForm, PolyError};
use fedder_core::pgl2::{la5_normalize as la5, Pgl2Error};
use fedder_core::unifactor::{roots as root_divisor, splitting_degree, RootError};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(fedder, FedderError, PyValueError, "Base class of fedder errors.");
create_exception!(fedder, ParseError, FedderError, "Malformed input; `args[1]` is the byte offset when known.");
create_exception!(fedder, MathError, FedderError, "Well-formed input on which the computation is undefined.");

fn parse_err(msg: String, offset: Option<usize>) -> PyErr {
    ParseError::new_err((msg, offset))
}

fn math_err(e: impl ToString) -> PyErr {
    MathError::new_err(e.to_string())
}

fn poly_err(e: PolyError) -> PyErr {
    let offset = match &e {
        PolyError::Syntax { offset, .. } | PolyError::UnknownVariable { offset, .. } | PolyError::Coefficient { offset, .. } => {
            Some(*offset)
        }
        _ => None,
    };
    parse_err(e.to_string(), offset)
}

fn field_err(e: FieldError) -> PyErr {
    match e {
        FieldError::Parse { offset, .. } => parse_err(e.to_string(), Some(offset)),
        FieldError::NotPrime(_) | FieldError::DegreeOutOfRange(_) => parse_err(e.to_string(), None),
        e => math_err(e),
    }
}

fn dp1_err(e: Dp1Error) -> PyErr {
    match e {
        Dp1Error::Poly(e) => poly_err(e),
        Dp1Error::Field(e) => field_err(e),
        Dp1Error::Shape(_) | Dp1Error::Degree { .. } => parse_err(e.to_string(), None),
        e => math_err(e),
    }
}

fn pgl2_err(e: Pgl2Error) -> PyErr {
    match e {
        Pgl2Error::Dp1(e) => dp1_err(e),
        e => math_err(e),
    }
}

fn root_err(e: RootError) -> PyErr {
    math_err(e)
}

fn classify_err(e: ClassifyError) -> PyErr {
    math_err(e)
}

fn fedder_err(e: CoreFedderError) -> PyErr {
    match e {
        CoreFedderError::Poly(e) => poly_err(e),
        e => math_err(e),
    }
}

fn census_err(e: CensusError) -> PyErr {
    match e {
        CensusError::Field(e) => field_err(e),
        e => math_err(e),
    }
}

/// Converts through JSON text so the Python view matches the CLI documents.
fn to_py<'py>(py: Python<'py>, v: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(math_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// The finite field `F_(p^n)`.
#[pyclass(frozen, skip_from_py_object, name = "Field", module = "fedder")]
#[derive(Clone)]
pub struct PyField {
    inner: fedder_core::fields::Field,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, n = 1))]
    fn new(p: u64, n: usize) -> PyResult<Self> {
        Ok(PyField { inner: make_field(p, n).map_err(field_err)? })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn order(&self) -> u128 {
        self.inner.order()
    }

    /// Canonical rendering of an element given as text.
    fn normalize(&self, elem: &str) -> PyResult<String> {
        let e = self.inner.parse_elem(elem).map_err(field_err)?;
        Ok(self.inner.format_elem(e))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner)
    }
}

/// `y^2 + a1 x y + a3 y - (x^3 + a2 x^2 + a4 x + a6)` in `P(1,1,2,3)`.
#[pyclass(frozen, skip_from_py_object, name = "DP1Equation", module = "fedder")]
#[derive(Clone)]
pub struct PyDP1Equation {
    inner: DP1Equation,
}

#[pymethods]
impl PyDP1Equation {
    /// Parses a sextic expression in `s, t, x, y`.
    #[new]
    fn new(text: &str, field: &PyField) -> PyResult<Self> {
        Ok(PyDP1Equation { inner: DP1Equation::parse(text, &field.inner).map_err(dp1_err)? })
    }

    /// Parses `a1: c0 c1` coefficient lines.
    #[staticmethod]
    fn from_coefficients(text: &str, field: &PyField) -> PyResult<Self> {
        Ok(PyDP1Equation { inner: DP1Equation::parse_coefficients(text, &field.inner).map_err(dp1_err)? })
    }

    /// Coefficient lists `[c0, ..., cd]` for `a1, a2, a3, a4, a6`, entries as text.
    #[staticmethod]
    fn from_forms(forms: [Vec<String>; 5], field: &PyField) -> PyResult<Self> {
        let record = DP1Record {
            field: field.inner.desc().clone(),
            a1: forms[0].clone(),
            a2: forms[1].clone(),
            a3: forms[2].clone(),
            a4: forms[3].clone(),
            a6: forms[4].clone(),
        };
        Ok(PyDP1Equation { inner: DP1Equation::from_record(&record).map_err(dp1_err)? })
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    /// Forms as strings, keyed `a1` .. `a6`.
    fn forms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.to_record())
    }

    /// The equation after completing the square and the cube.
    fn normalized(&self) -> PyDP1Equation {
        PyDP1Equation { inner: complete_square_cube(&self.inner) }
    }

    fn is_fsplit(&self) -> PyResult<bool> {
        Ok(is_fsplit_hypersurface(&self.inner.to_poly()).map_err(fedder_err)?.f_split)
    }

    fn lemma_predicate(&self) -> PyResult<bool> {
        Ok(lemma_predicate(&self.inner).map_err(classify_err)?.holds)
    }

    /// Discriminant form; `formulaire=True` selects the b-invariant path.
    #[pyo3(signature = (formulaire = false))]
    fn discriminant(&self, formulaire: bool) -> PyResult<String> {
        let path = if formulaire { DiscriminantPath::Formulaire } else { DiscriminantPath::Paper };
        Ok(discriminant(&complete_square_cube(&self.inner), path).map_err(dp1_err)?.to_string())
    }

    /// `(numerator, discriminant)` of the j-invariant as form strings.
    fn j_invariant(&self) -> PyResult<(String, String)> {
        let j = j_invariant(&complete_square_cube(&self.inner)).map_err(dp1_err)?;
        Ok((j.numerator.to_string(), j.discriminant.to_string()))
    }

    #[pyo3(signature = (search_bound = DEFAULT_SEARCH_BOUND))]
    fn smoothness<'py>(&self, py: Python<'py>, search_bound: usize) -> PyResult<Bound<'py, PyAny>> {
        let eq = self.inner.clone();
        let report = py.detach(move || smoothness(&eq, search_bound));
        to_py(py, &report)
    }

    #[pyo3(signature = (search_bound = DEFAULT_SEARCH_BOUND))]
    fn classify<'py>(&self, py: Python<'py>, search_bound: usize) -> PyResult<Bound<'py, PyAny>> {
        let eq = self.inner.clone();
        let report = py.detach(move || classify_with_bound(&eq, search_bound)).map_err(classify_err)?;
        to_py(py, &report)
    }

    /// Substitutes `(s, t) -> M (s, t)`.
    fn transform(&self, m: &PyGL2Matrix) -> PyResult<PyDP1Equation> {
        Ok(PyDP1Equation { inner: m.inner.act_equation(&self.inner).map_err(pgl2_err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DP1Equation({:?}, {})", self.inner.to_string(), self.inner.field())
    }

    fn __eq__(&self, other: &PyDP1Equation) -> bool {
        self.inner == other.inner
    }
}

/// An invertible matrix `[[a, b], [c, d]]` acting on binary forms by substitution.
#[pyclass(frozen, skip_from_py_object, name = "GL2Matrix", module = "fedder")]
#[derive(Clone)]
pub struct PyGL2Matrix {
    inner: fedder_core::pgl2::GL2Matrix,
}

#[pymethods]
impl PyGL2Matrix {
    #[new]
    fn new(entries: [String; 4], field: &PyField) -> PyResult<Self> {
        let k = &field.inner;
        let e = entries.iter().map(|s| k.parse_elem(s)).collect::<Result<Vec<_>, _>>().map_err(field_err)?;
        Ok(PyGL2Matrix { inner: fedder_core::pgl2::GL2Matrix::new(k, e[0], e[1], e[2], e[3]).map_err(pgl2_err)? })
    }

    fn entries(&self) -> Vec<String> {
        let k = self.inner.field();
        self.inner.entries().iter().map(|&e| k.format_elem(e)).collect()
    }

    fn det(&self) -> String {
        self.inner.field().format_elem(self.inner.det())
    }

    fn inverse(&self) -> PyGL2Matrix {
        PyGL2Matrix { inner: self.inner.inverse() }
    }

    fn __matmul__(&self, other: &PyGL2Matrix) -> PyResult<PyGL2Matrix> {
        if self.inner.field() != other.inner.field() {
            return Err(math_err("matrices over different fields"));
        }
        Ok(PyGL2Matrix { inner: self.inner.mul(&other.inner) })
    }

    fn __repr__(&self) -> String {
        format!("GL2Matrix({})", self.inner)
    }
}

fn parse_form(text: &str, k: &fedder_core::fields::Field) -> PyResult<BinaryForm> {
    let f = parse_dp1(text, k).map_err(poly_err)?;
    let degree = f.terms().iter().map(|(m, _)| m.0[0] as usize + m.0[1] as usize).max().unwrap_or(0);
    BinaryForm::from_poly(&f, degree).map_err(poly_err)
}

/// Fedder's criterion for an arbitrary polynomial in the named variables.
/// Returns `(f_split, witness)`.
#[pyfunction]
fn is_fsplit(poly: &str, variables: Vec<String>, field: &PyField) -> PyResult<(bool, Option<String>)> {
    let alphabet = Alphabet::flat(&variables).map_err(poly_err)?;
    let f = parse_poly(poly, &field.inner, &alphabet).map_err(poly_err)?;
    let v = is_fsplit_hypersurface(&f).map_err(fedder_err)?;
    Ok((v.f_split, v.witness_string(&field.inner, &alphabet)))
}

/// Root divisor of a binary form in `s, t`: `(splitting degree, [(point, multiplicity)])`.
#[pyfunction]
fn roots(form: &str, field: &PyField) -> PyResult<(usize, Vec<(String, u32)>)> {
    let g = parse_form(form, &field.inner)?;
    let d = root_divisor(&g).map_err(root_err)?;
    let n = splitting_degree(&g).map_err(root_err)?;
    Ok((n, d.points().iter().map(|(p, m)| (p.to_string(), *m)).collect()))
}

/// Normalizes a form in the span of `s^(p+1), s^p t, s t^p, t^(p+1)` to a
/// multiple of `s^p t - s t^p`. Returns `(matrix, lambda)`.
#[pyfunction]
fn la5_normalize(form: &str, field: &PyField) -> PyResult<(PyGL2Matrix, String)> {
    let g = parse_form(form, &field.inner)?;
    let n = la5(&g, field.inner.characteristic()).map_err(pgl2_err)?;
    let lambda = n.lambda.0.format_elem(n.lambda.1);
    Ok((PyGL2Matrix { inner: n.matrix }, lambda))
}

/// Compares Fedder's verdict with the closed-form predicate over a coefficient
/// space. `samples=None` enumerates exhaustively.
#[pyfunction(name = "census")]
#[pyo3(signature = (p, degree = 1, space = "full", samples = None, seed = 0, workers = 1))]
fn run_census<'py>(
    py: Python<'py>,
    p: u32,
    degree: usize,
    space: &str,
    samples: Option<u64>,
    seed: u64,
    workers: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let space = match space {
        "full" => CensusSpace::Full,
        "normalized" => CensusSpace::Normalized,
        "a6-only" => CensusSpace::A6Only,
        other => return Err(parse_err(format!("unknown space `{other}`"), None)),
    };
    let mode = samples.map_or(CensusMode::Exhaustive, |count| CensusMode::Sample { count, seed });
    let spec = CensusSpec::new(p, degree, space, mode).with_workers(workers);
    let summary = py.detach(move || census(&spec)).map_err(census_err)?;
    to_py(py, &summary)
}

#[pymodule]
fn fedder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyField>()?;
    m.add_class::<PyDP1Equation>()?;
    m.add_class::<PyGL2Matrix>()?;
    m.add_function(wrap_pyfunction!(is_fsplit, m)?)?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(la5_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(run_census, m)?)?;
    m.add("FedderError", py.get_type::<FedderError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("MathError", py.get_type::<MathError>())?;
    Ok(())
}
