//! Python bindings. Forms are `Polynomial` objects; rationals come back as
//! `p/q` strings and 1-PS as lists of integers.

use gitmilnor_core::milnor::{self, Normalization};
use gitmilnor_core::poly::parse_polynomial;
use gitmilnor_core::stability::{self as st, SearchConfig};
use gitmilnor_core::{Error, OnePs, Polynomial};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn one_ps(weights: Vec<i64>) -> PyResult<OnePs> {
    OnePs::new(weights).map_err(err)
}

fn unwrap_all(gens: Vec<PyRef<'_, PyPolynomial>>) -> Vec<Polynomial> {
    gens.iter().map(|g| g.inner.clone()).collect()
}

#[pyclass(name = "Polynomial", frozen, eq, skip_from_py_object, module = "gitmilnor")]
#[derive(Clone, PartialEq)]
pub struct PyPolynomial {
    inner: Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Parses `text`; `n` fixes the number of variables.
    #[new]
    #[pyo3(signature = (text, n=None))]
    fn new(text: &str, n: Option<usize>) -> PyResult<Self> {
        parse_polynomial(text, n).map(|inner| PyPolynomial { inner }).map_err(err)
    }

    #[getter]
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    /// Degree of a nonzero homogeneous form.
    #[getter]
    fn degree(&self) -> PyResult<u32> {
        self.inner.homogeneous_degree().map_err(err)
    }

    fn gradient(&self) -> Vec<PyPolynomial> {
        self.inner.gradient().into_iter().map(|inner| PyPolynomial { inner }).collect()
    }

    fn hessian(&self) -> PyResult<PyPolynomial> {
        self.inner.hessian().map(|inner| PyPolynomial { inner }).map_err(err)
    }

    /// `F(T x)` for a square matrix given as rational strings such as `"1/2"`.
    fn substitute(&self, rows: Vec<Vec<String>>) -> PyResult<PyPolynomial> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| {
                        gitmilnor_core::rational::parse_rational(v)
                            .ok_or_else(|| PyValueError::new_err(format!("'{v}' is not a rational")))
                    })
                    .collect::<PyResult<Vec<_>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        let t = gitmilnor_core::LinearChange::from_rows(rows).map_err(err)?;
        self.inner.substitute(&t).map(|inner| PyPolynomial { inner }).map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.inner)
    }
}

/// Span of the partials: `rank`, `degree` and an echelon `basis`; degenerate
/// forms report `status = "degenerate"` with a destabilizing `lambda` and `frame`.
#[pyfunction]
fn gradient_point<'py>(py: Python<'py>, form: &PyPolynomial) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match milnor::gradient_point(&form.inner) {
        Ok(w) => {
            d.set_item("status", "nondegenerate")?;
            d.set_item("rank", w.rank())?;
            d.set_item("degree", w.degree())?;
            d.set_item("basis", w.basis().iter().map(ToString::to_string).collect::<Vec<_>>())?;
        }
        Err(Error::DegenerateGradient { rank, certificate, .. }) => {
            d.set_item("status", "degenerate")?;
            d.set_item("rank", rank)?;
            d.set_item("lambda", certificate.lambda.weights().to_vec())?;
            let frame: Vec<Vec<String>> =
                certificate.frame.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            d.set_item("frame", frame)?;
        }
        Err(e) => return Err(err(e)),
    }
    Ok(d)
}

/// Weight of the initial Plücker coordinate of the gradient point under `lambda`.
#[pyfunction]
fn hm_weight(form: &PyPolynomial, lambda: Vec<i64>) -> PyResult<i64> {
    let w = milnor::gradient_point(&form.inner).map_err(err)?;
    w.hm_weight(&one_ps(lambda)?).map_err(err)
}

/// Initial monomials (as exponent lists) of the degree-`m` ideal piece and their weight.
#[pyfunction]
fn pivot_set(gens: Vec<PyRef<'_, PyPolynomial>>, m: u32, lambda: Vec<i64>) -> PyResult<(Vec<Vec<u32>>, i64)> {
    let point = milnor::hilbert_point(&unwrap_all(gens), m, false).map_err(err)?;
    let p = point.ideal_piece.pivot_set(&one_ps(lambda)?).map_err(err)?;
    Ok((p.monomials.iter().map(|e| e.as_slice().to_vec()).collect(), p.weight))
}

/// `dim (S/I)_m` for `m = 0, …, m_max`.
#[pyfunction]
fn hilbert_function(gens: Vec<PyRef<'_, PyPolynomial>>, m_max: u32) -> PyResult<Vec<usize>> {
    milnor::hilbert_function(&unwrap_all(gens), m_max).map_err(err)
}

#[pyfunction]
fn is_regular_sequence(gens: Vec<PyRef<'_, PyPolynomial>>) -> PyResult<bool> {
    milnor::is_regular_sequence(&unwrap_all(gens)).map(|w| w.regular).map_err(err)
}

/// Associated form of a regular sequence, leading coefficient 1.
#[pyfunction]
fn associated_form(gens: Vec<PyRef<'_, PyPolynomial>>) -> PyResult<String> {
    milnor::associated_form(&unwrap_all(gens)).map(|a| a.dual_form.to_string()).map_err(err)
}

/// Associated form of a smooth form, normalized against its hessian.
#[pyfunction]
fn associated_form_of(form: &PyPolynomial) -> PyResult<String> {
    let a = milnor::associated_form_of(&form.inner).map_err(err)?;
    debug_assert_eq!(a.normalization, Normalization::HessianNormalized);
    Ok(a.dual_form.to_string())
}

/// Missing socle monomial under a sorted `lambda`, the balanced monomial and
/// whether the first dominates the second.
#[pyfunction]
fn socle_monomial_report<'py>(
    py: Python<'py>,
    gens: Vec<PyRef<'_, PyPolynomial>>,
    lambda: Vec<i64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = milnor::socle_monomial_report(&unwrap_all(gens), &one_ps(lambda)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("missing", r.missing.as_slice().to_vec())?;
    d.set_item("balanced", r.balanced.as_slice().to_vec())?;
    d.set_item("dominates", r.dominates)?;
    Ok(d)
}

/// Torus verdict of the monomial support: stable, strictly-semistable or unstable.
#[pyfunction]
fn torus_status(form: &PyPolynomial) -> PyResult<String> {
    let state = st::form_state(&form.inner).map_err(err)?;
    st::torus_verdict(&state).map(|v| v.status.to_string()).map_err(err)
}

/// Exact status of a binary form from its root multiplicities.
#[pyfunction]
fn binary_oracle<'py>(py: Python<'py>, form: &PyPolynomial) -> PyResult<Bound<'py, PyDict>> {
    let v = st::binary_oracle(&form.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("status", v.status.to_string())?;
    d.set_item("degree", v.degree)?;
    d.set_item("max_multiplicity", v.max_multiplicity)?;
    let roots: Vec<(String, String, u32)> =
        v.roots.iter().map(|r| (r.a.to_string(), r.b.to_string(), r.multiplicity)).collect();
    d.set_item("roots", roots)?;
    Ok(d)
}

/// Destabilizer search; returns the status and, when unstable, `lambda` and `frame`.
#[pyfunction]
#[pyo3(signature = (form, budget=16, seed=0))]
fn find_destabilizer<'py>(py: Python<'py>, form: &PyPolynomial, budget: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let cfg = SearchConfig { seed, frame_budget: budget, ..Default::default() };
    let v = st::find_destabilizer(&form.inner, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("status", v.status.to_string())?;
    if let Some(c) = v.destabilizer() {
        d.set_item("lambda", c.lambda.weights().to_vec())?;
        let frame: Vec<Vec<String>> = c.frame.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        d.set_item("frame", frame)?;
    }
    Ok(d)
}

/// Runs a command-line invocation, e.g. `["stability", "--form", "x^2*y"]`;
/// returns the exit code and the JSON (or error) text.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String) {
    gitmilnor_cli::run_args(args)
}

#[pymodule]
fn gitmilnor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(gradient_point, m)?)?;
    m.add_function(wrap_pyfunction!(hm_weight, m)?)?;
    m.add_function(wrap_pyfunction!(pivot_set, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_function, m)?)?;
    m.add_function(wrap_pyfunction!(is_regular_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(associated_form, m)?)?;
    m.add_function(wrap_pyfunction!(associated_form_of, m)?)?;
    m.add_function(wrap_pyfunction!(socle_monomial_report, m)?)?;
    m.add_function(wrap_pyfunction!(torus_status, m)?)?;
    m.add_function(wrap_pyfunction!(binary_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(find_destabilizer, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
