//! Python bindings for `polyadic_cantor`.

use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use polyadic_cantor::estimation::CountMethod;
use polyadic_cantor::io::{
    emit_operator_grid, export_intervals_to_string, import_intervals_from_str, render_stages_svg,
    IntervalFormat,
};
use polyadic_cantor::{
    arith, ArityN, BinaryOp, CantorParams, Dimension, Error, IntervalSet, VerificationOutcome,
};

create_exception!(
    pycantor,
    DomainError,
    PyValueError,
    "Input outside an operation's domain."
);
create_exception!(
    pycantor,
    ParseError,
    PyValueError,
    "Malformed interval document."
);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        e @ Error::Parse { .. } => ParseError::new_err(e.to_string()),
        e => DomainError::new_err(e.to_string()),
    }
}

fn arity(n: u32) -> PyResult<ArityN> {
    ArityN::new(n).map_err(to_py)
}

fn dim(d: f64) -> PyResult<Dimension> {
    Dimension::new(d).map_err(to_py)
}

fn op(name: &str) -> PyResult<BinaryOp> {
    name.parse().map_err(to_py)
}

fn method(name: &str) -> PyResult<CountMethod> {
    name.parse().map_err(to_py)
}

fn format(name: &str) -> PyResult<IntervalFormat> {
    name.parse().map_err(to_py)
}

#[pyclass(name = "OpResult", frozen, get_all)]
struct PyOpResult {
    d: f64,
    gamma: f64,
    underflow: bool,
}

#[pymethods]
impl PyOpResult {
    fn __repr__(&self) -> String {
        format!(
            "OpResult(d={}, gamma={}, underflow={})",
            self.d,
            self.gamma,
            if self.underflow { "True" } else { "False" }
        )
    }
}

impl From<arith::OpResult> for PyOpResult {
    fn from(r: arith::OpResult) -> Self {
        PyOpResult {
            d: r.d.get(),
            gamma: r.gamma,
            underflow: r.underflow,
        }
    }
}

#[pyfunction]
fn dimension_from_scale(n: u32, gamma: f64) -> PyResult<f64> {
    Ok(polyadic_cantor::dimension_from_scale(arity(n)?, gamma)
        .map_err(to_py)?
        .get())
}

/// Returns `(gamma, underflow)`.
#[pyfunction]
fn scale_from_dimension(n: u32, d: f64) -> PyResult<(f64, bool)> {
    let s = polyadic_cantor::scale_from_dimension(arity(n)?, dim(d)?);
    Ok((s.gamma, s.underflow))
}

#[pyfunction]
fn apply(op_name: &str, da: f64, db: f64, n: u32) -> PyResult<PyOpResult> {
    arith::apply(op(op_name)?, dim(da)?, dim(db)?, arity(n)?)
        .map(Into::into)
        .map_err(|e| to_py(e.into()))
}

#[pyfunction]
fn add(da: f64, db: f64, n: u32) -> PyResult<PyOpResult> {
    apply("add", da, db, n)
}

#[pyfunction]
fn sub(da: f64, db: f64, n: u32) -> PyResult<PyOpResult> {
    apply("sub", da, db, n)
}

#[pyfunction]
fn mul(da: f64, db: f64, n: u32) -> PyResult<PyOpResult> {
    apply("mul", da, db, n)
}

#[pyfunction]
fn div(da: f64, db: f64, n: u32) -> PyResult<PyOpResult> {
    apply("div", da, db, n)
}

#[pyfunction]
fn int_pow(da: f64, k: u32, n: u32) -> PyResult<PyOpResult> {
    arith::int_pow(dim(da)?, k, arity(n)?)
        .map(Into::into)
        .map_err(|e| to_py(e.into()))
}

#[pyfunction]
fn d_dimension_d_scale(n: u32, gamma: f64) -> PyResult<f64> {
    arith::d_dimension_d_scale(arity(n)?, gamma).map_err(to_py)
}

#[pyfunction]
fn check_gamma_consistency(op_name: &str, da: f64, db: f64, n: u32) -> PyResult<f64> {
    arith::check_gamma_consistency(op(op_name)?, dim(da)?, dim(db)?, arity(n)?).map_err(to_py)
}

/// Returns `(eps_min, eps_reg, eps_max)`.
#[pyfunction]
fn lacunarity_bounds(n: u32, gamma: f64) -> PyResult<(f64, f64, f64)> {
    let b = polyadic_cantor::lacunarity_bounds(arity(n)?, gamma).map_err(to_py)?;
    Ok((b.eps_min, b.eps_reg, b.eps_max))
}

/// A sorted set of disjoint intervals in `[0, 1]`.
#[pyclass(name = "IntervalSet", frozen)]
struct PyIntervalSet {
    inner: IntervalSet,
}

#[pymethods]
impl PyIntervalSet {
    #[staticmethod]
    fn from_text(text: &str, fmt: &str) -> PyResult<Self> {
        Ok(PyIntervalSet {
            inner: import_intervals_from_str(text, format(fmt)?).map_err(to_py)?,
        })
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        self.inner
            .intervals()
            .iter()
            .map(|iv| (iv.start, iv.end))
            .collect()
    }

    fn total_measure(&self) -> f64 {
        self.inner.total_measure()
    }

    /// Construction parameters `(n, gamma, epsilon, stage)`, if known.
    fn params(&self) -> Option<(u32, f64, f64, u32)> {
        self.inner
            .params()
            .map(|p| (p.n().get(), p.gamma(), p.epsilon(), p.stage()))
    }

    #[pyo3(signature = (fmt = "json"))]
    fn export(&self, fmt: &str) -> PyResult<String> {
        Ok(export_intervals_to_string(&self.inner, format(fmt)?))
    }

    /// Returns `(d_hat, stderr)`.
    #[pyo3(signature = (deltas = None, method_name = "cover"))]
    fn estimate_dimension(
        &self,
        deltas: Option<Vec<f64>>,
        method_name: &str,
    ) -> PyResult<(f64, f64)> {
        let e = polyadic_cantor::estimate_dimension_with(
            &self.inner,
            deltas.as_deref(),
            method(method_name)?,
        )
        .map_err(to_py)?;
        Ok((e.d_hat, e.stderr))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("IntervalSet(len={})", self.inner.len())
    }
}

fn params(n: u32, gamma: f64, epsilon: f64, stage: u32) -> PyResult<CantorParams> {
    CantorParams::new(arity(n)?, gamma, epsilon, stage).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, gamma, stage, epsilon = 0.0))]
fn construct_prefractal(n: u32, gamma: f64, stage: u32, epsilon: f64) -> PyResult<PyIntervalSet> {
    let set =
        polyadic_cantor::construct_prefractal(&params(n, gamma, epsilon, stage)?).map_err(to_py)?;
    Ok(PyIntervalSet { inner: set })
}

#[pyfunction]
#[pyo3(signature = (n, gamma, max_stage, epsilon = 0.0))]
fn render_svg(n: u32, gamma: f64, max_stage: u32, epsilon: f64) -> PyResult<String> {
    render_stages_svg(&params(n, gamma, epsilon, 0)?, max_stage).map_err(to_py)
}

/// Returns a dict with `status` ("PASS", "FAIL" or "UNVERIFIABLE"),
/// `d_c`, `gamma_c`, and either `d_hat`/`abs_error` or `reason`.
#[pyfunction]
#[pyo3(signature = (op_name, da, db, n, stage = 6, tolerance = 0.05, method_name = "cover"))]
#[allow(clippy::too_many_arguments)]
fn verify_operator_geometrically<'py>(
    py: Python<'py>,
    op_name: &str,
    da: f64,
    db: f64,
    n: u32,
    stage: u32,
    tolerance: f64,
    method_name: &str,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let report = polyadic_cantor::verify_operator_geometrically_with(
        op(op_name)?,
        dim(da)?,
        dim(db)?,
        arity(n)?,
        stage,
        tolerance,
        method(method_name)?,
    )
    .map_err(to_py)?;
    let out = pyo3::types::PyDict::new(py);
    out.set_item("d_c", report.d_c)?;
    out.set_item("gamma_c", report.gamma_c)?;
    match report.outcome {
        VerificationOutcome::Checked {
            d_hat,
            abs_error,
            pass,
            ..
        } => {
            out.set_item("status", if pass { "PASS" } else { "FAIL" })?;
            out.set_item("d_hat", d_hat)?;
            out.set_item("abs_error", abs_error)?;
        }
        VerificationOutcome::Unverifiable { reason } => {
            out.set_item("status", "UNVERIFIABLE")?;
            out.set_item("reason", reason)?;
        }
    }
    Ok(out)
}

/// Row-major `(da, db, dc)` samples; `dc` is `None` where undefined.
#[pyfunction]
fn operator_grid(
    op_name: &str,
    resolution: usize,
    n: u32,
) -> PyResult<Vec<(f64, f64, Option<f64>)>> {
    let sheet = emit_operator_grid(op(op_name)?, resolution, arity(n)?).map_err(to_py)?;
    Ok(sheet.cells.iter().map(|c| (c.da, c.db, c.dc)).collect())
}

#[pymodule]
fn pycantor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add_class::<PyOpResult>()?;
    m.add_class::<PyIntervalSet>()?;
    m.add_function(wrap_pyfunction!(dimension_from_scale, m)?)?;
    m.add_function(wrap_pyfunction!(scale_from_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(add, m)?)?;
    m.add_function(wrap_pyfunction!(sub, m)?)?;
    m.add_function(wrap_pyfunction!(mul, m)?)?;
    m.add_function(wrap_pyfunction!(div, m)?)?;
    m.add_function(wrap_pyfunction!(int_pow, m)?)?;
    m.add_function(wrap_pyfunction!(d_dimension_d_scale, m)?)?;
    m.add_function(wrap_pyfunction!(check_gamma_consistency, m)?)?;
    m.add_function(wrap_pyfunction!(lacunarity_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(construct_prefractal, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(verify_operator_geometrically, m)?)?;
    m.add_function(wrap_pyfunction!(operator_grid, m)?)?;
    Ok(())
}
