//! Python bindings. Geometry runs in `f64`; structured reports come back as
//! plain dicts and lists.

use lydim_core::dimension::{
    box_count as core_box_count, compare_to_moran, estimate_dimension as core_estimate,
};
use lydim_core::expanding::MapSpec;
use lydim_core::ifs::{moran_root as core_moran_root, moran_root_star as core_moran_root_star};
use lydim_core::symbolic;
use lydim_core::witness;
use lydim_core::{
    Error, Interval, PiecewiseExpandingMap, Sign, Symbol, SymbolStream, SymbolWord,
    DEFAULT_WORD_BUDGET,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn interval(pair: (f64, f64)) -> PyResult<Interval<f64>> {
    Interval::new(pair.0, pair.1).map_err(err)
}

/// 0/1 transition matrix, written "1,1,1;1,0,0;1,0,0".
#[pyclass(name = "TransitionMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix {
    inner: lydim_core::TransitionMatrix,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: text.parse().map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (m, diagonal = true))]
    fn star(m: usize, diagonal: bool) -> PyResult<Self> {
        Ok(Self {
            inner: lydim_core::TransitionMatrix::star(m, diagonal).map_err(err)?,
        })
    }

    #[staticmethod]
    fn full(m: usize) -> PyResult<Self> {
        Ok(Self {
            inner: lydim_core::TransitionMatrix::full(m).map_err(err)?,
        })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn is_irreducible(&self) -> bool {
        self.inner.is_irreducible()
    }

    fn branching_row(&self) -> Option<usize> {
        self.inner.branching_row()
    }

    #[pyo3(signature = (i = 1, strict = true))]
    fn is_star(&self, i: usize, strict: bool) -> bool {
        self.inner.is_star(i, strict)
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn spectral_radius(&self, tol: f64) -> PyResult<f64> {
        self.inner.spectral_radius(tol).map_err(err)
    }

    /// Exact count as a Python int.
    fn count_words<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let count = self.inner.count_admissible_words(n).map_err(err)?;
        py.import("builtins")?
            .getattr("int")?
            .call1((count.to_string(),))
    }

    #[pyo3(signature = (n, budget = DEFAULT_WORD_BUDGET))]
    fn enumerate_words(&self, n: usize, budget: usize) -> PyResult<Vec<Vec<Symbol>>> {
        Ok(self
            .inner
            .enumerate_admissible_words(n, budget)
            .map_err(err)?
            .into_iter()
            .map(|w| w.symbols().to_vec())
            .collect())
    }

    fn is_admissible(&self, symbols: Vec<Symbol>) -> PyResult<bool> {
        SymbolWord::new(self.inner.m(), symbols)
            .and_then(|w| w.is_admissible(&self.inner))
            .map_err(err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("TransitionMatrix({:?})", self.inner.to_string())
    }
}

/// Piecewise-affine strictly coupled-expanding interval map.
#[pyclass(name = "ExpandingMap", frozen)]
struct PyMap {
    inner: PiecewiseExpandingMap<f64>,
}

#[pymethods]
impl PyMap {
    /// Map from its JSON form; branches without offsets are synthesized.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: MapSpec =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self {
            inner: PiecewiseExpandingMap::from_spec(&spec).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (matrix, domain, layout, lambdas, signs = None))]
    fn synthesize(
        matrix: &PyMatrix,
        domain: (f64, f64),
        layout: Vec<(f64, f64)>,
        lambdas: Vec<f64>,
        signs: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let signs = match signs {
            Some(s) => s
                .iter()
                .map(|t| match t.as_str() {
                    "+" => Ok(Sign::Plus),
                    "-" => Ok(Sign::Minus),
                    other => Err(PyValueError::new_err(format!(
                        "sign must be '+' or '-', got {other:?}"
                    ))),
                })
                .collect::<PyResult<Vec<_>>>()?,
            None => vec![Sign::Plus; matrix.inner.m()],
        };
        let layout = layout
            .into_iter()
            .map(interval)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: PiecewiseExpandingMap::synthesize(
                matrix.inner.clone(),
                interval(domain)?,
                layout,
                lambdas,
                signs,
            )
            .map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_spec())
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn apply(&self, x: f64) -> Option<f64> {
        self.inner.apply(&x)
    }

    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.verify())
    }

    fn basic_set(&self, word: Vec<Symbol>) -> PyResult<(f64, f64)> {
        let w = SymbolWord::new(self.inner.m(), word).map_err(err)?;
        let b = self.inner.basic_set(&w).map_err(err)?;
        Ok((b.interval.lo, b.interval.hi))
    }

    /// `[(word, lo, hi), …]` for every admissible word of length `depth`.
    #[pyo3(signature = (depth, budget = DEFAULT_WORD_BUDGET))]
    fn cover(&self, depth: usize, budget: usize) -> PyResult<Vec<(Vec<Symbol>, f64, f64)>> {
        Ok(self
            .inner
            .limit_set_cover(depth, budget)
            .map_err(err)?
            .into_iter()
            .map(|b| (b.word.symbols().to_vec(), b.interval.lo, b.interval.hi))
            .collect())
    }

    fn code_orbit(&self, x: f64, steps: usize) -> PyResult<Vec<Symbol>> {
        Ok(self
            .inner
            .code_orbit(&x, steps)
            .map_err(err)?
            .symbols()
            .to_vec())
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn moran_root(&self, tol: f64) -> PyResult<f64> {
        Ok(self.inner.moran_root(tol).map_err(err)?.p)
    }

    /// Box-counting fit over depths `first..=last`, compared with the Moran
    /// root when the matrix has one.
    #[pyo3(signature = (first, last, tol = 0.05, budget = DEFAULT_WORD_BUDGET))]
    fn estimate_dimension<'py>(
        &self,
        py: Python<'py>,
        first: usize,
        last: usize,
        tol: f64,
        budget: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let est = core_estimate(&self.inner, first..=last, budget).map_err(err)?;
        let cmp = self
            .inner
            .moran_root(1e-12)
            .ok()
            .map(|r| compare_to_moran(&est, &r, tol));
        to_py(
            py,
            &serde_json::json!({ "estimate": est, "comparison": cmp }),
        )
    }
}

#[pyfunction]
#[pyo3(signature = (ratios, tol = 1e-12))]
fn moran_root(ratios: Vec<f64>, tol: f64) -> PyResult<f64> {
    Ok(core_moran_root(&ratios, tol).map_err(err)?.p)
}

#[pyfunction]
#[pyo3(signature = (lambdas, tol = 1e-12))]
fn moran_root_star(lambdas: Vec<f64>, tol: f64) -> PyResult<f64> {
    Ok(core_moran_root_star(&lambdas, tol).map_err(err)?.p)
}

/// Star subshift sequence to full-shift sequence.
#[pyfunction]
fn phi(symbols: Vec<Symbol>, matrix: &PyMatrix) -> PyResult<Vec<Symbol>> {
    let s = SymbolStream::new(matrix.inner.m(), symbols).map_err(err)?;
    Ok(symbolic::phi(&s, &matrix.inner)
        .map_err(err)?
        .symbols()
        .to_vec())
}

#[pyfunction]
#[pyo3(signature = (symbols, m))]
fn phi_inverse(symbols: Vec<Symbol>, m: usize) -> PyResult<Vec<Symbol>> {
    let s = SymbolStream::new(m, symbols).map_err(err)?;
    Ok(symbolic::phi_inverse(&s).symbols().to_vec())
}

#[pyfunction]
fn box_count(intervals: Vec<(f64, f64)>, eps: f64, domain: (f64, f64)) -> PyResult<usize> {
    let cover = intervals
        .into_iter()
        .map(interval)
        .collect::<PyResult<Vec<_>>>()?;
    Ok(core_box_count(&cover, eps, &interval(domain)?)
        .map_err(err)?
        .count)
}

fn schedule(text: &str) -> PyResult<witness::WitnessSchedule> {
    witness::WitnessSchedule::parse(text).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (schedule_text, count))]
fn sync_positions(schedule_text: &str, count: usize) -> PyResult<Vec<usize>> {
    schedule(schedule_text)?.sync_positions(count).map_err(err)
}

/// Li-Yorke partner of `s` with the free positions taken from `payload`.
#[pyfunction]
#[pyo3(signature = (s, payload, matrix, schedule_text = "n^2"))]
fn build_witness(
    s: Vec<Symbol>,
    payload: Vec<Symbol>,
    matrix: &PyMatrix,
    schedule_text: &str,
) -> PyResult<Vec<Symbol>> {
    let m = matrix.inner.m();
    let s = SymbolStream::new(m, s).map_err(err)?;
    let p = SymbolStream::new(m, payload).map_err(err)?;
    let t =
        witness::build_witness(&s, &schedule(schedule_text)?, &matrix.inner, &p).map_err(err)?;
    Ok(t.symbols().to_vec())
}

#[pyfunction]
#[pyo3(signature = (s, t, m, depth, schedule_text = "n^2"))]
fn verify_witness<'py>(
    py: Python<'py>,
    s: Vec<Symbol>,
    t: Vec<Symbol>,
    m: usize,
    depth: usize,
    schedule_text: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let s = SymbolStream::new(m, s).map_err(err)?;
    let t = SymbolStream::new(m, t).map_err(err)?;
    let report =
        witness::verify_liyorke_symbolic(&s, &t, &schedule(schedule_text)?, depth).map_err(err)?;
    to_py(py, &report)
}

/// δ(k) for the cylinder `[a_0 … a_k]`.
#[pyfunction]
#[pyo3(signature = (alpha, m, schedule_text = "n^2"))]
fn delta_k<'py>(
    py: Python<'py>,
    alpha: Vec<Symbol>,
    m: usize,
    schedule_text: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let w = SymbolWord::new(m, alpha).map_err(err)?;
    to_py(
        py,
        &witness::delta_k(&w, &schedule(schedule_text)?).map_err(err)?,
    )
}

#[pymodule]
fn lydim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyMap>()?;
    m.add_function(wrap_pyfunction!(moran_root, m)?)?;
    m.add_function(wrap_pyfunction!(moran_root_star, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(box_count, m)?)?;
    m.add_function(wrap_pyfunction!(sync_positions, m)?)?;
    m.add_function(wrap_pyfunction!(build_witness, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(delta_k, m)?)?;
    Ok(())
}
