//! Python bindings: `import pypalnil`.

use num_bigint::BigInt;
use palnil::autos::central::decompose_central;
use palnil::autos::palindromic::{classify, solve_conjugator};
use palnil::autos::tame::{decompose_bglm, tameness_necessary};
use palnil::autos::{self, compose_symbols, parse_endo, parse_symbols, render_endo, Decomposition};
use palnil::nilpotent::Group;
use palnil::verify::{self, Config, Suite};
use palnil::Error;
use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: Error) -> PyErr {
    match e {
        Error::NotAutomorphism(_) | Error::Precondition(_) => PyArithmeticError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Free nilpotent group `N_{n,k}`.
#[pyclass(module = "pypalnil", frozen)]
struct NilpotentGroup {
    inner: Group,
}

#[pymethods]
impl NilpotentGroup {
    #[new]
    fn new(rank: usize, step: usize) -> PyResult<Self> {
        Ok(NilpotentGroup { inner: palnil::NilpotentGroup::shared(rank, step).map_err(err)? })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn step(&self) -> usize {
        self.inner.step()
    }

    /// Basic commutators in normal-form order.
    fn basis(&self) -> Vec<String> {
        let b = self.inner.basis();
        (0..b.len()).map(|j| b.display(j).to_string()).collect()
    }

    fn parse(&self, text: &str) -> PyResult<NilElement> {
        Ok(NilElement { inner: self.inner.parse(text).map_err(err)? })
    }

    fn generator(&self, i: usize) -> PyResult<NilElement> {
        if !(1..=self.inner.rank()).contains(&i) {
            return Err(err(Error::IndexOutOfRank { index: i, rank: self.inner.rank() }));
        }
        Ok(NilElement { inner: self.inner.generator(i) })
    }

    fn identity(&self) -> NilElement {
        NilElement { inner: self.inner.identity() }
    }

    fn __repr__(&self) -> String {
        format!("NilpotentGroup({}, {})", self.inner.rank(), self.inner.step())
    }
}

#[pyclass(module = "pypalnil", frozen)]
struct NilElement {
    inner: palnil::NilElement,
}

#[pymethods]
impl NilElement {
    fn __mul__(&self, other: &NilElement) -> PyResult<NilElement> {
        Ok(NilElement { inner: self.inner.try_mul(&other.inner).map_err(err)? })
    }

    fn __pow__(&self, m: i64, _modulo: Option<i64>) -> NilElement {
        NilElement { inner: self.inner.pow(m) }
    }

    fn __eq__(&self, other: &NilElement) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.exponents().hash(&mut h);
        h.finish()
    }

    fn inv(&self) -> NilElement {
        NilElement { inner: self.inner.inv() }
    }

    /// Image under the reversal anti-automorphism.
    fn bar(&self) -> NilElement {
        NilElement { inner: self.inner.bar() }
    }

    fn commutator(&self, other: &NilElement) -> PyResult<NilElement> {
        Ok(NilElement { inner: self.inner.try_commutator(&other.inner).map_err(err)? })
    }

    fn weight(&self) -> usize {
        self.inner.weight()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn exponents(&self) -> Vec<BigInt> {
        self.inner.exponents().to_vec()
    }

    /// `q` with `bar(q) x_i q == self` and `weight(q) >= min_weight`, or None.
    #[pyo3(signature = (i, min_weight = 1))]
    fn solve_conjugator(&self, i: usize, min_weight: usize) -> PyResult<Option<NilElement>> {
        Ok(solve_conjugator(&self.inner, i, min_weight).map_err(err)?.map(|q| NilElement { inner: q }))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NilElement('{}')", self.inner)
    }
}

fn decomposition<'py>(py: Python<'py>, d: Decomposition) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("ok", d.residual_trivial)?;
    out.set_item("factors", d.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>())?;
    out.set_item("diagnostic", d.diagnostic)?;
    Ok(out)
}

/// Endomorphism of `N_{n,k}`, given by the images of the generators.
#[pyclass(module = "pypalnil", frozen)]
struct Endo {
    inner: autos::Endo,
}

#[pymethods]
impl Endo {
    /// Reads lines `x<i> -> <word>`; omitted generators are fixed.
    #[staticmethod]
    fn parse(group: &NilpotentGroup, text: &str) -> PyResult<Endo> {
        Ok(Endo { inner: parse_endo(text, &group.inner).map_err(err)? })
    }

    /// Composes generator symbols left to right, e.g. `"mu(1,2) phi2(2,1;1)^-1"`.
    #[staticmethod]
    fn from_symbols(group: &NilpotentGroup, text: &str) -> PyResult<Endo> {
        let syms = parse_symbols(text, &group.inner).map_err(err)?;
        Ok(Endo { inner: compose_symbols(&syms, &group.inner).map_err(err)? })
    }

    #[staticmethod]
    fn identity(group: &NilpotentGroup) -> Endo {
        Endo { inner: autos::Endo::identity(&group.inner) }
    }

    fn images(&self) -> Vec<NilElement> {
        self.inner.images().iter().map(|g| NilElement { inner: g.clone() }).collect()
    }

    /// Abelianization matrix, one row per generator image.
    fn matrix(&self) -> Vec<Vec<BigInt>> {
        self.inner.matrix().to_vec()
    }

    fn apply(&self, g: &NilElement) -> PyResult<NilElement> {
        Ok(NilElement { inner: self.inner.apply(&g.inner).map_err(err)? })
    }

    /// `self` first, then `other`.
    fn compose(&self, other: &Endo) -> PyResult<Endo> {
        Ok(Endo { inner: self.inner.compose(&other.inner).map_err(err)? })
    }

    fn inverse(&self) -> PyResult<Endo> {
        Ok(Endo { inner: autos::inverse(&self.inner).map_err(err)?.inverse })
    }

    fn is_automorphism(&self) -> bool {
        self.inner.is_automorphism()
    }

    fn is_identity(&self) -> bool {
        self.inner.is_identity()
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = classify(&self.inner).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("ia", c.is_ia)?;
        out.set_item("central", c.is_central)?;
        out.set_item("palindromic", c.is_palindromic)?;
        out.set_item("elementary_palindromic", c.is_elementary_palindromic)?;
        out.set_item("pi_level", c.pi_level)?;
        out.set_item("diagnostic", c.diagnostic)?;
        Ok(out)
    }

    fn decompose_central<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        decomposition(py, decompose_central(&self.inner).map_err(err)?)
    }

    fn decompose_bglm<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        decomposition(py, decompose_bglm(&self.inner).map_err(err)?)
    }

    fn tame_check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let t = tameness_necessary(&self.inner).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("holds", t.holds)?;
        out.set_item("sum", t.sum.to_string())?;
        out.set_item("residue", t.sum.residue_report())?;
        Ok(out)
    }

    fn __eq__(&self, other: &Endo) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        render_endo(&self.inner)
    }
}

/// Fox derivative `d_j(word)` modulo `R`, rendered in `X_i = x_i - 1`.
#[pyfunction]
fn fox_derivative(word: &str, rank: usize, j: usize) -> PyResult<String> {
    let w = palnil::Word::parse(word, rank).map_err(err)?;
    Ok(palnil::fox_derivative(&w, j).map_err(err)?.to_string())
}

/// Runs a verification suite and returns its report.
#[pyfunction]
#[pyo3(signature = (suite, rank = None, step = None, seed = 1, cases = 100))]
fn run_suite<'py>(
    py: Python<'py>,
    suite: &str,
    rank: Option<usize>,
    step: Option<usize>,
    seed: u64,
    cases: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s: Suite = suite.parse().map_err(err)?;
    let (n, k) = s.defaults();
    let config = Config { rank: rank.unwrap_or(n), step: step.unwrap_or(k), seed, cases };
    let r = py.detach(|| verify::run(s, config)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("suite", s.name())?;
    out.set_item("passed", r.passed())?;
    out.set_item("checks", r.checks)?;
    out.set_item("failures", r.failures)?;
    out.set_item("notes", r.notes)?;
    Ok(out)
}

#[pymodule]
fn pypalnil(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<NilpotentGroup>()?;
    m.add_class::<NilElement>()?;
    m.add_class::<Endo>()?;
    m.add_function(wrap_pyfunction!(fox_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
