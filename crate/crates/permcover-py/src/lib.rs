//! Python bindings: the main types (permutations, downsets, the solver) and
//! the verification, construction, separable, bound and search operations.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use permcover::bounds;
use permcover::constructions::{self, DoubleKind};
use permcover::criticality;
use permcover::downset::MergeOp;
use permcover::search;
use permcover::separable;
use permcover::{Direction, Downset, Error, IndexSubsequence, Permutation, Solver, SolverLimits};

fn err(e: Error) -> PyErr {
    match e {
        Error::ResourceExhausted(msg) => PyRuntimeError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A permutation of {1..n} in one-line notation.
#[pyclass(name = "Permutation", frozen, eq, ord, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyPermutation {
    inner: Permutation,
}

impl std::fmt::Display for PyPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.inner)
    }
}

#[pymethods]
impl PyPermutation {
    #[new]
    fn new(values: Vec<u32>) -> PyResult<Self> {
        Ok(PyPermutation {
            inner: Permutation::new(values).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPermutation {
            inner: text.parse().map_err(err)?,
        })
    }

    #[staticmethod]
    fn ascending(n: usize) -> Self {
        PyPermutation {
            inner: Permutation::ascending(n),
        }
    }

    #[staticmethod]
    fn descending(n: usize) -> Self {
        PyPermutation {
            inner: Permutation::descending(n),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Permutation([{}])", self.inner)
    }

    fn values(&self) -> Vec<u32> {
        self.inner.values().to_vec()
    }

    fn lis(&self) -> usize {
        self.inner.lis()
    }

    fn lds(&self) -> usize {
        self.inner.lds()
    }

    /// Pattern of the values at the given 1-based positions.
    fn pattern_at(&self, indices: Vec<usize>) -> PyResult<Self> {
        let idx = IndexSubsequence::new(indices).map_err(err)?;
        Ok(PyPermutation {
            inner: self.inner.pattern_of(&idx).map_err(err)?,
        })
    }

    /// 1-based witness positions of the first occurrence of `pattern`, or
    /// None.
    fn contains(&self, pattern: &PyPermutation) -> Option<Vec<usize>> {
        self.inner
            .contains(&pattern.inner)
            .map(|w| w.positions().to_vec())
    }

    fn delete(&self, position: usize) -> PyResult<Self> {
        Ok(PyPermutation {
            inner: self.inner.delete(position).map_err(err)?,
        })
    }

    fn direct_sum(&self, other: &PyPermutation) -> Self {
        PyPermutation {
            inner: self.inner.direct_sum(&other.inner),
        }
    }

    fn skew_sum(&self, other: &PyPermutation) -> Self {
        PyPermutation {
            inner: self.inner.skew_sum(&other.inner),
        }
    }

    fn tensor(&self, other: &PyPermutation) -> Self {
        PyPermutation {
            inner: self.inner.tensor(&other.inner),
        }
    }

    fn reverse(&self) -> Self {
        PyPermutation {
            inner: self.inner.reverse(),
        }
    }

    fn complement(&self) -> Self {
        PyPermutation {
            inner: self.inner.complement(),
        }
    }

    fn inverse(&self) -> Self {
        PyPermutation {
            inner: self.inner.inverse(),
        }
    }

    /// Closure under reverse, complement and inverse (at most 8 elements).
    fn orbit(&self) -> Vec<PyPermutation> {
        self.inner
            .symmetry_orbit()
            .into_iter()
            .map(|p| PyPermutation { inner: p })
            .collect()
    }

    /// Cover by `lis` decreasing chains ("decreasing") or `lds` increasing
    /// chains ("increasing"), as (kind, chain_index) pairs per position.
    fn chain_cover(&self, direction: &str) -> PyResult<Vec<(String, usize)>> {
        let dir = match direction {
            "increasing" => Direction::Increasing,
            "decreasing" => Direction::Decreasing,
            other => {
                return Err(PyValueError::new_err(format!(
                    "direction must be 'increasing' or 'decreasing', got {other:?}"
                )))
            }
        };
        Ok(cover_to_pairs(&self.inner.chain_cover(dir)))
    }
}

fn cover_to_pairs(cover: &permcover::MonotoneCover) -> Vec<(String, usize)> {
    cover
        .assignment()
        .iter()
        .map(|c| match c {
            permcover::ChainRef::Increasing(i) => ("increasing".to_string(), *i),
            permcover::ChainRef::Decreasing(i) => ("decreasing".to_string(), *i),
        })
        .collect()
}

/// A finite downward-closed subset of N², stored as column heights.
#[pyclass(name = "Downset", frozen, eq, ord, hash, str, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PyDownset {
    inner: Downset,
}

impl std::fmt::Display for PyDownset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.inner)
    }
}

#[pymethods]
impl PyDownset {
    #[new]
    fn new(columns: Vec<usize>) -> PyResult<Self> {
        Ok(PyDownset {
            inner: Downset::new(columns).map_err(err)?,
        })
    }

    #[staticmethod]
    fn triangle(k: usize) -> Self {
        PyDownset {
            inner: Downset::triangle(k),
        }
    }

    #[staticmethod]
    fn rectangle(r: usize, s: usize) -> Self {
        PyDownset {
            inner: Downset::rectangle(r, s),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!("Downset([{}])", self.inner)
    }

    fn columns(&self) -> Vec<usize> {
        self.inner.columns().to_vec()
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn contains(&self, r: usize, s: usize) -> bool {
        self.inner.contains(r, s)
    }

    fn is_subset(&self, other: &PyDownset) -> bool {
        self.inner.is_subset(&other.inner)
    }

    fn frontier(&self) -> Vec<(usize, usize)> {
        self.inner.frontier()
    }

    fn points(&self) -> Vec<(usize, usize)> {
        self.inner.points()
    }

    fn conjugate(&self) -> Self {
        PyDownset {
            inner: self.inner.conjugate(),
        }
    }

    fn direct_sum(&self, other: &PyDownset) -> Self {
        PyDownset {
            inner: self.inner.direct_sum(&other.inner),
        }
    }

    fn skew_sum(&self, other: &PyDownset) -> Self {
        PyDownset {
            inner: self.inner.skew_sum(&other.inner),
        }
    }

    /// Ordered two-part splittings under "direct" or "skew" merging.
    fn splittings(&self, op: &str) -> PyResult<Vec<(PyDownset, PyDownset)>> {
        let op = match op {
            "direct" => MergeOp::DirectSum,
            "skew" => MergeOp::SkewSum,
            other => {
                return Err(PyValueError::new_err(format!(
                    "op must be 'direct' or 'skew', got {other:?}"
                )))
            }
        };
        Ok(self
            .inner
            .splittings(op)
            .into_iter()
            .map(|(b, c)| (PyDownset { inner: b }, PyDownset { inner: c }))
            .collect())
    }
}

/// Exact coverability solver with per-query budgets and a decision cache.
#[pyclass(name = "Solver")]
struct PySolver {
    inner: Solver,
}

#[pymethods]
impl PySolver {
    #[new]
    #[pyo3(signature = (memo_budget=None, time_budget=None))]
    fn new(memo_budget: Option<usize>, time_budget: Option<f64>) -> Self {
        let mut limits = SolverLimits::default();
        if let Some(budget) = memo_budget {
            limits.memo_budget = budget;
        }
        if let Some(seconds) = time_budget {
            limits.time_budget = Some(std::time::Duration::from_secs_f64(seconds));
        }
        PySolver {
            inner: Solver::with_limits(limits),
        }
    }

    /// Cover assignment as (kind, chain) pairs per position, or None.
    fn is_rs_coverable(
        &mut self,
        pi: &PyPermutation,
        r: usize,
        s: usize,
    ) -> PyResult<Option<Vec<(String, usize)>>> {
        let decision = self.inner.is_rs_coverable(&pi.inner, r, s).map_err(err)?;
        Ok(decision.cover().map(cover_to_pairs))
    }

    fn decide(&mut self, pi: &PyPermutation, r: usize, s: usize) -> PyResult<bool> {
        self.inner.decide(&pi.inner, r, s).map_err(err)
    }

    fn is_downset_coverable(&mut self, pi: &PyPermutation, target: &PyDownset) -> PyResult<bool> {
        self.inner
            .is_downset_coverable(&pi.inner, &target.inner)
            .map_err(err)
    }

    fn non_cover_downset(&mut self, pi: &PyPermutation) -> PyResult<PyDownset> {
        Ok(PyDownset {
            inner: self.inner.non_cover_downset(&pi.inner).map_err(err)?,
        })
    }

    /// "coverable", "critical", or "non-critical(deletion=i)".
    fn is_critical(&mut self, pi: &PyPermutation, target: &PyDownset) -> PyResult<String> {
        let report =
            criticality::is_critical(&mut self.inner, &pi.inner, &target.inner).map_err(err)?;
        Ok(report.status.to_string())
    }

    fn is_minimal(&mut self, pi: &PyPermutation, target: &PyDownset) -> PyResult<bool> {
        criticality::is_minimal(&mut self.inner, &pi.inner, &target.inner).map_err(err)
    }

    fn is_sharp(&mut self, pi: &PyPermutation, r: usize, s: usize) -> PyResult<bool> {
        criticality::is_sharp(&mut self.inner, &pi.inner, r, s).map_err(err)
    }

    fn criticalize(&mut self, pi: &PyPermutation, target: &PyDownset) -> PyResult<PyPermutation> {
        Ok(PyPermutation {
            inner: criticality::criticalize(&mut self.inner, &pi.inner, &target.inner)
                .map_err(err)?,
        })
    }
}

/// A built permutation together with its claimed property.
#[pyclass(name = "Construction", frozen)]
struct PyConstruction {
    #[pyo3(get)]
    name: String,
    #[pyo3(get)]
    claim: String,
    #[pyo3(get)]
    length: usize,
    permutation: PyPermutation,
    target: PyDownset,
}

#[pymethods]
impl PyConstruction {
    #[getter]
    fn permutation(&self) -> PyPermutation {
        self.permutation.clone()
    }

    #[getter]
    fn target(&self) -> PyDownset {
        self.target.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Construction(name={:?}, claim={:?}, target=[{}], length={})",
            self.name, self.claim, self.target.inner, self.length
        )
    }
}

fn wrap_construction(c: constructions::Construction) -> PyConstruction {
    PyConstruction {
        name: c.recipe.name,
        claim: c.recipe.claim.to_string(),
        length: c.recipe.claimed_length,
        permutation: PyPermutation {
            inner: c.permutation,
        },
        target: PyDownset {
            inner: c.recipe.target,
        },
    }
}

#[pyfunction]
fn seed_rect_2_1() -> PyPermutation {
    PyPermutation {
        inner: constructions::seed_rect_2_1(),
    }
}

#[pyfunction]
fn seed_triangle_3() -> PyPermutation {
    PyPermutation {
        inner: constructions::seed_triangle_3(),
    }
}

#[pyfunction]
fn seed_sharp_2_2() -> PyPermutation {
    PyPermutation {
        inner: constructions::seed_sharp_2_2(),
    }
}

#[pyfunction]
fn critical_skew_sum(
    a: &PyPermutation,
    r1: usize,
    b: &PyPermutation,
    r2: usize,
    s: usize,
) -> PyConstruction {
    wrap_construction(constructions::critical_skew_sum(
        &a.inner, r1, &b.inner, r2, s,
    ))
}

#[pyfunction]
fn minimal_step(pi: &PyPermutation, k: usize) -> PyConstruction {
    wrap_construction(constructions::minimal_step(&pi.inner, k))
}

#[pyfunction]
fn minimal_double(
    pi: &PyPermutation,
    sigma: &PyPermutation,
    k: usize,
    variant: &str,
) -> PyResult<PyConstruction> {
    let kind = match variant {
        "2k+2" => DoubleKind::TwoKPlusTwo,
        "2k+3" => DoubleKind::TwoKPlusThree,
        other => {
            return Err(PyValueError::new_err(format!(
                "variant must be '2k+2' or '2k+3', got {other:?}"
            )))
        }
    };
    Ok(wrap_construction(constructions::minimal_double(
        &pi.inner,
        &sigma.inner,
        k,
        kind,
    )))
}

#[pyfunction]
fn sharp_tensor(
    x: &PyPermutation,
    a: usize,
    b: usize,
    y: &PyPermutation,
    c: usize,
    d: usize,
) -> PyResult<PyConstruction> {
    Ok(wrap_construction(
        constructions::sharp_tensor(&x.inner, a, b, &y.inner, c, d).map_err(err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (tau, r, s, run=None))]
fn guarded_embed(
    tau: &PyPermutation,
    r: usize,
    s: usize,
    run: Option<usize>,
) -> PyResult<PyConstruction> {
    let run = run.unwrap_or_else(|| constructions::default_guard_run(r, s));
    Ok(wrap_construction(
        constructions::guarded_embed(&tau.inner, r, s, run).map_err(err)?,
    ))
}

#[pyfunction]
fn run_lift(sigma: &PyPermutation, k: usize) -> PyConstruction {
    wrap_construction(constructions::run_lift(&sigma.inner, k))
}

#[pyfunction]
fn sharp_tensor_family(n: usize) -> PyResult<PyConstruction> {
    Ok(wrap_construction(
        constructions::sharp_tensor_family(n).map_err(err)?,
    ))
}

#[pyfunction]
fn minimal_family(k: usize) -> PyResult<PyConstruction> {
    Ok(wrap_construction(
        constructions::minimal_family(k).map_err(err)?,
    ))
}

/// Canonical decomposition tree as text, or None if not separable.
#[pyfunction]
fn decompose(pi: &PyPermutation) -> Option<String> {
    separable::decompose(&pi.inner).map(|t| t.to_string())
}

/// Non-coverability downset through the decomposition tree (no solver),
/// or None if not separable.
#[pyfunction]
fn separable_downset(pi: &PyPermutation) -> Option<PyDownset> {
    separable::decompose(&pi.inner).map(|t| PyDownset {
        inner: t.non_cover_downset(),
    })
}

/// All separable target-critical permutations, sorted.
#[pyfunction]
fn enumerate_critical(target: &PyDownset) -> PyResult<Vec<PyPermutation>> {
    Ok(separable::enumerate_critical(&target.inner)
        .map_err(err)?
        .into_iter()
        .map(|p| PyPermutation { inner: p })
        .collect())
}

#[pyfunction]
fn n_upper(r: u64, d: u64) -> PyResult<BigUint> {
    bounds::n_upper(r, d).map_err(err)
}

#[pyfunction]
fn c_rs_upper(r: u64, s: u64) -> BigUint {
    bounds::c_rs_upper(r, s)
}

#[pyfunction]
fn c_k_upper(k: u64) -> BigUint {
    bounds::c_k_upper(k)
}

/// Lower-bound tables over `0..=k_max` and `0..=rs_max`.
#[pyclass(name = "LowerBounds", frozen)]
struct PyLowerBounds {
    inner: bounds::LowerBounds,
}

#[pymethods]
impl PyLowerBounds {
    #[new]
    fn new(k_max: usize, rs_max: usize) -> Self {
        PyLowerBounds {
            inner: bounds::lower_bounds(k_max, rs_max),
        }
    }

    fn minimal_lb(&self, k: usize) -> u64 {
        self.inner.minimal_lb(k)
    }

    fn critical_k_lb(&self, k: usize) -> u64 {
        self.inner.critical_k_lb(k)
    }

    fn critical_rs_lb(&self, r: usize, s: usize) -> u64 {
        self.inner.critical_rs_lb(r, s)
    }

    fn sharp_lb(&self, r: usize, s: usize) -> u64 {
        self.inner.sharp_lb(r, s)
    }
}

#[pyfunction]
fn gadget_verify(r: usize, d: usize) -> PyResult<bool> {
    let gadget = bounds::gadget_build(r, d).map_err(err)?;
    Ok(gadget.functions_close() && gadget.verify())
}

#[pyfunction]
fn peel_envelope(pi: &PyPermutation) -> PyDownset {
    PyDownset {
        inner: bounds::peel_envelope(&pi.inner),
    }
}

#[pyfunction]
fn canonical_representative(pi: &PyPermutation, target: &PyDownset) -> PyPermutation {
    PyPermutation {
        inner: search::canonical_representative(&pi.inner, &target.inner),
    }
}

#[pyfunction]
fn preserving_images(pi: &PyPermutation, target: &PyDownset) -> Vec<PyPermutation> {
    search::preserving_images(&pi.inner, &target.inner)
        .into_iter()
        .map(|p| PyPermutation { inner: p })
        .collect()
}

/// Exhaustive search for target-critical permutations up to `max_len`.
#[pyfunction]
#[pyo3(signature = (target, max_len, symmetry=true, jobs=1, safety_cap=11))]
fn search_critical(
    target: &PyDownset,
    max_len: usize,
    symmetry: bool,
    jobs: usize,
    safety_cap: usize,
) -> PyResult<Vec<PyPermutation>> {
    let mut job = search::SearchJob::new(target.inner.clone(), max_len);
    job.use_symmetry = symmetry;
    job.parallelism = jobs;
    job.safety_cap = safety_cap;
    let outcome = search::search_critical(&job, &|_| {}).map_err(err)?;
    Ok(outcome
        .hits
        .into_iter()
        .map(|h| PyPermutation {
            inner: h.permutation,
        })
        .collect())
}

#[pymodule(name = "permcover")]
fn permcover_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyDownset>()?;
    m.add_class::<PySolver>()?;
    m.add_class::<PyConstruction>()?;
    m.add_class::<PyLowerBounds>()?;
    m.add_function(wrap_pyfunction!(seed_rect_2_1, m)?)?;
    m.add_function(wrap_pyfunction!(seed_triangle_3, m)?)?;
    m.add_function(wrap_pyfunction!(seed_sharp_2_2, m)?)?;
    m.add_function(wrap_pyfunction!(critical_skew_sum, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_step, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_double, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(guarded_embed, m)?)?;
    m.add_function(wrap_pyfunction!(run_lift, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_tensor_family, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_family, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(separable_downset, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_critical, m)?)?;
    m.add_function(wrap_pyfunction!(n_upper, m)?)?;
    m.add_function(wrap_pyfunction!(c_rs_upper, m)?)?;
    m.add_function(wrap_pyfunction!(c_k_upper, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_verify, m)?)?;
    m.add_function(wrap_pyfunction!(peel_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_representative, m)?)?;
    m.add_function(wrap_pyfunction!(preserving_images, m)?)?;
    m.add_function(wrap_pyfunction!(search_critical, m)?)?;
    Ok(())
}
