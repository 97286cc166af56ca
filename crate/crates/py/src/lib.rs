//! Python bindings for the online Barzilai-Borwein library.
//!
//! Thin wrappers over the core types: vectors cross the boundary as plain
//! Python lists of floats, matrices as lists of rows. Built as a `cdylib`
//! named `obb`; see `python/smoke_test.py` for loading and usage.

use nalgebra::{DMatrix, DVector};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use obb_core::{self as core, Error};

fn to_py_err(error: Error) -> PyErr {
    match error {
        Error::InvalidArgument(_) | Error::Validation(_) | Error::DegenerateSecant(_) => {
            PyValueError::new_err(error.to_string())
        }
        Error::NumericalFailure { .. } | Error::InsufficientData(_) => {
            PyRuntimeError::new_err(error.to_string())
        }
        Error::Io(_) => PyIOError::new_err(error.to_string()),
    }
}

fn vector(values: Vec<f64>) -> DVector<f64> {
    DVector::from_vec(values)
}

fn to_list(v: &DVector<f64>) -> Vec<f64> {
    v.iter().cloned().collect()
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err(
            "matrix rows must be nonempty and of equal length",
        ));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

#[pyclass(name = "FeasibleSet", skip_from_py_object)]
#[derive(Clone)]
struct PyFeasibleSet {
    inner: core::FeasibleSet,
}

#[pymethods]
impl PyFeasibleSet {
    #[staticmethod]
    fn ball(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        core::FeasibleSet::ball(vector(center), radius)
            .map(|inner| PyFeasibleSet { inner })
            .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(name = "box")]
    fn box_set(lower: Vec<f64>, upper: Vec<f64>) -> PyResult<Self> {
        core::FeasibleSet::box_set(vector(lower), vector(upper))
            .map(|inner| PyFeasibleSet { inner })
            .map_err(to_py_err)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn project(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner
            .project(&vector(x))
            .map(|p| to_list(&p))
            .map_err(to_py_err)
    }

    fn diameter(&self) -> f64 {
        self.inner.diameter()
    }

    fn contains(&self, x: Vec<f64>, tol: f64) -> PyResult<bool> {
        self.inner.contains(&vector(x), tol).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("FeasibleSet({})", self.inner.descriptor())
    }
}

#[pyclass(name = "QuadraticLoss", skip_from_py_object)]
#[derive(Clone)]
struct PyQuadraticLoss {
    inner: core::QuadraticLoss,
}

#[pymethods]
impl PyQuadraticLoss {
    #[new]
    #[pyo3(signature = (curvature, center, offset = 0.0))]
    fn new(curvature: Vec<Vec<f64>>, center: Vec<f64>, offset: f64) -> PyResult<Self> {
        core::QuadraticLoss::new(matrix(curvature)?, vector(center), offset)
            .map(|inner| PyQuadraticLoss { inner })
            .map_err(to_py_err)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&vector(x)).map_err(to_py_err)
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner
            .gradient(&vector(x))
            .map(|g| to_list(&g))
            .map_err(to_py_err)
    }

    fn lipschitz_constant(&self) -> f64 {
        self.inner.lipschitz_constant()
    }

    fn center(&self) -> Vec<f64> {
        to_list(self.inner.center())
    }
}

#[pyclass(name = "LossSequence", skip_from_py_object)]
#[derive(Clone)]
struct PyLossSequence {
    inner: core::LossSequence,
}

#[pymethods]
impl PyLossSequence {
    #[staticmethod]
    #[pyo3(signature = (loss, horizon, seed = 0))]
    fn stationary(loss: &PyQuadraticLoss, horizon: usize, seed: u64) -> PyResult<Self> {
        core::LossSequence::new(
            core::Generator::Stationary {
                loss: loss.inner.clone(),
            },
            horizon,
            seed,
        )
        .map(|inner| PyLossSequence { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (base, drift, decay, horizon, seed = 0))]
    fn drifting_center(
        base: &PyQuadraticLoss,
        drift: Vec<f64>,
        decay: f64,
        horizon: usize,
        seed: u64,
    ) -> PyResult<Self> {
        core::LossSequence::new(
            core::Generator::DriftingCenter {
                base: base.inner.clone(),
                drift: vector(drift),
                decay,
            },
            horizon,
            seed,
        )
        .map(|inner| PyLossSequence { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    fn random_rotation(
        dim: usize,
        eig_range: (f64, f64),
        center_range: (f64, f64),
        horizon: usize,
        seed: u64,
    ) -> PyResult<Self> {
        core::LossSequence::new(
            core::Generator::RandomRotation {
                dim,
                eig_range,
                center_range,
            },
            horizon,
            seed,
        )
        .map(|inner| PyLossSequence { inner })
        .map_err(to_py_err)
    }

    fn generate(&self, k: usize) -> PyResult<PyQuadraticLoss> {
        self.inner
            .generate(k)
            .map(|inner| PyQuadraticLoss { inner })
            .map_err(to_py_err)
    }

    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn sequence_lipschitz(&self) -> PyResult<f64> {
        self.inner.sequence_lipschitz().map_err(to_py_err)
    }

    fn max_gradient_norm(&self, set: &PyFeasibleSet) -> PyResult<f64> {
        self.inner.max_gradient_norm(&set.inner).map_err(to_py_err)
    }
}

#[pyclass(name = "StepPolicy")]
struct PyStepPolicy {
    inner: core::StepPolicy,
}

fn safeguard(alpha_min: f64, alpha_max: f64, fallback: f64) -> core::Safeguard {
    core::Safeguard {
        alpha_min,
        alpha_max,
        fallback,
    }
}

#[pymethods]
impl PyStepPolicy {
    #[staticmethod]
    #[pyo3(signature = (alpha_min = 1e-6, alpha_max = 1e3, fallback = 0.1))]
    fn bb1(alpha_min: f64, alpha_max: f64, fallback: f64) -> PyResult<Self> {
        core::StepPolicy::new(
            core::PolicyKind::Bb1,
            safeguard(alpha_min, alpha_max, fallback),
        )
        .map(|inner| PyStepPolicy { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (alpha_min = 1e-6, alpha_max = 1e3, fallback = 0.1))]
    fn bb2(alpha_min: f64, alpha_max: f64, fallback: f64) -> PyResult<Self> {
        core::StepPolicy::new(
            core::PolicyKind::Bb2,
            safeguard(alpha_min, alpha_max, fallback),
        )
        .map(|inner| PyStepPolicy { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (period = 10, alpha_min = 1e-6, alpha_max = 1e3, fallback = 0.1))]
    fn alternating_bb(
        period: usize,
        alpha_min: f64,
        alpha_max: f64,
        fallback: f64,
    ) -> PyResult<Self> {
        core::StepPolicy::new(
            core::PolicyKind::AlternatingBb { period },
            safeguard(alpha_min, alpha_max, fallback),
        )
        .map(|inner| PyStepPolicy { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    fn constant(alpha0: f64) -> PyResult<Self> {
        core::StepPolicy::new(
            core::PolicyKind::Constant { alpha0 },
            core::Safeguard::default(),
        )
        .map(|inner| PyStepPolicy { inner })
        .map_err(to_py_err)
    }

    #[staticmethod]
    fn diminishing(scale: f64) -> PyResult<Self> {
        core::StepPolicy::new(
            core::PolicyKind::Diminishing { scale },
            core::Safeguard::default(),
        )
        .map(|inner| PyStepPolicy { inner })
        .map_err(to_py_err)
    }

    fn descriptor(&self) -> String {
        self.inner.descriptor()
    }

    fn __repr__(&self) -> String {
        format!("StepPolicy({})", self.inner.descriptor())
    }
}

#[pyclass(name = "TrajectoryRecord")]
struct PyTrajectoryRecord {
    inner: core::TrajectoryRecord,
}

#[pymethods]
impl PyTrajectoryRecord {
    fn rounds(&self) -> usize {
        self.inner.rounds()
    }

    #[getter]
    fn iterates(&self) -> Vec<Vec<f64>> {
        self.inner.iterates.iter().map(to_list).collect()
    }

    #[getter]
    fn losses(&self) -> Vec<f64> {
        self.inner.losses.clone()
    }

    #[getter]
    fn gradients(&self) -> Vec<Vec<f64>> {
        self.inner.gradients.iter().map(to_list).collect()
    }

    #[getter]
    fn steps(&self) -> Vec<f64> {
        self.inner.steps.clone()
    }

    #[getter]
    fn degenerate(&self) -> Vec<bool> {
        self.inner.degenerate.clone()
    }

    #[getter]
    fn projection_active(&self) -> Vec<bool> {
        self.inner.projection_active.clone()
    }

    fn aggregate_loss(&self) -> f64 {
        self.inner.aggregate_loss()
    }

    fn degenerate_rounds(&self) -> usize {
        self.inner.degenerate_rounds()
    }

    fn __repr__(&self) -> String {
        format!(
            "TrajectoryRecord(rounds={}, policy={})",
            self.inner.rounds(),
            self.inner.meta.policy
        )
    }
}

#[pyclass(name = "RegretReport")]
struct PyRegretReport {
    inner: core::RegretReport,
}

#[pymethods]
impl PyRegretReport {
    #[staticmethod]
    fn compute(
        traj: &PyTrajectoryRecord,
        seq: &PyLossSequence,
        set: &PyFeasibleSet,
    ) -> PyResult<Self> {
        core::RegretReport::compute(&traj.inner, &seq.inner, &set.inner)
            .map(|inner| PyRegretReport { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn xstar(&self) -> Vec<f64> {
        to_list(&self.inner.xstar)
    }

    #[getter]
    fn regret(&self) -> Vec<f64> {
        self.inner.regret.clone()
    }

    #[getter]
    fn avg_regret(&self) -> Vec<f64> {
        self.inner.avg_regret.clone()
    }

    #[getter]
    fn linearized(&self) -> Vec<f64> {
        self.inner.linearized.clone()
    }

    #[getter]
    fn diameter(&self) -> f64 {
        self.inner.diameter
    }

    #[getter]
    fn grad_max(&self) -> f64 {
        self.inner.grad_max
    }

    #[getter]
    fn zinkevich_bound(&self) -> f64 {
        self.inner.zinkevich
    }

    #[getter]
    fn psi(&self) -> f64 {
        self.inner.psi()
    }

    #[getter]
    fn zeta(&self) -> f64 {
        self.inner.zeta()
    }

    #[getter]
    fn cond_t1(&self) -> String {
        self.inner.condition_t1_label().to_string()
    }

    #[getter]
    fn flag_p(&self) -> bool {
        self.inner.flag_p()
    }

    #[getter]
    fn slope(&self) -> Option<f64> {
        self.inner.slope.map(|s| s.slope)
    }

    fn final_regret(&self) -> f64 {
        self.inner.final_regret()
    }

    fn final_avg_regret(&self) -> f64 {
        self.inner.final_avg_regret()
    }
}

#[pyfunction]
fn bb1(s: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let pair = core::SecantPair::new(vector(s), vector(y)).map_err(to_py_err)?;
    core::bb1(&pair).map_err(to_py_err)
}

#[pyfunction]
fn bb2(s: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    let pair = core::SecantPair::new(vector(s), vector(y)).map_err(to_py_err)?;
    core::bb2(&pair).map_err(to_py_err)
}

#[pyfunction]
fn run(
    seq: &PyLossSequence,
    policy: &mut PyStepPolicy,
    set: &PyFeasibleSet,
    x0: Vec<f64>,
    rounds: usize,
) -> PyResult<PyTrajectoryRecord> {
    core::run(
        &seq.inner,
        &mut policy.inner,
        &set.inner,
        &vector(x0),
        rounds,
    )
    .map(|inner| PyTrajectoryRecord { inner })
    .map_err(to_py_err)
}

#[pyfunction]
fn hindsight_minimizer(seq: &PyLossSequence, set: &PyFeasibleSet) -> PyResult<Vec<f64>> {
    core::hindsight_minimizer(&seq.inner, &set.inner)
        .map(|x| to_list(&x))
        .map_err(to_py_err)
}

#[pyfunction]
fn projected_gradient_minimizer(seq: &PyLossSequence, set: &PyFeasibleSet) -> PyResult<Vec<f64>> {
    core::projected_gradient_minimizer(&seq.inner, &set.inner)
        .map(|x| to_list(&x))
        .map_err(to_py_err)
}

#[pyfunction]
fn static_regret(
    traj: &PyTrajectoryRecord,
    seq: &PyLossSequence,
    xstar: Vec<f64>,
) -> PyResult<Vec<f64>> {
    core::static_regret(&traj.inner, &seq.inner, &vector(xstar)).map_err(to_py_err)
}

#[pyfunction]
fn linearized_regret(traj: &PyTrajectoryRecord, xstar: Vec<f64>) -> PyResult<Vec<f64>> {
    core::linearized_regret(&traj.inner, &vector(xstar)).map_err(to_py_err)
}

#[pyfunction]
fn zinkevich_bound(diameter: f64, grad_max: f64, alphas: Vec<f64>) -> PyResult<f64> {
    core::zinkevich_bound(diameter, grad_max, &alphas).map_err(to_py_err)
}

#[pyfunction]
fn sedrakyan_check(a: Vec<f64>, b: Vec<f64>) -> PyResult<bool> {
    core::sedrakyan_check(&a, &b).map_err(to_py_err)
}

/// Returns `(slope, used_points, excluded_points)`.
#[pyfunction]
fn sublinearity_slope(curve: Vec<f64>, k_lo: usize, k_hi: usize) -> PyResult<(f64, usize, usize)> {
    core::sublinearity_slope(&curve, k_lo, k_hi)
        .map(|fit| (fit.slope, fit.used, fit.excluded))
        .map_err(to_py_err)
}

#[pymodule]
fn obb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFeasibleSet>()?;
    m.add_class::<PyQuadraticLoss>()?;
    m.add_class::<PyLossSequence>()?;
    m.add_class::<PyStepPolicy>()?;
    m.add_class::<PyTrajectoryRecord>()?;
    m.add_class::<PyRegretReport>()?;
    m.add_function(wrap_pyfunction!(bb1, m)?)?;
    m.add_function(wrap_pyfunction!(bb2, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(hindsight_minimizer, m)?)?;
    m.add_function(wrap_pyfunction!(projected_gradient_minimizer, m)?)?;
    m.add_function(wrap_pyfunction!(static_regret, m)?)?;
    m.add_function(wrap_pyfunction!(linearized_regret, m)?)?;
    m.add_function(wrap_pyfunction!(zinkevich_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sedrakyan_check, m)?)?;
    m.add_function(wrap_pyfunction!(sublinearity_slope, m)?)?;
    Ok(())
}
