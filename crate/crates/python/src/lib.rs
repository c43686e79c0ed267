//! Python extension module exposing the main types and operations of
//! `qcb-core`: spectral data of the XY chain, the Chernoff metric tensor,
//! the density-matrix oracle and the scaling-exponent fits.
//!
//! Build with `cargo build --release -p qcb-python`; the resulting
//! `libqcb_py.so` imports as the module `qcb_py` once renamed to
//! `qcb_py.so` (see `python/smoke_test.py`).
//!
//! The transverse field is called `lam` throughout because `lambda` is a
//! Python keyword.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qcb_core::oracle::DensityMatrix;
use qcb_core::scaling::{self, ComponentId, FitModel, Regime};
use qcb_core::{
    metric, oracle, xy, CouplingPoint, EvaluationScheme, QuadratureParams, Region, ThermalPoint,
};

fn err(e: qcb_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coupling(gamma: f64, lam: f64) -> PyResult<CouplingPoint> {
    CouplingPoint::new(gamma, lam).map_err(err)
}

fn thermal_point(
    gamma: f64,
    lam: f64,
    t: Option<f64>,
    beta: Option<f64>,
    zero_t: bool,
) -> PyResult<ThermalPoint> {
    let c = coupling(gamma, lam)?;
    match (t, beta, zero_t) {
        (Some(t), None, false) if t > 0.0 => ThermalPoint::new(1.0 / t, c).map_err(err),
        (None, Some(b), false) => ThermalPoint::new(b, c).map_err(err),
        (None, None, true) => Ok(ThermalPoint::zero_temperature(c)),
        _ => Err(PyValueError::new_err(
            "give exactly one of t > 0, beta, or zero_t=True",
        )),
    }
}

fn scheme(finite_n: Option<usize>, rel_tol: f64, max_depth: u32) -> PyResult<EvaluationScheme> {
    let base = match finite_n {
        Some(n) => EvaluationScheme::finite(n).map_err(err)?,
        None => EvaluationScheme::thermodynamic(),
    };
    Ok(base.with_quadrature(QuadratureParams { rel_tol, max_depth }))
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::A => "A",
        Region::B => "B",
        Region::Critical => "critical",
    }
}

fn density_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<DensityMatrix> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (i, row) in rows.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            entries[i + dim * j] = z;
        }
    }
    DensityMatrix::new(dim, entries).map_err(err)
}

fn matrix_rows(m: &DensityMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.entry(i, j)).collect())
        .collect()
}

/// Momenta `2πj/N` of an odd chain.
#[pyfunction]
fn modes(n: usize) -> PyResult<Vec<f64>> {
    xy::modes(n).map_err(err)
}

/// Energy gap and region label ("A", "B" or "critical") at a coupling.
#[pyfunction]
fn gap(gamma: f64, lam: f64) -> PyResult<(f64, String)> {
    let g = xy::gap(&coupling(gamma, lam)?);
    Ok((g.value, region_name(g.region).to_string()))
}

/// Quasiparticle energies aligned with `modes(n)`.
#[pyfunction]
fn quasiparticle_energies(n: usize, gamma: f64, lam: f64) -> PyResult<Vec<f64>> {
    xy::quasiparticle_energies(n, &coupling(gamma, lam)?).map_err(err)
}

/// Dispersion and Bogoliubov-angle data at momentum `k`.
#[pyfunction]
fn mode_data(py: Python<'_>, k: f64, gamma: f64, lam: f64) -> PyResult<Py<PyDict>> {
    let d = xy::mode_data(k, &coupling(gamma, lam)?);
    let out = PyDict::new(py);
    out.set_item("k", d.k)?;
    out.set_item("epsilon", d.epsilon)?;
    out.set_item("delta", d.delta)?;
    out.set_item("lambda_k", d.lambda_k)?;
    out.set_item("theta", d.theta)?;
    out.set_item("dtheta_dlambda", d.dtheta_dlambda)?;
    out.set_item("dtheta_dgamma", d.dtheta_dgamma)?;
    Ok(out.into())
}

/// Full metric tensor at one point of the `(β, γ, λ)` manifold.
///
/// Exactly one of `t`, `beta`, `zero_t=True` selects the temperature; at
/// zero temperature the classical part is reported as its limit (zeros)
/// with the `classical_zero_t_limit` flag set.
#[pyfunction]
#[pyo3(signature = (gamma, lam, t=None, beta=None, zero_t=false, finite_n=None,
                    rel_tol=1e-9, max_depth=40))]
#[allow(clippy::too_many_arguments)]
fn metric_tensor(
    py: Python<'_>,
    gamma: f64,
    lam: f64,
    t: Option<f64>,
    beta: Option<f64>,
    zero_t: bool,
    finite_n: Option<usize>,
    rel_tol: f64,
    max_depth: u32,
) -> PyResult<Py<PyDict>> {
    let point = thermal_point(gamma, lam, t, beta, zero_t)?;
    let scheme = scheme(finite_n, rel_tol, max_depth)?;
    let m = metric::full_metric(&point, &scheme).map_err(err)?;
    let (max_eig, direction) = m.max_eigenvalue().map_err(err)?;

    let classical = PyDict::new(py);
    classical.set_item("bb", m.classical.beta_beta)?;
    classical.set_item("bg", m.classical.beta_gamma)?;
    classical.set_item("bl", m.classical.beta_lambda)?;
    classical.set_item("gg", m.classical.gamma_gamma)?;
    classical.set_item("gl", m.classical.gamma_lambda)?;
    classical.set_item("ll", m.classical.lambda_lambda)?;
    let nonclassical = PyDict::new(py);
    nonclassical.set_item("gg", m.nonclassical.gamma_gamma)?;
    nonclassical.set_item("gl", m.nonclassical.gamma_lambda)?;
    nonclassical.set_item("ll", m.nonclassical.lambda_lambda)?;

    let out = PyDict::new(py);
    out.set_item("gamma", gamma)?;
    out.set_item("lam", lam)?;
    out.set_item("classical", classical)?;
    out.set_item("nonclassical", nonclassical)?;
    out.set_item("matrix", m.matrix().map(|row| row.to_vec()).to_vec())?;
    out.set_item("max_eig", max_eig)?;
    out.set_item("direction", direction.to_vec())?;
    out.set_item("classical_zero_t_limit", m.classical_zero_t_limit)?;
    out.set_item("converged", m.converged)?;
    Ok(out.into())
}

/// Exact Gibbs state of the momentum pair `(k, −k)` (4×4 nested list) or of
/// the unpaired `k = 0` mode (2×2).
#[pyfunction]
fn mode_pair_state(k: f64, beta: f64, gamma: f64, lam: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let p = ThermalPoint::new(beta, coupling(gamma, lam)?).map_err(err)?;
    let st = oracle::mode_pair_thermal_state(k, &p).map_err(err)?;
    Ok(matrix_rows(&st.rho))
}

/// Chernoff quantity `Q = min_s Tr(ρ^s σ^{1−s})` and its minimizer, for
/// density matrices given as nested lists of complex numbers.
#[pyfunction]
fn chernoff_q(rho: Vec<Vec<Complex64>>, sigma: Vec<Vec<Complex64>>) -> PyResult<(f64, f64)> {
    oracle::chernoff_q(&density_matrix(rho)?, &density_matrix(sigma)?).map_err(err)
}

/// Spectral line element `½ Σ |⟨i|dρ|j⟩|²/(√p_i + √p_j)²`.
#[pyfunction]
fn spectral_line_element(rho: Vec<Vec<Complex64>>, drho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let rho = density_matrix(rho)?;
    let dim = drho.len();
    if drho.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("perturbation must be square"));
    }
    let mut flat = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (i, row) in drho.iter().enumerate() {
        for (j, &z) in row.iter().enumerate() {
            flat[i + dim * j] = z;
        }
    }
    oracle::spectral_line_element(&rho, &flat).map_err(err)
}

/// Finite-difference oracle check of the analytic tensor along one
/// direction; see `qcb oracle-check`.
#[pyfunction]
#[pyo3(signature = (beta, gamma, lam, direction, n=11, step=1e-2))]
fn fd_metric_check(
    py: Python<'_>,
    beta: f64,
    gamma: f64,
    lam: f64,
    direction: [f64; 3],
    n: usize,
    step: f64,
) -> PyResult<Py<PyDict>> {
    let p = ThermalPoint::new(beta, coupling(gamma, lam)?).map_err(err)?;
    let check = oracle::fd_metric_check(&p, direction, step, n).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("analytic", check.analytic)?;
    out.set_item("oracle", check.oracle)?;
    out.set_item("rel_err", check.rel_err)?;
    out.set_item("direction", check.direction.to_vec())?;
    out.set_item("step_warning", check.step_warning)?;
    Ok(out.into())
}

/// Temperature-scaling fit of one component at a coupling. The regime
/// (quasi-classical vs quantum-critical) follows from the gap; default
/// windows are `[Δ/500, Δ/20]` and `[1e-4, 1e-2]` respectively.
#[pyfunction]
#[pyo3(signature = (gamma, lam, component, t_min=None, t_max=None, points=16))]
fn fit_exponent(
    py: Python<'_>,
    gamma: f64,
    lam: f64,
    component: &str,
    t_min: Option<f64>,
    t_max: Option<f64>,
    points: usize,
) -> PyResult<Py<PyDict>> {
    let component = ComponentId::parse(component)
        .ok_or_else(|| PyValueError::new_err(format!("unknown component {component:?}")))?;
    let c = coupling(gamma, lam)?;
    let info = xy::gap(&c);
    let critical = info.region == Region::Critical;
    let (t_min, t_max) = if critical {
        (t_min.unwrap_or(1e-4), t_max.unwrap_or(1e-2))
    } else {
        (
            t_min.unwrap_or(info.value / 500.0),
            t_max.unwrap_or(info.value / 20.0),
        )
    };
    let sweep =
        scaling::sweep_temperature(&c, t_min, t_max, points, &EvaluationScheme::thermodynamic())
            .map_err(err)?;
    let fit = match sweep.regime {
        Regime::QuasiClassical => scaling::fit_quasiclassical(&sweep, component),
        Regime::QuantumCritical => scaling::fit_critical(&sweep, component),
    }
    .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item(
        "model",
        match fit.model {
            FitModel::QuasiClassicalClassical => "quasiclassical-classical",
            FitModel::QuasiClassicalNonclassical => "quasiclassical-nonclassical",
            FitModel::CriticalPowerLaw => "critical-power-law",
            FitModel::CriticalConstant => "critical-constant",
            FitModel::ExactZero => "exact-zero",
        },
    )?;
    out.set_item("alpha", fit.alpha)?;
    out.set_item("alpha_stderr", fit.alpha_stderr)?;
    out.set_item("r_squared", fit.r_squared)?;
    out.set_item("window", (fit.window.0, fit.window.1))?;
    out.set_item("reliable", fit.reliable)?;
    out.set_item("constant", fit.constant)?;
    Ok(out.into())
}

#[pymodule]
fn qcb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NC_TENSOR_TO_CHERNOFF", metric::NC_TENSOR_TO_CHERNOFF)?;
    m.add_function(wrap_pyfunction!(modes, m)?)?;
    m.add_function(wrap_pyfunction!(gap, m)?)?;
    m.add_function(wrap_pyfunction!(quasiparticle_energies, m)?)?;
    m.add_function(wrap_pyfunction!(mode_data, m)?)?;
    m.add_function(wrap_pyfunction!(metric_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(mode_pair_state, m)?)?;
    m.add_function(wrap_pyfunction!(chernoff_q, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_line_element, m)?)?;
    m.add_function(wrap_pyfunction!(fd_metric_check, m)?)?;
    m.add_function(wrap_pyfunction!(fit_exponent, m)?)?;
    Ok(())
}
