//! Python bindings: molecules, cost estimates, fault-tolerant overheads,
//! basis-change synthesis, double factorization, and the PPM compiler.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ftre::cost::{self, CostConstants, MolecularInstance, Objective};
use ftre::factorize;
use ftre::gizens;
use ftre::overhead::{self, FtParams, NoiseRegime};
use ftre::pauli::PauliString;
use ftre::ppm;

fn err(e: ftre::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Molecule parameters driving the cost model.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Molecule {
    inner: MolecularInstance,
}

#[pymethods]
impl Molecule {
    #[new]
    fn new(name: &str, basis: &str, n: u64, r: u64, m: u64, alpha: f64) -> PyResult<Self> {
        Ok(Molecule {
            inner: MolecularInstance::new(name, basis, n, r, m, alpha).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn basis(&self) -> String {
        self.inner.basis.clone()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }

    #[getter]
    fn r(&self) -> u64 {
        self.inner.r
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    fn __repr__(&self) -> String {
        format!(
            "Molecule({}/{}: N={}, R={}, M={}, alpha={})",
            self.inner.name,
            self.inner.basis,
            self.inner.n,
            self.inner.r,
            self.inner.m,
            self.inner.alpha
        )
    }
}

/// Logical cost estimate for one molecule.
#[pyclass]
struct CostEstimate {
    #[pyo3(get)]
    objective: String,
    #[pyo3(get)]
    n_t: u64,
    #[pyo3(get)]
    d_t: u64,
    #[pyo3(get)]
    n_l: u64,
    #[pyo3(get)]
    beta: u64,
    #[pyo3(get)]
    eps_q: f64,
    #[pyo3(get)]
    eps_p: f64,
    #[pyo3(get)]
    lambda_rotation: u64,
    #[pyo3(get)]
    pe_iterations: u64,
    #[pyo3(get)]
    breakdown: Vec<(String, f64)>,
}

#[pymethods]
impl CostEstimate {
    #[getter]
    fn count_depth_ratio(&self) -> f64 {
        self.n_t as f64 / self.d_t as f64
    }

    fn __repr__(&self) -> String {
        format!(
            "CostEstimate(n_T={}, D_T={}, n_L={}, objective={})",
            self.n_t, self.d_t, self.n_l, self.objective
        )
    }
}

/// Runs the cost model with the frozen default constants.
#[pyfunction]
#[pyo3(signature = (molecule, eps_total=1e-3, objective="vn"))]
fn estimate(molecule: &Molecule, eps_total: f64, objective: &str) -> PyResult<CostEstimate> {
    let obj: Objective = objective.parse().map_err(err)?;
    let report = cost::total_cost(&molecule.inner, eps_total, obj, &CostConstants::default())
        .map_err(err)?;
    Ok(CostEstimate {
        objective: report.objective.to_string(),
        n_t: report.n_t,
        d_t: report.d_t,
        n_l: report.n_l,
        beta: report.beta,
        eps_q: report.eps_q,
        eps_p: report.eps_p,
        lambda_rotation: report.lambda.rotation,
        pe_iterations: report.pe_iterations,
        breakdown: cost::volume_breakdown(&report)
            .into_iter()
            .map(|(l, s)| (l.to_string(), s))
            .collect(),
    })
}

/// Fault-tolerant footprint and runtime for one logical count pair.
#[pyclass]
struct FtEstimate {
    #[pyo3(get)]
    regime: String,
    #[pyo3(get)]
    d: u64,
    #[pyo3(get)]
    n_rsg: u64,
    #[pyo3(get)]
    n_distill: u64,
    #[pyo3(get)]
    n_cycles: u128,
    #[pyo3(get)]
    t_hours: f64,
    #[pyo3(get)]
    msd_ratio: f64,
}

#[pymethods]
impl FtEstimate {
    fn __repr__(&self) -> String {
        format!(
            "FtEstimate(d={}, n_RSG={}, t={:.3}h, regime={})",
            self.d, self.n_rsg, self.t_hours, self.regime
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n_t, n_l, regime="moderate", eps_total=1e-2, l_intl=1, n_factories=2, factory_size=39))]
#[allow(clippy::too_many_arguments)]
fn ft_overhead(
    n_t: u64,
    n_l: u64,
    regime: &str,
    eps_total: f64,
    l_intl: u64,
    n_factories: u64,
    factory_size: u64,
) -> PyResult<FtEstimate> {
    let regime = NoiseRegime::by_name(regime).map_err(err)?;
    let params = FtParams {
        eps_total,
        l_intl,
        n_factories,
        c_distill: factory_size,
        ..FtParams::default()
    };
    let rep = overhead::ft_report(n_t, n_l, &regime, &params).map_err(err)?;
    Ok(FtEstimate {
        regime: rep.regime.label.clone(),
        d: rep.d,
        n_rsg: rep.n_rsg,
        n_distill: rep.n_distill,
        n_cycles: rep.n_cycles,
        t_hours: rep.t_algo_hours(),
        msd_ratio: rep.msd_ratio,
    })
}

/// Interleaving trade-off samples: `(L, n_RSG, t_hours)` triples.
#[pyfunction]
#[pyo3(signature = (n_t, n_l, ratios, regime="moderate"))]
fn interleave_curve(
    n_t: u64,
    n_l: u64,
    ratios: Vec<u64>,
    regime: &str,
) -> PyResult<Vec<(u64, u64, f64)>> {
    let regime = NoiseRegime::by_name(regime).map_err(err)?;
    let curve =
        overhead::tradeoff_curve(n_t, n_l, &regime, &FtParams::default(), &ratios).map_err(err)?;
    Ok(curve
        .into_iter()
        .map(|(l, n, t)| (l, n, t / 3600.0))
        .collect())
}

/// Log-depth basis-change circuit in its text form.
#[pyfunction]
fn gizens_tree(u: Vec<f64>) -> PyResult<String> {
    let v = gizens::MajoranaVector::normalized(u).map_err(err)?;
    Ok(gizens::gizens_tree(&v).to_text())
}

/// Linear-depth ladder circuit in its text form.
#[pyfunction]
fn givens_ladder(u: Vec<f64>) -> PyResult<String> {
    let v = gizens::MajoranaVector::normalized(u).map_err(err)?;
    Ok(gizens::givens_ladder(&v).to_text())
}

/// Synthesizes the requested circuit and checks it against the dense
/// oracle; returns `(rotations, depth, residual)`.
#[pyfunction]
#[pyo3(signature = (u, kind="tree"))]
fn verify_basis_change(u: Vec<f64>, kind: &str) -> PyResult<(usize, usize, f64)> {
    let v = gizens::MajoranaVector::normalized(u).map_err(err)?;
    let circ = match kind {
        "tree" => gizens::gizens_tree(&v),
        "ladder" => gizens::givens_ladder(&v),
        other => return Err(PyValueError::new_err(format!("unknown kind {other:?}"))),
    };
    let outcome = gizens::verify_basis_change(&circ, &v).map_err(err)?;
    Ok((circ.rotation_count(), circ.depth(), outcome.residual))
}

/// Double factorization summary of a flat row-major tensor.
#[pyclass]
struct Factorization {
    #[pyo3(get)]
    rank_r: usize,
    #[pyo3(get)]
    rank_m: usize,
    #[pyo3(get)]
    per_rank_m: Vec<usize>,
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    truncation_error_bound: f64,
    #[pyo3(get)]
    max_abs_error: f64,
}

#[pyfunction]
#[pyo3(signature = (n, tensor, one_body=None, eps_trunc=1e-3))]
fn double_factorize(
    n: usize,
    tensor: Vec<f64>,
    one_body: Option<Vec<f64>>,
    eps_trunc: f64,
) -> PyResult<Factorization> {
    let h = factorize::TwoElectronTensor::new(n, tensor).map_err(err)?;
    let t = match one_body {
        Some(values) => factorize::OneBodyMatrix::new(n, values).map_err(err)?,
        None => factorize::OneBodyMatrix::zero(n),
    };
    let full = factorize::FactorizedHamiltonian::build(&h).map_err(err)?;
    let truncated = factorize::truncate(&full, eps_trunc).map_err(err)?;
    let alpha = factorize::compute_alpha(&truncated, &t).map_err(err)?;
    let (max_abs, _) = factorize::reconstruction_error(&truncated, &h).map_err(err)?;
    Ok(Factorization {
        rank_r: truncated.rank_r(),
        rank_m: truncated.rank_m(),
        per_rank_m: truncated.per_rank_m(),
        alpha,
        truncation_error_bound: truncated.truncation_error_bound(),
        max_abs_error: max_abs,
    })
}

/// Compiles a Clifford+T program text and executes it on the dense backend;
/// returns the measurement record text.
#[pyfunction]
#[pyo3(signature = (program, n_data, seed=42))]
fn run_program(program: &str, n_data: usize, seed: u64) -> PyResult<String> {
    use rand::SeedableRng;
    let prog = ppm::parse_program(program).map_err(err)?;
    let stream = ppm::compile(&prog, n_data).map_err(err)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let exec = ppm::execute(&stream, None, &mut rng).map_err(err)?;
    Ok(exec.record_text())
}

/// Packs Pauli strings into commuting layers; returns the layer index sets.
#[pyfunction]
#[pyo3(signature = (paulis, max_width=1000000, distance=1000000))]
fn schedule_ppms(
    paulis: Vec<String>,
    max_width: usize,
    distance: usize,
) -> PyResult<Vec<Vec<usize>>> {
    let parsed: Result<Vec<PauliString>, _> =
        paulis.iter().map(|s| PauliString::parse(s)).collect();
    let parsed = parsed.map_err(err)?;
    Ok(ppm::schedule_layers(&parsed, max_width, distance).layers)
}

/// Runs an oracle-backed verification suite; returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite="all", seed=42))]
fn run_verify(suite: &str, seed: u64) -> PyResult<(bool, String)> {
    let suite: ftre::cli::Suite = suite.parse().map_err(err)?;
    let report = ftre::cli::run_verify(suite, seed);
    Ok((report.all_passed(), report.render()))
}

#[pymodule]
fn ftre_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Molecule>()?;
    m.add_class::<CostEstimate>()?;
    m.add_class::<FtEstimate>()?;
    m.add_class::<Factorization>()?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(ft_overhead, m)?)?;
    m.add_function(wrap_pyfunction!(interleave_curve, m)?)?;
    m.add_function(wrap_pyfunction!(gizens_tree, m)?)?;
    m.add_function(wrap_pyfunction!(givens_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(verify_basis_change, m)?)?;
    m.add_function(wrap_pyfunction!(double_factorize, m)?)?;
    m.add_function(wrap_pyfunction!(run_program, m)?)?;
    m.add_function(wrap_pyfunction!(schedule_ppms, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
