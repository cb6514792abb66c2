//! Python bindings: scenario parameters, the closed-form success
//! probabilities, the Bayesian simulator and the figure sweeps.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use spoof_limits::bayes::{self, Hypothesis, ProjectorMode, TrajectoryConfig};
use spoof_limits::figures::{run_scenario, Grid, RunConfig, Scenario};
use spoof_limits::gaussian::{self, GaussianPrior, TruncationPolicy};
use spoof_limits::{bpsk, two_pulse, verify, Error, ScenarioParams};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::InvalidParameter(_)
        | Error::InvalidGrid(_)
        | Error::InsufficientCutoff { .. }
        | Error::NonNormalizablePrior => PyValueError::new_err(err.to_string()),
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

fn parse_hypothesis(name: &str) -> PyResult<Hypothesis> {
    match name {
        "H0" | "h0" => Ok(Hypothesis::H0),
        "H1" | "h1" => Ok(Hypothesis::H1),
        _ => Err(PyValueError::new_err(format!(
            "unknown hypothesis '{name}' (expected 'H0' or 'H1')"
        ))),
    }
}

/// Mean photon number `N`, spoof prior `p` and, optionally, a forced
/// spoofer success probability `gamma`.
#[pyclass(name = "ScenarioParams", frozen)]
struct PyScenarioParams {
    inner: ScenarioParams,
}

#[pymethods]
impl PyScenarioParams {
    #[new]
    #[pyo3(signature = (mean_photon_number, prior_spoof=0.5, gamma=None))]
    fn new(mean_photon_number: f64, prior_spoof: f64, gamma: Option<f64>) -> PyResult<Self> {
        let mut inner = ScenarioParams::new(mean_photon_number, prior_spoof).map_err(to_py)?;
        if let Some(g) = gamma {
            inner = inner.with_gamma(g).map_err(to_py)?;
        }
        Ok(Self { inner })
    }

    #[getter]
    fn mean_photon_number(&self) -> f64 {
        self.inner.mean_photon_number
    }

    #[getter]
    fn prior_spoof(&self) -> f64 {
        self.inner.prior_spoof
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    /// `(eta_plus, eta_minus)` for a single BPSK pulse.
    fn eta_pair(&self) -> PyResult<(f64, f64)> {
        let e = bpsk::eta_pair(&self.inner).map_err(to_py)?;
        Ok((e.eta_plus, e.eta_minus))
    }

    fn p_success_bpsk(&self) -> PyResult<f64> {
        bpsk::p_success_bpsk(&self.inner).map_err(to_py)
    }

    fn p_success_two_pulse(&self) -> PyResult<f64> {
        two_pulse::p_success_two_pulse(&self.inner).map_err(to_py)
    }

    /// The three roots of the two-pulse characteristic cubic, descending.
    fn two_pulse_roots(&self) -> PyResult<Vec<f64>> {
        Ok(
            two_pulse::solve_cubic(&two_pulse::cubic_coeffs(&self.inner))
                .map_err(to_py)?
                .to_vec(),
        )
    }

    /// `(P(1|H0), P(1|H1))` for the receiver's projective measurement.
    fn outcome_probs(&self) -> PyResult<(f64, f64)> {
        let o = bayes::outcome_probs(&self.inner).map_err(to_py)?;
        Ok((o.p1_given_h0, o.p1_given_h1))
    }

    fn __repr__(&self) -> String {
        format!(
            "ScenarioParams(mean_photon_number={}, prior_spoof={}, gamma={})",
            self.inner.mean_photon_number,
            self.inner.prior_spoof,
            self.inner.gamma()
        )
    }
}

/// Prior `1/(gamma+1)` above which the best receiver declares a spoof
/// without measuring.
#[pyfunction]
fn spoof_assumption_threshold(mean_photon_number: f64) -> f64 {
    bpsk::spoof_assumption_threshold(mean_photon_number)
}

/// Success probability at `p = 1/2` against a heterodyne spoofer sending
/// Gaussian-modulated pulses of amplitude `alpha`.
#[pyfunction]
#[pyo3(signature = (alpha, cutoff=None))]
fn p_success_gaussian(alpha: f64, cutoff: Option<usize>) -> PyResult<f64> {
    let policy = cutoff.map_or_else(
        || TruncationPolicy::for_amplitude(alpha),
        TruncationPolicy::new,
    );
    gaussian::p_success_gaussian(alpha, &policy).map_err(to_py)
}

/// Best average fidelity `(1+lambda)/(2+lambda)` of measure-and-prepare.
#[pyfunction]
fn avg_fidelity_bound(lam: f64) -> PyResult<f64> {
    Ok(gaussian::avg_fidelity_bound(
        &GaussianPrior::new(lam).map_err(to_py)?,
    ))
}

/// Monte-Carlo `(mean, standard_error)` of the heterodyne spoofer's fidelity.
#[pyfunction]
#[pyo3(signature = (lam, n_trials=100_000, seed=0))]
fn mc_average_fidelity(lam: f64, n_trials: usize, seed: u64) -> PyResult<(f64, f64)> {
    let prior = GaussianPrior::new(lam).map_err(to_py)?;
    let est = gaussian::mc_average_fidelity(&prior, n_trials, seed).map_err(to_py)?;
    Ok((est.mean, est.std_error))
}

/// Posterior `(P(H0), P(H1))` after each pulse, starting from `(0.5, 0.5)`.
#[pyfunction]
#[pyo3(signature = (truth, mean_photon_number=0.1, n_pulses=200, seed=0, projector="fixed"))]
fn simulate_trajectory(
    truth: &str,
    mean_photon_number: f64,
    n_pulses: usize,
    seed: u64,
    projector: &str,
) -> PyResult<Vec<(f64, f64)>> {
    let truth = parse_hypothesis(truth)?;
    let mode: ProjectorMode = projector.parse().map_err(to_py)?;
    let params = ScenarioParams::new(mean_photon_number, 0.5).map_err(to_py)?;
    let config = TrajectoryConfig {
        mode,
        ..TrajectoryConfig::default()
    };
    let traj =
        bayes::simulate_trajectory_with(truth, &params, n_pulses, seed, &config).map_err(to_py)?;
    Ok(traj
        .states
        .iter()
        .map(|s| (s.prior_h0, s.prior_h1))
        .collect())
}

/// A swept figure: x-axis name and values, named series and summary notes.
#[pyclass(name = "SweepTable", frozen, get_all)]
struct PySweepTable {
    x_name: String,
    x_values: Vec<f64>,
    series: BTreeMap<String, Vec<f64>>,
    notes: BTreeMap<String, f64>,
}

#[pymethods]
impl PySweepTable {
    fn __repr__(&self) -> String {
        let names: Vec<&str> = self.series.keys().map(String::as_str).collect();
        format!(
            "SweepTable(x={}, points={}, series={:?})",
            self.x_name,
            self.x_values.len(),
            names
        )
    }
}

/// Run a named scenario (`bpsk-vs-p`, `bpsk-vs-n`, `bayes`, `gauss-vs-n`,
/// `twopulse-vs-p`). Unset options keep the scenario defaults.
#[pyfunction]
#[pyo3(signature = (
    scenario, *, mean_photon_number=None, prior_spoof=None, grid=None, log=None,
    seed=None, n_pulses=None, n_trials=None, cutoff=None
))]
#[allow(clippy::too_many_arguments)]
fn run_figure(
    scenario: &str,
    mean_photon_number: Option<f64>,
    prior_spoof: Option<f64>,
    grid: Option<(f64, f64, usize)>,
    log: Option<bool>,
    seed: Option<u64>,
    n_pulses: Option<usize>,
    n_trials: Option<usize>,
    cutoff: Option<usize>,
) -> PyResult<PySweepTable> {
    let scenario: Scenario = scenario.parse().map_err(to_py)?;
    let mut config = RunConfig::defaults(scenario);
    if let Some(n) = mean_photon_number {
        config.mean_photon_number = n;
    }
    if let Some(p) = prior_spoof {
        config.prior_spoof = p;
    }
    if let Some((min, max, count)) = grid {
        config.grid = Grid {
            min,
            max,
            count,
            log: config.grid.log,
        };
    }
    if let Some(l) = log {
        config.grid.log = l;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(k) = n_pulses {
        config.n_pulses = k;
    }
    if let Some(k) = n_trials {
        config.n_trials = k;
    }
    config.cutoff = cutoff.or(config.cutoff);
    let table = run_scenario(&config).map_err(to_py)?;
    Ok(PySweepTable {
        x_name: table.x_name,
        x_values: table.x_values,
        series: table
            .series
            .into_iter()
            .map(|s| (s.name, s.values))
            .collect(),
        notes: table.notes.into_iter().collect(),
    })
}

/// Every closed-form-versus-oracle check as `(name, max_error, tolerance, passed)`.
#[pyfunction]
fn run_verification() -> PyResult<Vec<(String, f64, f64, bool)>> {
    let checks = verify::run_all().map_err(to_py)?;
    Ok(checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.max_error, c.tolerance, c.passed()))
        .collect())
}

#[pymodule]
fn spoof_limits_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenarioParams>()?;
    m.add_class::<PySweepTable>()?;
    m.add_function(wrap_pyfunction!(spoof_assumption_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(p_success_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(avg_fidelity_bound, m)?)?;
    m.add_function(wrap_pyfunction!(mc_average_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(run_figure, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
