//! Python bindings for the `sfc_backup` simulator.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sfc_backup::harness::{self, ExperimentConfig, Overrides};
use sfc_backup::learning::{self, BonusSign};
use sfc_backup::model::{Link, Resource};
use sfc_backup::oracle::{self, DEFAULT_BUDGET};
use sfc_backup::placement;
use sfc_backup::policy::{PolicyKind, RewardWeights};
use sfc_backup::workload;
use sfc_backup::{Catalog, EdgeNetwork, ResidualCapacity, SfcId, VnfId};

fn py_err(e: sfc_backup::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "PlacementPlan", frozen, get_all)]
struct PyPlacementPlan {
    sfc: usize,
    assignment: Vec<usize>,
    latency: f64,
    at_edge: bool,
}

impl From<placement::PlacementPlan> for PyPlacementPlan {
    fn from(p: placement::PlacementPlan) -> Self {
        PyPlacementPlan {
            sfc: p.sfc.index(),
            assignment: p.assignment.iter().map(|n| n.index()).collect(),
            latency: p.latency,
            at_edge: p.at_edge,
        }
    }
}

#[pymethods]
impl PyPlacementPlan {
    fn __repr__(&self) -> String {
        format!(
            "PlacementPlan(sfc={}, assignment={:?}, latency={}, at_edge={})",
            self.sfc, self.assignment, self.latency, self.at_edge
        )
    }
}

/// Edge network plus VNF/SFC catalog.
#[pyclass(name = "Instance", frozen)]
struct PyInstance {
    inner: sfc_backup::Instance,
}

impl PyInstance {
    fn residual(&self, residual: Option<Vec<Resource>>) -> PyResult<ResidualCapacity> {
        match residual {
            None => Ok(ResidualCapacity::full(&self.inner.network)),
            Some(r) if r.len() == self.inner.network.num_servers() => Ok(ResidualCapacity::from_vec(r)),
            Some(r) => Err(PyValueError::new_err(format!(
                "residual has {} entries for {} servers",
                r.len(),
                self.inner.network.num_servers()
            ))),
        }
    }
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(
        capacities: Vec<Resource>,
        links: Vec<(usize, usize, f64)>,
        vnf_demands: Vec<Resource>,
        sfc_chains: Vec<Vec<usize>>,
    ) -> PyResult<Self> {
        let network = EdgeNetwork::new(
            capacities,
            links.into_iter().map(|(u, v, latency)| Link { u, v, latency }).collect(),
        );
        let catalog = Catalog::new(
            vnf_demands,
            sfc_chains.into_iter().map(|c| c.into_iter().map(VnfId).collect()).collect(),
        );
        let inner = sfc_backup::Instance::new(network, catalog).map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    /// The bundled six-server instance.
    #[staticmethod]
    fn canonical() -> PyResult<Self> {
        let inner = ExperimentConfig::canonical().instance.build().map_err(py_err)?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn num_servers(&self) -> usize {
        self.inner.network.num_servers()
    }

    #[getter]
    fn num_sfcs(&self) -> usize {
        self.inner.catalog.num_sfcs()
    }

    #[getter]
    fn capacities(&self) -> Vec<Resource> {
        self.inner.network.capacities().to_vec()
    }

    /// Minimum-latency walk for one chain.
    #[pyo3(signature = (sfc, residual=None))]
    fn get_consumption(&self, sfc: usize, residual: Option<Vec<Resource>>) -> PyResult<PyPlacementPlan> {
        let r = self.residual(residual)?;
        placement::get_consumption(&self.inner.network, &self.inner.catalog, &r, SfcId(sfc))
            .map(Into::into)
            .map_err(py_err)
    }

    #[pyo3(signature = (sfc, residual=None))]
    fn first_fit(&self, sfc: usize, residual: Option<Vec<Resource>>) -> PyResult<PyPlacementPlan> {
        let r = self.residual(residual)?;
        placement::first_fit(&self.inner.network, &self.inner.catalog, &r, SfcId(sfc))
            .map(Into::into)
            .map_err(py_err)
    }

    /// Exhaustive minimum latency, or None when no layout fits.
    #[pyo3(signature = (sfc, residual=None, budget=DEFAULT_BUDGET))]
    fn optimal_chain_latency(&self, sfc: usize, residual: Option<Vec<Resource>>, budget: u64) -> PyResult<Option<f64>> {
        let r = self.residual(residual)?;
        oracle::optimal_chain_latency(&self.inner.network, &self.inner.catalog, &r, SfcId(sfc), budget).map_err(py_err)
    }

    /// Best expected slot value under the true parameters.
    /// Returns `(value, selected_sfcs)`.
    #[pyo3(signature = (truth, omega=1.0, mu=1.0, budget=DEFAULT_BUDGET))]
    fn optimal_slot_value(&self, truth: &PyGroundTruth, omega: f64, mu: f64, budget: u64) -> PyResult<(f64, Vec<usize>)> {
        let w = RewardWeights::new(omega, mu).map_err(py_err)?;
        let res = oracle::optimal_slot_value(&self.inner, &truth.inner, &w, budget).map_err(py_err)?;
        Ok((res.best_value, res.best_selection.iter().map(|f| f.index()).collect()))
    }
}

/// Hidden request probabilities and VNF failure means.
#[pyclass(name = "GroundTruth", frozen)]
struct PyGroundTruth {
    inner: workload::GroundTruth,
}

#[pymethods]
impl PyGroundTruth {
    #[new]
    #[pyo3(signature = (request_prob, failure_mean, seed=0))]
    fn new(request_prob: Vec<Vec<f64>>, failure_mean: Vec<f64>, seed: u64) -> PyResult<Self> {
        let inner = workload::GroundTruth::new(request_prob, failure_mean, seed).map_err(py_err)?;
        Ok(PyGroundTruth { inner })
    }

    fn true_popularity(&self) -> Vec<f64> {
        self.inner.true_popularity()
    }

    /// `(requests per SFC, failed flag per VNF)` for slot `t`.
    fn sample_slot(&self, t: u64) -> (Vec<u32>, Vec<bool>) {
        let o = workload::sample_slot(&self.inner, t);
        (o.requests, o.vnf_failed)
    }
}

fn observation(t: u64, requests: Vec<u32>, failed: Vec<bool>) -> workload::SlotObservation {
    workload::SlotObservation {
        t,
        requests,
        vnf_failed: failed,
    }
}

#[pyclass(name = "PopularityLearner")]
struct PyPopularityLearner {
    inner: learning::PopularityLearner,
}

#[pymethods]
impl PyPopularityLearner {
    #[new]
    fn new(users: usize, requests0: Vec<u32>) -> Self {
        let inner = learning::PopularityLearner::init(users, &observation(0, requests0, Vec::new()));
        PyPopularityLearner { inner }
    }

    fn update(&mut self, requests: Vec<u32>, deployed: Vec<bool>) -> PyResult<()> {
        let n = self.inner.count.len();
        if requests.len() != n || deployed.len() != n {
            return Err(PyValueError::new_err(format!("expected {n} entries")));
        }
        self.inner.update(&observation(0, requests, Vec::new()), &deployed);
        Ok(())
    }

    fn estimates(&self, t: u64) -> PyResult<Vec<f64>> {
        if t == 0 {
            return Err(PyValueError::new_err("t must be at least 1"));
        }
        Ok(self.inner.estimates(t))
    }

    #[getter]
    fn count(&self) -> Vec<u64> {
        self.inner.count.clone()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean.clone()
    }
}

#[pyclass(name = "FailureLearner")]
struct PyFailureLearner {
    inner: learning::FailureLearner,
}

#[pymethods]
impl PyFailureLearner {
    #[new]
    #[pyo3(signature = (failed0, scale, optimistic=false))]
    fn new(failed0: Vec<bool>, scale: f64, optimistic: bool) -> Self {
        let sign = if optimistic {
            BonusSign::Optimistic
        } else {
            BonusSign::Pessimistic
        };
        let inner = learning::FailureLearner::init(&observation(0, Vec::new(), failed0), scale, sign);
        PyFailureLearner { inner }
    }

    fn update(&mut self, failed: Vec<bool>, placed: Vec<u64>) -> PyResult<()> {
        let n = self.inner.count.len();
        if failed.len() != n || placed.len() != n {
            return Err(PyValueError::new_err(format!("expected {n} entries")));
        }
        self.inner.update(&observation(0, Vec::new(), failed), &placed);
        Ok(())
    }

    fn estimates(&self, t: u64) -> PyResult<Vec<f64>> {
        if t == 0 {
            return Err(PyValueError::new_err("t must be at least 1"));
        }
        Ok(self.inner.estimates(t))
    }

    #[getter]
    fn count(&self) -> Vec<u64> {
        self.inner.count.clone()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.inner.mean.clone()
    }
}

#[pyclass(name = "TraceRow", frozen, get_all)]
struct PyTraceRow {
    t: u64,
    policy: String,
    seed: u64,
    realized_reward: f64,
    expected_reward: f64,
    remaining_resource: i64,
    num_deployed: usize,
    oracle_value: Option<f64>,
    regret: Option<f64>,
}

/// Bundled config document as JSON text.
#[pyfunction]
fn canonical_config() -> &'static str {
    harness::config::CANONICAL_CONFIG
}

/// Runs an experiment and returns `(rows, summary_json)`. `config` is JSON
/// text; None uses the bundled config. Keyword arguments override it.
#[pyfunction]
#[pyo3(signature = (config=None, slots=None, seeds=None, policies=None, users=None, capacity_scale=None, regret=None))]
#[allow(clippy::too_many_arguments)]
fn run(
    py: Python<'_>,
    config: Option<&str>,
    slots: Option<u64>,
    seeds: Option<Vec<u64>>,
    policies: Option<Vec<String>>,
    users: Option<usize>,
    capacity_scale: Option<f64>,
    regret: Option<bool>,
) -> PyResult<(Vec<PyTraceRow>, String)> {
    let cfg = match config {
        Some(text) => ExperimentConfig::from_json(text).map_err(py_err)?,
        None => ExperimentConfig::canonical(),
    };
    let policies = policies
        .map(|ps| ps.iter().map(|p| p.parse::<PolicyKind>()).collect::<Result<Vec<_>, _>>())
        .transpose()
        .map_err(py_err)?;
    let overrides = Overrides {
        slots,
        seeds,
        policies,
        regret,
        capacity_scale,
        users,
    };
    let exp = cfg.resolve(&overrides).map_err(py_err)?;
    let traces = py.detach(|| harness::run(&exp)).map_err(py_err)?;
    let summary = serde_json::to_string(&harness::Summary::of(&traces)).expect("summary serializes");
    let rows = traces
        .into_iter()
        .flat_map(|t| t.rows)
        .map(|r| PyTraceRow {
            t: r.t,
            policy: r.policy.name().to_string(),
            seed: r.seed,
            realized_reward: r.realized_reward,
            expected_reward: r.expected_reward,
            remaining_resource: r.remaining_resource,
            num_deployed: r.num_deployed,
            oracle_value: r.oracle_value,
            regret: r.regret,
        })
        .collect();
    Ok((rows, summary))
}

#[pymodule]
fn sfcbackup(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyGroundTruth>()?;
    m.add_class::<PyPlacementPlan>()?;
    m.add_class::<PyPopularityLearner>()?;
    m.add_class::<PyFailureLearner>()?;
    m.add_class::<PyTraceRow>()?;
    m.add_function(wrap_pyfunction!(canonical_config, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
