//! Experiment configuration: a single JSON document, plus command-line
//! style overrides. See `configs/SCHEMA.md` for the field reference.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learning::FailureBonus;
use crate::model::{Catalog, EdgeNetwork, Instance, Link, Resource, VnfId};
use crate::oracle::DEFAULT_BUDGET;
use crate::policy::{PolicyKind, RewardWeights};
use crate::workload::GroundTruth;

/// Six servers, fifteen VNFs, six chains, with a fixed latency matrix.
pub const CANONICAL_CONFIG: &str = include_str!("../../configs/tables.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub capacities: Vec<Resource>,
    pub links: Vec<Link>,
    pub vnf_demands: Vec<Resource>,
    pub sfc_chains: Vec<Vec<usize>>,
}

impl InstanceConfig {
    pub fn build(&self) -> Result<Instance> {
        let network = EdgeNetwork::new(self.capacities.clone(), self.links.clone());
        let catalog = Catalog::new(
            self.vnf_demands.clone(),
            self.sfc_chains
                .iter()
                .map(|c| c.iter().map(|&i| VnfId(i)).collect())
                .collect(),
        );
        Instance::new(network, catalog)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestProb {
    /// One probability for every (user, SFC) pair.
    Uniform(f64),
    /// Per-SFC probability shared by all users.
    PerSfc(Vec<f64>),
    /// Full `[user][sfc]` matrix; fixes the number of users.
    Matrix(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundTruthConfig {
    pub users: usize,
    pub request_prob: RequestProb,
    pub failure_mean: Vec<f64>,
}

impl GroundTruthConfig {
    fn build(&self, users: usize, num_sfcs: usize) -> Result<GroundTruth> {
        let matrix = match &self.request_prob {
            RequestProb::Uniform(p) => vec![vec![*p; num_sfcs]; users],
            RequestProb::PerSfc(row) => vec![row.clone(); users],
            RequestProb::Matrix(m) => m.clone(),
        };
        if matrix.len() != users {
            return Err(Error::Config(format!(
                "request matrix has {} rows but users = {users}",
                matrix.len()
            )));
        }
        if matrix.iter().any(|row| row.len() != num_sfcs) {
            return Err(Error::Config(format!(
                "request probabilities must have one entry per SFC ({num_sfcs})"
            )));
        }
        GroundTruth::new(matrix, self.failure_mean.clone(), 0)
    }
}

fn default_slots() -> u64 {
    500
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_policies() -> Vec<PolicyKind> {
    PolicyKind::ALL.to_vec()
}

fn default_scale() -> f64 {
    1.0
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceConfig,
    pub ground_truth: GroundTruthConfig,
    #[serde(default)]
    pub weights: RewardWeights,
    #[serde(default = "default_slots")]
    pub slots: u64,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_policies")]
    pub policies: Vec<PolicyKind>,
    #[serde(default)]
    pub learner: FailureBonus,
    #[serde(default = "default_scale")]
    pub capacity_scale: f64,
    #[serde(default)]
    pub regret: bool,
    #[serde(default = "default_budget")]
    pub oracle_budget: u64,
}

impl ExperimentConfig {
    pub fn canonical() -> Self {
        Self::from_json(CANONICAL_CONFIG).expect("bundled config parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validates and resolves the document into a runnable experiment.
    pub fn resolve(&self, overrides: &Overrides) -> Result<Experiment> {
        let slots = overrides.slots.unwrap_or(self.slots);
        let seeds = overrides.seeds.clone().unwrap_or_else(|| self.seeds.clone());
        let policies = overrides.policies.clone().unwrap_or_else(|| self.policies.clone());
        let capacity_scale = overrides.capacity_scale.unwrap_or(self.capacity_scale);
        let regret = overrides.regret.unwrap_or(self.regret);

        if slots < 1 {
            return Err(Error::Config("slots must be at least 1".into()));
        }
        if seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if policies.is_empty() {
            return Err(Error::Config("at least one policy is required".into()));
        }
        if policies.iter().collect::<BTreeSet<_>>().len() != policies.len() {
            return Err(Error::Config("policies are listed more than once".into()));
        }
        if !(capacity_scale.is_finite() && capacity_scale > 0.0) {
            return Err(Error::Config(format!(
                "capacity scale must be positive, got {capacity_scale}"
            )));
        }
        if let Some(s) = self.learner.scale {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::Config(format!("failure bonus scale must be >= 0, got {s}")));
            }
        }
        self.weights.validate()?;

        let users = match (overrides.users, &self.ground_truth.request_prob) {
            (Some(k), RequestProb::Matrix(m)) if m.len() != k => {
                return Err(Error::ConflictingOverride(format!(
                    "--users {k} but the config pins a {}-user request matrix",
                    m.len()
                )))
            }
            (Some(k), _) => k,
            (None, _) => self.ground_truth.users,
        };
        if users == 0 {
            return Err(Error::Config("users must be at least 1".into()));
        }

        let base = self.instance.build()?;
        let truth = self.ground_truth.build(users, base.catalog.num_sfcs())?;
        if truth.num_vnfs() != base.catalog.num_vnfs() {
            return Err(Error::Config(format!(
                "failure_mean has {} entries for {} VNFs",
                truth.num_vnfs(),
                base.catalog.num_vnfs()
            )));
        }
        let instance = if capacity_scale == 1.0 {
            base
        } else {
            base.with_capacity_scale(capacity_scale)
        };

        Ok(Experiment {
            instance,
            truth,
            weights: self.weights,
            slots,
            seeds,
            policies,
            bonus: self.learner,
            capacity_scale,
            regret,
            oracle_budget: self.oracle_budget,
            record_learners: false,
        })
    }
}

/// Command-line overrides; `None` keeps the config value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub slots: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub policies: Option<Vec<PolicyKind>>,
    pub regret: Option<bool>,
    pub capacity_scale: Option<f64>,
    pub users: Option<usize>,
}

/// A validated, ready-to-run experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    /// Instance with the capacity scale already applied.
    pub instance: Instance,
    /// Ground truth with seed 0; each run re-seeds it.
    pub truth: GroundTruth,
    pub weights: RewardWeights,
    pub slots: u64,
    pub seeds: Vec<u64>,
    pub policies: Vec<PolicyKind>,
    pub bonus: FailureBonus,
    pub capacity_scale: f64,
    pub regret: bool,
    pub oracle_budget: u64,
    /// Keep a per-slot learner snapshot in each trace.
    pub record_learners: bool,
}

impl Experiment {
    pub fn users(&self) -> usize {
        self.truth.users()
    }
}

/// Parses `7` or an inclusive range `1..30`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("bad seed spec `{spec}` (expected N or A..B)"));
    match spec.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![spec.trim().parse().map_err(|_| bad())?]),
    }
}
