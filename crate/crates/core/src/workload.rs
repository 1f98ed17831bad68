//! Hidden stochastic environment: per-slot user requests and VNF failures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SfcId, VnfId};
use crate::rng;
use rand::Rng;

/// True request probabilities `p[k][f]`, failure means `v[i]` and the seed
/// of the environment. Stationary over the whole run.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    request_prob: Vec<Vec<f64>>,
    failure_mean: Vec<f64>,
    seed: u64,
}

fn check_prob(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidGroundTruth(format!("{what} = {p} is outside [0, 1]")))
    }
}

impl GroundTruth {
    /// `request_prob` is indexed `[user][sfc]`.
    pub fn new(request_prob: Vec<Vec<f64>>, failure_mean: Vec<f64>, seed: u64) -> Result<Self> {
        let width = request_prob.first().map_or(0, Vec::len);
        for (k, row) in request_prob.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidGroundTruth(format!(
                    "request row for user {k} has {} entries, expected {width}",
                    row.len()
                )));
            }
            for (f, &p) in row.iter().enumerate() {
                check_prob(&format!("p[{k}][{f}]"), p)?;
            }
        }
        for (i, &v) in failure_mean.iter().enumerate() {
            check_prob(&format!("v[{i}]"), v)?;
        }
        Ok(GroundTruth {
            request_prob,
            failure_mean,
            seed,
        })
    }

    /// Every user requests SFC `f` with probability `per_sfc[f]`.
    pub fn per_sfc(users: usize, per_sfc: &[f64], failure_mean: Vec<f64>, seed: u64) -> Result<Self> {
        Self::new(vec![per_sfc.to_vec(); users], failure_mean, seed)
    }

    pub fn uniform(
        users: usize,
        num_sfcs: usize,
        p: f64,
        failure_mean: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        Self::new(vec![vec![p; num_sfcs]; users], failure_mean, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GroundTruth {
            seed,
            ..self.clone()
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn users(&self) -> usize {
        self.request_prob.len()
    }

    pub fn num_sfcs(&self) -> usize {
        self.request_prob.first().map_or(0, Vec::len)
    }

    pub fn num_vnfs(&self) -> usize {
        self.failure_mean.len()
    }

    pub fn request_prob(&self) -> &[Vec<f64>] {
        &self.request_prob
    }

    pub fn failure_mean(&self) -> &[f64] {
        &self.failure_mean
    }

    pub fn vnf_failure_mean(&self, i: VnfId) -> f64 {
        self.failure_mean[i.0]
    }

    /// Expected per-slot requests `q_f = sum_k p[k][f]`. Evaluation only.
    pub fn true_popularity(&self) -> Vec<f64> {
        (0..self.num_sfcs())
            .map(|f| self.request_prob.iter().fold(0.0, |acc, row| acc + row[f]))
            .collect()
    }
}

/// What the environment produced in one slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SlotObservation {
    pub t: u64,
    /// `Q_f(t)`, number of users requesting each SFC.
    pub requests: Vec<u32>,
    /// `V_i(t)` realized as a failure flag per VNF.
    pub vnf_failed: Vec<bool>,
}

impl SlotObservation {
    pub fn request(&self, f: SfcId) -> u32 {
        self.requests[f.0]
    }

    /// `V_i(t)` as 0.0 / 1.0.
    pub fn failure_value(&self, i: VnfId) -> f64 {
        if self.vnf_failed[i.0] {
            1.0
        } else {
            0.0
        }
    }
}

/// Draws slot `t`. The result depends only on `(gt, t)`.
pub fn sample_slot(gt: &GroundTruth, t: u64) -> SlotObservation {
    let requests = (0..gt.num_sfcs())
        .map(|f| {
            let mut rng = rng::stream(gt.seed, rng::DOMAIN_REQUESTS, f as u64, t);
            gt.request_prob
                .iter()
                .filter(|row| rng.random_bool(row[f]))
                .count() as u32
        })
        .collect();
    let vnf_failed = gt
        .failure_mean
        .iter()
        .enumerate()
        .map(|(i, &v)| rng::stream(gt.seed, rng::DOMAIN_FAILURES, i as u64, t).random_bool(v))
        .collect();
    SlotObservation {
        t,
        requests,
        vnf_failed,
    }
}
