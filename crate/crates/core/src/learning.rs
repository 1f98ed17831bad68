//! UCB-style online estimators for SFC popularity and VNF failure rate.
//!
//! Both learners keep a count of learned slots (or copies) and a running
//! mean, and produce an estimate `mean + scale * sqrt(3 ln t / (2 n))`.
//! Logs are natural. Arms with no observations yet are maximally optimistic:
//! infinite popularity, zero failure rate.

use serde::{Deserialize, Serialize};

use crate::model::{Catalog, SfcId};
use crate::workload::SlotObservation;

/// Exploration bonus `scale * sqrt(3 ln t / (2 n))` for `n > 0`.
pub fn exploration_bonus(scale: f64, t: f64, n: u64) -> f64 {
    debug_assert!(n > 0);
    scale * (3.0 * t.ln() / (2.0 * n as f64)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopularityLearner {
    /// Bonus scale, the number of users `K`.
    pub users: f64,
    /// `c_f`: slots in which SFC f was deployed at the edge.
    pub count: Vec<u64>,
    /// `q̄_f`: mean observed requests over those slots.
    pub mean: Vec<f64>,
    /// `q̃_f`: last computed estimate.
    pub estimate: Vec<f64>,
}

impl PopularityLearner {
    /// Slot-0 initialization: zero counts and means, estimate = `Q_f(0)`.
    pub fn init(users: usize, obs0: &SlotObservation) -> Self {
        let n = obs0.requests.len();
        PopularityLearner {
            users: users as f64,
            count: vec![0; n],
            mean: vec![0.0; n],
            estimate: obs0.requests.iter().map(|&q| f64::from(q)).collect(),
        }
    }

    /// Folds one slot's requests into the arms that were deployed.
    pub fn update(&mut self, obs: &SlotObservation, deployed: &[bool]) {
        for (f, &x) in deployed.iter().enumerate() {
            if !x {
                continue;
            }
            let old = self.count[f];
            let new = old + 1;
            self.mean[f] = (old as f64 * self.mean[f] + f64::from(obs.requests[f])) / new as f64;
            self.count[f] = new;
        }
    }

    pub fn estimate_one(&self, f: SfcId, t: u64) -> f64 {
        match self.count[f.0] {
            0 => f64::INFINITY,
            c => self.mean[f.0] + exploration_bonus(self.users, t as f64, c),
        }
    }

    /// `q̃_f(t)` for every SFC; `t` must be at least 1.
    pub fn estimates(&self, t: u64) -> Vec<f64> {
        (0..self.count.len()).map(|f| self.estimate_one(SfcId(f), t)).collect()
    }

    /// Recomputes and stores the estimates for slot `t`.
    pub fn refresh(&mut self, t: u64) -> &[f64] {
        self.estimate = self.estimates(t);
        &self.estimate
    }
}

/// Direction of the failure-rate bonus. `Pessimistic` adds it (literal
/// reading of the update rule), `Optimistic` subtracts it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BonusSign {
    #[default]
    Pessimistic,
    Optimistic,
}

impl BonusSign {
    pub fn factor(self) -> f64 {
        match self {
            BonusSign::Pessimistic => 1.0,
            BonusSign::Optimistic => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureLearner {
    pub bonus_scale: f64,
    pub bonus_sign: BonusSign,
    /// `h_i`: placed copies summed over slots.
    pub count: Vec<u64>,
    /// `v̄_i`
    pub mean: Vec<f64>,
    /// `ṽ_i`
    pub estimate: Vec<f64>,
}

impl FailureLearner {
    pub fn init(obs0: &SlotObservation, bonus_scale: f64, bonus_sign: BonusSign) -> Self {
        let n = obs0.vnf_failed.len();
        FailureLearner {
            bonus_scale,
            bonus_sign,
            count: vec![0; n],
            mean: vec![0.0; n],
            estimate: obs0
                .vnf_failed
                .iter()
                .map(|&b| if b { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    /// `placed[i]` is the number of deployed copies of VNF i this slot.
    /// The count grows by all copies while the failure flag enters once.
    pub fn update(&mut self, obs: &SlotObservation, placed: &[u64]) {
        for (i, &p) in placed.iter().enumerate() {
            if p == 0 {
                continue;
            }
            let old = self.count[i];
            let new = old + p;
            let v = if obs.vnf_failed[i] { 1.0 } else { 0.0 };
            self.mean[i] = (old as f64 * self.mean[i] + v) / new as f64;
            self.count[i] = new;
        }
    }

    pub fn estimate_one(&self, i: usize, t: u64) -> f64 {
        match self.count[i] {
            0 => 0.0,
            h => {
                let raw = self.mean[i]
                    + self.bonus_sign.factor() * exploration_bonus(self.bonus_scale, t as f64, h);
                raw.clamp(0.0, 1.0)
            }
        }
    }

    /// `ṽ_i(t)` clamped to [0, 1]; `t` must be at least 1.
    pub fn estimates(&self, t: u64) -> Vec<f64> {
        (0..self.count.len()).map(|i| self.estimate_one(i, t)).collect()
    }

    pub fn refresh(&mut self, t: u64) -> &[f64] {
        self.estimate = self.estimates(t);
        &self.estimate
    }
}

/// Chain failure rate: the largest per-VNF rate over the chain's occurrences.
pub fn chain_failure_rate(catalog: &Catalog, rates: &[f64], f: SfcId) -> f64 {
    catalog
        .chain(f)
        .iter()
        .map(|i| rates[i.index()])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Both learners, as carried by a learning policy between slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Learners {
    pub popularity: PopularityLearner,
    pub failure: FailureLearner,
}

/// Failure-bonus settings. `scale = None` means "use the number of users".
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct FailureBonus {
    #[serde(default)]
    pub sign: BonusSign,
    #[serde(default)]
    pub scale: Option<f64>,
}

pub fn init_learners(users: usize, obs0: &SlotObservation, bonus: FailureBonus) -> Learners {
    Learners {
        popularity: PopularityLearner::init(users, obs0),
        failure: FailureLearner::init(obs0, bonus.scale.unwrap_or(users as f64), bonus.sign),
    }
}
