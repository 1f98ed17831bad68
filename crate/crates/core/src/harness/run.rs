//! The slot loop: initialize at slot 0, then decide, account and learn for
//! t = 1..=T. Environment draws depend only on (seed, t), so every policy
//! sees the same requests and failures for a given seed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::config::Experiment;
use crate::learning::Learners;
use crate::oracle::{optimal_slot_value, OracleResult};
use crate::policy::{slot_metrics, PolicyKind, PolicyRunner, SlotDecision, SlotMetrics};
use crate::workload::{sample_slot, SlotObservation};

/// One per-slot output row. Field order is the CSV column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: u64,
    pub policy: PolicyKind,
    pub seed: u64,
    pub realized_reward: f64,
    pub expected_reward: f64,
    pub remaining_resource: i64,
    pub num_deployed: usize,
    pub oracle_value: Option<f64>,
    pub regret: Option<f64>,
}

/// Per-slot learner dump for the learning policies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerSnapshot {
    pub t: u64,
    pub policy: PolicyKind,
    pub seed: u64,
    pub c: Vec<u64>,
    pub q_bar: Vec<f64>,
    pub q_tilde: Vec<f64>,
    pub h: Vec<u64>,
    pub v_bar: Vec<f64>,
    pub v_tilde: Vec<f64>,
}

impl LearnerSnapshot {
    fn new(t: u64, policy: PolicyKind, seed: u64, l: &Learners) -> Self {
        LearnerSnapshot {
            t,
            policy,
            seed,
            c: l.popularity.count.clone(),
            q_bar: l.popularity.mean.clone(),
            q_tilde: l.popularity.estimate.clone(),
            h: l.failure.count.clone(),
            v_bar: l.failure.mean.clone(),
            v_tilde: l.failure.estimate.clone(),
        }
    }
}

/// Aggregates of one (policy, seed) run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub policy: PolicyKind,
    pub seed: u64,
    pub slots: u64,
    pub time_avg_reward: f64,
    pub time_avg_expected_reward: f64,
    pub mean_remaining_resource: f64,
    pub mean_remaining_fraction: f64,
    pub mean_num_deployed: f64,
    pub mean_regret: Option<f64>,
}

impl RunSummary {
    /// Recomputes the aggregates from rows; `total_capacity` converts the
    /// remaining resource to a fraction.
    pub fn from_rows(policy: PolicyKind, seed: u64, rows: &[TraceRow], total_capacity: i64) -> Self {
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&TraceRow) -> f64| rows.iter().map(f).fold(0.0, |a, b| a + b) / n;
        let remaining = mean(&|r| r.remaining_resource as f64);
        let regret = rows
            .iter()
            .map(|r| r.regret)
            .collect::<Option<Vec<f64>>>()
            .filter(|v| !v.is_empty())
            .map(|v| v.iter().fold(0.0, |a, b| a + b) / n);
        RunSummary {
            policy,
            seed,
            slots: rows.len() as u64,
            time_avg_reward: mean(&|r| r.realized_reward),
            time_avg_expected_reward: mean(&|r| r.expected_reward),
            mean_remaining_resource: remaining,
            mean_remaining_fraction: if total_capacity > 0 {
                remaining / total_capacity as f64
            } else {
                0.0
            },
            mean_num_deployed: mean(&|r| r.num_deployed as f64),
            mean_regret: regret,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    pub policy: PolicyKind,
    pub seed: u64,
    pub rows: Vec<TraceRow>,
    pub summary: RunSummary,
    /// Filled only when the experiment asks for it.
    pub learners: Vec<LearnerSnapshot>,
}

/// Everything the loop knows about one slot, handed to observers.
pub struct SlotRecord<'a> {
    pub t: u64,
    pub policy: PolicyKind,
    pub seed: u64,
    pub obs: &'a SlotObservation,
    pub decision: &'a SlotDecision,
    pub metrics: &'a SlotMetrics,
    pub learners: Option<&'a Learners>,
}

/// Oracle value for the experiment, if regret columns are requested.
pub fn oracle_for(exp: &Experiment) -> Result<Option<OracleResult>> {
    if !exp.regret {
        return Ok(None);
    }
    optimal_slot_value(&exp.instance, &exp.truth, &exp.weights, exp.oracle_budget).map(Some)
}

/// Runs one (policy, seed) pair, calling `observe` after every slot.
pub fn run_single(
    exp: &Experiment,
    policy: PolicyKind,
    seed: u64,
    oracle: Option<&OracleResult>,
    mut observe: impl FnMut(&SlotRecord<'_>),
) -> RunTrace {
    let truth = exp.truth.with_seed(seed);
    let popularity = truth.true_popularity();
    let catalog = &exp.instance.catalog;

    let obs0 = sample_slot(&truth, 0);
    let mut runner = PolicyRunner::start(policy, exp.users(), exp.bonus, &obs0, seed);
    let mut rows = Vec::with_capacity(exp.slots as usize);
    let mut learners = Vec::new();

    for t in 1..=exp.slots {
        let obs = sample_slot(&truth, t);
        let decision = runner.step(&exp.instance, &exp.weights, t, &obs);
        let metrics = slot_metrics(&exp.weights, &obs, &decision, catalog, &popularity, truth.failure_mean());
        let oracle_value = oracle.map(|o| o.best_value);
        rows.push(TraceRow {
            t,
            policy,
            seed,
            realized_reward: metrics.realized_reward,
            expected_reward: metrics.expected_reward,
            remaining_resource: metrics.remaining_resource,
            num_deployed: metrics.num_deployed,
            oracle_value,
            regret: oracle_value.map(|v| v - metrics.expected_reward),
        });
        if exp.record_learners {
            if let Some(l) = runner.learners() {
                learners.push(LearnerSnapshot::new(t, policy, seed, l));
            }
        }
        observe(&SlotRecord {
            t,
            policy,
            seed,
            obs: &obs,
            decision: &decision,
            metrics: &metrics,
            learners: runner.learners(),
        });
    }

    let summary = RunSummary::from_rows(policy, seed, &rows, exp.instance.network.total_capacity());
    RunTrace {
        policy,
        seed,
        rows,
        summary,
        learners,
    }
}

/// Every (policy, seed) pair, in parallel. Output is ordered by policy as
/// listed, then by seed as listed.
pub fn run(exp: &Experiment) -> Result<Vec<RunTrace>> {
    run_observed(exp, |_| {})
}

/// [`run`] with an observer that sees every slot of every run. The observer
/// may be called from several threads at once.
pub fn run_observed(exp: &Experiment, observe: impl Fn(&SlotRecord<'_>) + Sync) -> Result<Vec<RunTrace>> {
    let oracle = oracle_for(exp)?;
    let pairs: Vec<(PolicyKind, u64)> = exp
        .policies
        .iter()
        .flat_map(|&p| exp.seeds.iter().map(move |&s| (p, s)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(p, s)| run_single(exp, p, s, oracle.as_ref(), &observe))
        .collect())
}
