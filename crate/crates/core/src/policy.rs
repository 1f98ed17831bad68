//! Slot-level decision engines and reward accounting.
//!
//! Every slot starts from full capacity. RTSD and the Bandit scheme share
//! the greedy loop in [`learning_slot`]: plan every remaining chain, score
//! the edge-feasible plans with the learned estimates, commit the best one,
//! repeat until no remaining chain has a positive score. They differ only
//! in the chain placer. The Random scheme picks chains uniformly and places
//! them on random qualified servers.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learning::{chain_failure_rate, init_learners, FailureBonus, Learners};
use crate::model::{Catalog, EdgeNetwork, Instance, Resource, ResidualCapacity, ServerId, SfcId, VnfId};
use crate::placement::{first_fit, get_consumption, random_fit, PlacementPlan};
use crate::rng;
use crate::workload::SlotObservation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights {
    pub omega: f64,
    pub mu: f64,
}

impl RewardWeights {
    pub fn new(omega: f64, mu: f64) -> Result<Self> {
        let w = RewardWeights { omega, mu };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega > 0.0 && self.mu > 0.0 && self.omega.is_finite() && self.mu.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidWeights {
                omega: self.omega,
                mu: self.mu,
            })
        }
    }
}

impl Default for RewardWeights {
    fn default() -> Self {
        RewardWeights { omega: 1.0, mu: 1.0 }
    }
}

/// `(ω q - μ L)(1 - U)` for an edge-feasible chain. A chain that is certain
/// to fail is worth nothing, whatever its popularity estimate.
pub fn pre_reward(weights: &RewardWeights, popularity: f64, latency: f64, failure: f64) -> f64 {
    let success = 1.0 - failure;
    if success == 0.0 {
        return 0.0;
    }
    (weights.omega * popularity - weights.mu * latency) * success
}

/// What a policy committed in one slot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotDecision {
    /// Committed plans in commit order.
    pub deployed: Vec<PlacementPlan>,
    /// `X_f(t)`
    pub x: Vec<bool>,
    /// Deployed copies of each VNF, `sum_n P_{i,n}(t)`.
    pub placed: Vec<u64>,
    pub residual_after: ResidualCapacity,
}

impl SlotDecision {
    fn empty(instance: &Instance) -> Self {
        SlotDecision {
            deployed: Vec::new(),
            x: vec![false; instance.catalog.num_sfcs()],
            placed: vec![0; instance.catalog.num_vnfs()],
            residual_after: ResidualCapacity::full(&instance.network),
        }
    }

    /// Decrements the residual by the plan's demand and records it.
    /// Panics if the plan is not an edge plan that fits.
    pub fn commit_plan(&mut self, catalog: &Catalog, plan: PlacementPlan) {
        assert!(plan.at_edge && !self.x[plan.sfc.index()], "bad commit of {}", plan.sfc);
        for (&vnf, &n) in catalog.chain(plan.sfc).iter().zip(&plan.assignment) {
            let ok = self.residual_after.consume(n, catalog.demand(vnf));
            assert!(ok, "plan for {} overcommits {n}", plan.sfc);
            self.placed[vnf.index()] += 1;
        }
        self.x[plan.sfc.index()] = true;
        self.deployed.push(plan);
    }

    pub fn num_deployed(&self) -> usize {
        self.deployed.len()
    }

    /// One `(vnf, server)` record per deployed VNF copy.
    pub fn placement_records(&self, catalog: &Catalog) -> Vec<(VnfId, ServerId)> {
        self.deployed
            .iter()
            .flat_map(|p| catalog.chain(p.sfc).iter().copied().zip(p.assignment.iter().copied()))
            .collect()
    }

    pub fn plan(&self, f: SfcId) -> Option<&PlacementPlan> {
        self.deployed.iter().find(|p| p.sfc == f)
    }
}

/// Per-slot metrics reported by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub expected_reward: f64,
    pub realized_reward: f64,
    pub remaining_resource: Resource,
    pub num_deployed: usize,
}

/// One iteration of the greedy loop: the scored candidates and the winner.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyStep {
    pub scores: Vec<(SfcId, f64)>,
    pub chosen: Option<SfcId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection {
    pub decision: SlotDecision,
    pub steps: Vec<GreedyStep>,
}

/// Which chain placer a learning policy uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainPlacer {
    /// Prim-inspired walk (RTSD).
    Prim,
    /// Servers in index order (Bandit scheme).
    FirstFit,
}

impl ChainPlacer {
    fn place(self, network: &EdgeNetwork, catalog: &Catalog, residual: &ResidualCapacity, f: SfcId) -> PlacementPlan {
        let plan = match self {
            ChainPlacer::Prim => get_consumption(network, catalog, residual, f),
            ChainPlacer::FirstFit => first_fit(network, catalog, residual, f),
        };
        plan.expect("SFC id from catalog")
    }
}

/// Greedy selection with given per-SFC popularity and per-VNF failure
/// estimates. Stops when no remaining chain has an edge plan scoring > 0.
pub fn greedy_select(
    instance: &Instance,
    weights: &RewardWeights,
    popularity: &[f64],
    vnf_failure: &[f64],
    placer: ChainPlacer,
) -> Selection {
    let Instance { network, catalog } = instance;
    let chain_failure: Vec<f64> = catalog
        .sfcs()
        .map(|f| chain_failure_rate(catalog, vnf_failure, f))
        .collect();

    let mut decision = SlotDecision::empty(instance);
    let mut steps = Vec::new();
    let mut done = BTreeSet::new();
    while done.len() < catalog.num_sfcs() {
        let mut scores = Vec::new();
        let mut best: Option<(f64, PlacementPlan)> = None;
        for f in catalog.sfcs().filter(|f| !done.contains(f)) {
            let plan = placer.place(network, catalog, &decision.residual_after, f);
            if !plan.at_edge {
                continue;
            }
            let score = pre_reward(weights, popularity[f.index()], plan.latency, chain_failure[f.index()]);
            scores.push((f, score));
            if score > 0.0 && best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, plan));
            }
        }
        let chosen = best.as_ref().map(|(_, p)| p.sfc);
        steps.push(GreedyStep { scores, chosen });
        match best {
            Some((_, plan)) => {
                done.insert(plan.sfc);
                decision.commit_plan(catalog, plan);
            }
            None => break,
        }
    }
    Selection { decision, steps }
}

/// One slot of a learning policy: estimate, select, then learn from `obs`.
pub fn learning_slot(
    instance: &Instance,
    learners: &mut Learners,
    weights: &RewardWeights,
    t: u64,
    obs: &SlotObservation,
    placer: ChainPlacer,
) -> Selection {
    assert!(t >= 1, "slot 0 only initializes the learners");
    let popularity = learners.popularity.refresh(t).to_vec();
    let failure = learners.failure.refresh(t).to_vec();
    let selection = greedy_select(instance, weights, &popularity, &failure, placer);
    learners.popularity.update(obs, &selection.decision.x);
    learners.failure.update(obs, &selection.decision.placed);
    selection
}

pub fn rtsd_slot(
    instance: &Instance,
    learners: &mut Learners,
    weights: &RewardWeights,
    t: u64,
    obs: &SlotObservation,
) -> SlotDecision {
    learning_slot(instance, learners, weights, t, obs, ChainPlacer::Prim).decision
}

pub fn bandit_scheme_slot(
    instance: &Instance,
    learners: &mut Learners,
    weights: &RewardWeights,
    t: u64,
    obs: &SlotObservation,
) -> SlotDecision {
    learning_slot(instance, learners, weights, t, obs, ChainPlacer::FirstFit).decision
}

/// Random scheme: draw a remaining chain uniformly, try to place each copy
/// on a random qualified server, commit if the whole chain fits. Every chain
/// is tried at most once per slot.
pub fn random_scheme_slot<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> SlotDecision {
    let Instance { network, catalog } = instance;
    let mut decision = SlotDecision::empty(instance);
    let mut remaining: Vec<SfcId> = catalog.sfcs().collect();
    while !remaining.is_empty() {
        let f = remaining.remove(rng.random_range(0..remaining.len()));
        let plan = random_fit(network, catalog, &decision.residual_after, f, rng).expect("SFC id from catalog");
        if plan.at_edge {
            decision.commit_plan(catalog, plan);
        }
    }
    decision
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizedReward {
    pub per_sfc: Vec<f64>,
    pub total: f64,
}

/// Reward actually earned in the slot: `ω Q_f - μ L_f` for every deployed
/// chain none of whose VNFs failed, 0 otherwise.
pub fn realized_reward(
    weights: &RewardWeights,
    obs: &SlotObservation,
    decision: &SlotDecision,
    catalog: &Catalog,
) -> RealizedReward {
    let mut per_sfc = vec![0.0; catalog.num_sfcs()];
    for plan in &decision.deployed {
        let failed = catalog.chain(plan.sfc).iter().any(|i| obs.vnf_failed[i.index()]);
        if !failed {
            per_sfc[plan.sfc.index()] =
                weights.omega * f64::from(obs.request(plan.sfc)) - weights.mu * plan.latency;
        }
    }
    let total = per_sfc.iter().fold(0.0, |a, b| a + b);
    RealizedReward { per_sfc, total }
}

/// Expected value of a decision under the true parameters,
/// `sum_f (ω q_f - μ L_f)(1 - U_f)`, summed in SFC order.
pub fn expected_slot_value(
    weights: &RewardWeights,
    decision: &SlotDecision,
    catalog: &Catalog,
    true_popularity: &[f64],
    true_failure: &[f64],
) -> f64 {
    catalog
        .sfcs()
        .filter_map(|f| decision.plan(f))
        .map(|plan| {
            let u = chain_failure_rate(catalog, true_failure, plan.sfc);
            pre_reward(weights, true_popularity[plan.sfc.index()], plan.latency, u)
        })
        .fold(0.0, |a, b| a + b)
}

pub fn slot_metrics(
    weights: &RewardWeights,
    obs: &SlotObservation,
    decision: &SlotDecision,
    catalog: &Catalog,
    true_popularity: &[f64],
    true_failure: &[f64],
) -> SlotMetrics {
    SlotMetrics {
        expected_reward: expected_slot_value(weights, decision, catalog, true_popularity, true_failure),
        realized_reward: realized_reward(weights, obs, decision, catalog).total,
        remaining_resource: decision.residual_after.total(),
        num_deployed: decision.num_deployed(),
    }
}

/// Re-derives every structural constraint of a decision from scratch:
/// capacity safety per server, completeness coupling, copy counts and the
/// latency of each plan. Returns one message per problem found.
pub fn verify_decision(instance: &Instance, decision: &SlotDecision) -> Vec<String> {
    let Instance { network, catalog } = instance;
    let mut problems = Vec::new();
    let mut load = vec![0 as Resource; network.num_servers()];
    let mut copies = vec![0u64; catalog.num_vnfs()];
    let mut seen = BTreeSet::new();

    for plan in &decision.deployed {
        if !seen.insert(plan.sfc) {
            problems.push(format!("{} deployed twice", plan.sfc));
        }
        if !plan.at_edge || !plan.latency.is_finite() {
            problems.push(format!("{} committed with a cloud verdict", plan.sfc));
        }
        let chain = catalog.chain(plan.sfc);
        // X_f = 1 - min(1, sum over occurrences of (1 - placed))
        let unplaced = chain.len().saturating_sub(plan.assignment.len());
        let x = 1 - unplaced.min(1);
        if x != 1 {
            problems.push(format!("{} deployed with {unplaced} unplaced copies", plan.sfc));
        }
        let mut lat = 0.0;
        for w in plan.assignment.windows(2) {
            lat += if w[0] == w[1] { 0.0 } else { network.hop_latency(w[0], w[1]) };
        }
        if lat != plan.latency {
            problems.push(format!("{} latency {} but path sums to {lat}", plan.sfc, plan.latency));
        }
        for (&vnf, &n) in chain.iter().zip(&plan.assignment) {
            load[n.index()] += catalog.demand(vnf);
            copies[vnf.index()] += 1;
        }
    }
    for f in catalog.sfcs() {
        if decision.x[f.index()] != seen.contains(&f) {
            problems.push(format!("X for {f} disagrees with the deployed set"));
        }
    }
    for n in network.servers() {
        let cap = network.capacity(n);
        if load[n.index()] > cap {
            problems.push(format!("{n} loaded {} over capacity {cap}", load[n.index()]));
        }
        let expect = cap - load[n.index()];
        if decision.residual_after.get(n) != expect || expect < 0 {
            problems.push(format!(
                "{n} residual {} but capacity minus load is {expect}",
                decision.residual_after.get(n)
            ));
        }
    }
    if copies != decision.placed {
        problems.push("placed copy counts disagree with the deployed chains".to_string());
    }
    problems
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Rtsd,
    Bandit,
    Random,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [PolicyKind::Rtsd, PolicyKind::Bandit, PolicyKind::Random];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Rtsd => "rtsd",
            PolicyKind::Bandit => "bandit",
            PolicyKind::Random => "random",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rtsd" => Ok(PolicyKind::Rtsd),
            "bandit" => Ok(PolicyKind::Bandit),
            "random" => Ok(PolicyKind::Random),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }
}

/// A policy with whatever state it carries between slots.
#[derive(Clone, Debug)]
pub struct PolicyRunner {
    kind: PolicyKind,
    seed: u64,
    learners: Option<Learners>,
}

impl PolicyRunner {
    /// Slot-0 setup. Learning policies initialize from `obs0`.
    pub fn start(kind: PolicyKind, users: usize, bonus: FailureBonus, obs0: &SlotObservation, seed: u64) -> Self {
        let learners = match kind {
            PolicyKind::Random => None,
            _ => Some(init_learners(users, obs0, bonus)),
        };
        PolicyRunner { kind, seed, learners }
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn learners(&self) -> Option<&Learners> {
        self.learners.as_ref()
    }

    /// Decides slot `t >= 1`; learning policies also absorb `obs`.
    pub fn step(&mut self, instance: &Instance, weights: &RewardWeights, t: u64, obs: &SlotObservation) -> SlotDecision {
        match (self.kind, self.learners.as_mut()) {
            (PolicyKind::Rtsd, Some(l)) => rtsd_slot(instance, l, weights, t, obs),
            (PolicyKind::Bandit, Some(l)) => bandit_scheme_slot(instance, l, weights, t, obs),
            _ => {
                let mut rng = rng::stream(self.seed, rng::DOMAIN_RANDOM_POLICY, 0, t);
                random_scheme_slot(instance, &mut rng)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learning::BonusSign;
    use crate::model::Link;
    use rand::SeedableRng;

    fn complete(caps: Vec<Resource>, latency: f64) -> EdgeNetwork {
        let n = caps.len();
        let mut links = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                links.push(Link { u, v, latency });
            }
        }
        EdgeNetwork::new(caps, links)
    }

    fn instance(caps: Vec<Resource>, demands: Vec<Resource>, chains: Vec<Vec<usize>>) -> Instance {
        let cat = Catalog::new(
            demands,
            chains.into_iter().map(|c| c.into_iter().map(VnfId).collect()).collect(),
        );
        Instance::new(complete(caps, 1.0), cat).unwrap()
    }

    fn obs(requests: Vec<u32>, failed: Vec<bool>) -> SlotObservation {
        SlotObservation { t: 1, requests, vnf_failed: failed }
    }

    #[test]
    fn pre_reward_examples() {
        let w = RewardWeights::default();
        assert_eq!(pre_reward(&w, 123.0, 1.0, 1.0), 0.0);
        assert_eq!(pre_reward(&w, f64::INFINITY, 1.0, 1.0), 0.0);
        assert_eq!(pre_reward(&w, 10.0, 2.0, 0.5), 4.0);
        assert_eq!(pre_reward(&w, 0.0, 3.0, 0.0), -3.0);
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(RewardWeights::new(0.0, 1.0).is_err());
        assert!(RewardWeights::new(1.0, -1.0).is_err());
        assert!(RewardWeights::new(2.0, 0.5).is_ok());
    }

    #[test]
    fn zero_capacity_deploys_nothing() {
        let inst = instance(vec![0, 0, 0], vec![1, 2], vec![vec![0], vec![1, 0]]);
        let o = obs(vec![3, 3], vec![false, false]);
        let mut l = init_learners(5, &o, FailureBonus::default());
        let d = rtsd_slot(&inst, &mut l, &RewardWeights::default(), 1, &o);
        assert!(d.deployed.is_empty());
        assert_eq!(d.x, vec![false, false]);
        assert!(verify_decision(&inst, &d).is_empty());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        assert!(random_scheme_slot(&inst, &mut rng).deployed.is_empty());
    }

    #[test]
    fn ample_capacity_deploys_everything() {
        let inst = instance(
            vec![100; 6],
            vec![5, 4, 4, 8, 5, 3, 5, 8, 7, 5, 1, 4, 3, 3, 4],
            vec![
                vec![3, 6, 9, 7, 4],
                vec![9, 8, 1, 3],
                vec![3, 1, 6],
                vec![10, 14, 1],
                vec![1, 11, 13, 1, 4],
                vec![8, 1, 12, 10],
            ],
        );
        let o = obs(vec![2; 6], vec![false; 15]);
        let mut l = init_learners(10, &o, FailureBonus::default());
        let d = rtsd_slot(&inst, &mut l, &RewardWeights::default(), 1, &o);
        assert_eq!(d.num_deployed(), 6);
        // unexplored arms tie at +inf and are taken in id order
        let order: Vec<usize> = d.deployed.iter().map(|p| p.sfc.index()).collect();
        assert_eq!(order, vec![0, 1, 2, 3, 4, 5]);
        assert!(verify_decision(&inst, &d).is_empty());
        assert_eq!(l.popularity.count, vec![1; 6]);
        // VNF 1 appears twice in chain 4
        assert_eq!(l.failure.count[1], 6);
    }

    #[test]
    fn greedy_commits_the_argmax_and_skips_non_positive() {
        let inst = instance(vec![10, 10], vec![4], vec![vec![0], vec![0], vec![0]]);
        let w = RewardWeights::default();
        let sel = greedy_select(&inst, &w, &[1.0, 5.0, 0.0], &[0.0], ChainPlacer::Prim);
        let order: Vec<usize> = sel.decision.deployed.iter().map(|p| p.sfc.index()).collect();
        assert_eq!(order, vec![1, 0]);
        for step in &sel.steps {
            if let Some(c) = step.chosen {
                let best = step.scores.iter().find(|s| s.0 == c).unwrap().1;
                assert!(step.scores.iter().all(|s| s.1 <= best));
            }
        }
        assert!(sel.steps.len() <= 3);
    }

    #[test]
    fn bandit_scheme_uses_first_fit() {
        let inst = Instance::new(
            EdgeNetwork::new(
                vec![10, 8, 9],
                vec![
                    Link { u: 0, v: 1, latency: 2.5 },
                    Link { u: 1, v: 2, latency: 0.5 },
                    Link { u: 0, v: 2, latency: 4.0 },
                ],
            ),
            Catalog::new(vec![8], vec![vec![VnfId(0), VnfId(0)]]),
        )
        .unwrap();
        let o = obs(vec![9], vec![false]);
        let mut l = init_learners(10, &o, FailureBonus::default());
        let d = bandit_scheme_slot(&inst, &mut l, &RewardWeights::default(), 1, &o);
        assert_eq!(d.deployed[0].assignment, vec![ServerId(0), ServerId(1)]);
        assert_eq!(d.deployed[0].latency, 2.5);

        let mut l = init_learners(10, &o, FailureBonus::default());
        let d = rtsd_slot(&inst, &mut l, &RewardWeights::default(), 1, &o);
        // cheapest link (1,2), anchor 2 (more room)
        assert_eq!(d.deployed[0].assignment, vec![ServerId(2), ServerId(1)]);
        assert_eq!(d.deployed[0].latency, 0.5);
    }

    #[test]
    fn random_scheme_single_chain_always_deployed() {
        let inst = instance(vec![10, 10], vec![3], vec![vec![0, 0]]);
        for seed in 0..100 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = random_scheme_slot(&inst, &mut rng);
            assert_eq!(d.num_deployed(), 1);
            assert!(verify_decision(&inst, &d).is_empty());
        }
    }

    #[test]
    fn random_scheme_is_symmetric() {
        // capacity for exactly one of two identical chains
        let inst = instance(vec![6], vec![5], vec![vec![0], vec![0]]);
        let runs = 10_000u64;
        let mut first = 0u64;
        for seed in 0..runs {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = random_scheme_slot(&inst, &mut rng);
            assert_eq!(d.num_deployed(), 1);
            first += u64::from(d.x[0]);
        }
        let share = first as f64 / runs as f64;
        let sigma = (0.25 / runs as f64).sqrt();
        assert!((share - 0.5).abs() < 3.0 * sigma, "share {share}");
    }

    #[test]
    fn realized_reward_examples() {
        let inst = instance(vec![10, 10], vec![3, 3], vec![vec![0, 1], vec![1]]);
        let w = RewardWeights::default();
        let mut d = SlotDecision::empty(&inst);
        let mut plan = get_consumption(&inst.network, &inst.catalog, &d.residual_after, SfcId(0)).unwrap();
        plan.latency = 1.0;
        plan.assignment = vec![ServerId(0), ServerId(1)];
        d.commit_plan(&inst.catalog, plan);

        let r = realized_reward(&w, &obs(vec![6, 4], vec![false, false]), &d, &inst.catalog);
        assert_eq!(r.per_sfc, vec![5.0, 0.0]);
        assert_eq!(r.total, 5.0);
        let r = realized_reward(&w, &obs(vec![6, 4], vec![false, true]), &d, &inst.catalog);
        assert_eq!(r.total, 0.0);
    }

    #[test]
    fn runner_random_policy_idles_learning() {
        let inst = instance(vec![10, 10], vec![3], vec![vec![0, 0]]);
        let o = obs(vec![1], vec![false]);
        let bonus = FailureBonus { sign: BonusSign::Pessimistic, scale: None };
        let mut r = PolicyRunner::start(PolicyKind::Random, 3, bonus, &o, 5);
        assert!(r.learners().is_none());
        let a = r.step(&inst, &RewardWeights::default(), 1, &o);
        let mut r2 = PolicyRunner::start(PolicyKind::Random, 3, bonus, &o, 5);
        assert_eq!(a, r2.step(&inst, &RewardWeights::default(), 1, &o));
    }

    #[test]
    fn policy_names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert!("nosuch".parse::<PolicyKind>().is_err());
    }
}
