//! Exhaustive references for small instances.
//!
//! [`optimal_chain_latency`] tries every capacity-feasible assignment of a
//! chain's copies to servers, including the multi-hop layouts the greedy
//! walk cannot reach. [`optimal_slot_value`] finds the best subset of
//! chains with a jointly feasible placement under the true parameters; it
//! runs a dynamic program over residual-capacity vectors, with each chain
//! contributing the cheapest layout for every distinct per-server load it
//! can produce.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learning::chain_failure_rate;
use crate::model::{Catalog, EdgeNetwork, Instance, Resource, ResidualCapacity, ServerId, SfcId};
use crate::policy::{pre_reward, RewardWeights};
use crate::workload::GroundTruth;

/// Default cap on enumerated states, shared by both searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Optimal standalone latency per SFC on an empty network; `None` when
    /// no feasible layout exists.
    pub best_latency: Vec<Option<f64>>,
    pub best_selection: Vec<SfcId>,
    pub best_value: f64,
}

/// Cheapest layout of a chain for one per-server load vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLayout {
    pub load: Vec<Resource>,
    pub assignment: Vec<ServerId>,
    pub latency: f64,
}

fn check_budget(states: u128, budget: u64) -> Result<()> {
    if states > u128::from(budget) {
        Err(Error::SearchSpaceTooLarge { states, budget })
    } else {
        Ok(())
    }
}

fn assignment_count(network: &EdgeNetwork, len: usize) -> u128 {
    (network.num_servers() as u128).saturating_pow(len as u32)
}

/// Every feasible layout of chain `f`, reduced to the cheapest one per
/// distinct load vector. Sorted by load vector.
pub fn chain_layouts(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    f: SfcId,
    budget: u64,
) -> Result<Vec<ChainLayout>> {
    let chain = catalog.try_chain(f)?;
    check_budget(assignment_count(network, chain.len()), budget)?;

    let demands: Vec<Resource> = chain.iter().map(|&i| catalog.demand(i)).collect();
    let mut best: BTreeMap<Vec<Resource>, (f64, Vec<ServerId>)> = BTreeMap::new();
    let mut load = vec![0; network.num_servers()];
    let mut assignment = Vec::with_capacity(chain.len());

    fn dfs(
        network: &EdgeNetwork,
        residual: &ResidualCapacity,
        demands: &[Resource],
        load: &mut Vec<Resource>,
        assignment: &mut Vec<ServerId>,
        best: &mut BTreeMap<Vec<Resource>, (f64, Vec<ServerId>)>,
    ) {
        let depth = assignment.len();
        if depth == demands.len() {
            let latency = network.path_latency(assignment);
            match best.get(load.as_slice()) {
                Some((l, _)) if *l <= latency => {}
                _ => {
                    best.insert(load.clone(), (latency, assignment.clone()));
                }
            }
            return;
        }
        for n in network.servers() {
            if residual.get(n) - load[n.index()] < demands[depth] {
                continue;
            }
            load[n.index()] += demands[depth];
            assignment.push(n);
            dfs(network, residual, demands, load, assignment, best);
            assignment.pop();
            load[n.index()] -= demands[depth];
        }
    }

    dfs(network, residual, &demands, &mut load, &mut assignment, &mut best);
    Ok(best
        .into_iter()
        .map(|(load, (latency, assignment))| ChainLayout {
            load,
            assignment,
            latency,
        })
        .collect())
}

/// Minimum total latency over all feasible layouts of chain `f`, or `None`
/// if the chain cannot be placed at all.
pub fn optimal_chain_latency(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    f: SfcId,
    budget: u64,
) -> Result<Option<f64>> {
    let layouts = chain_layouts(network, catalog, residual, f, budget)?;
    Ok(layouts.iter().map(|l| l.latency).reduce(f64::min))
}

/// Best achievable expected slot value under the true parameters, starting
/// from full capacity.
pub fn optimal_slot_value(
    instance: &Instance,
    truth: &GroundTruth,
    weights: &RewardWeights,
    budget: u64,
) -> Result<OracleResult> {
    let Instance { network, catalog } = instance;
    if catalog.num_sfcs() > 64 {
        return Err(Error::SearchSpaceTooLarge {
            states: 1u128 << catalog.num_sfcs().min(127),
            budget,
        });
    }
    let full = ResidualCapacity::full(network);
    let popularity = truth.true_popularity();

    let mut best_latency = Vec::with_capacity(catalog.num_sfcs());
    // (load, value) of every layout worth including
    let mut options: Vec<Vec<(Vec<Resource>, f64)>> = Vec::with_capacity(catalog.num_sfcs());
    for f in catalog.sfcs() {
        let layouts = chain_layouts(network, catalog, &full, f, budget)?;
        best_latency.push(layouts.iter().map(|l| l.latency).reduce(f64::min));
        let u = chain_failure_rate(catalog, truth.failure_mean(), f);
        options.push(
            layouts
                .into_iter()
                .map(|l| {
                    let v = pre_reward(weights, popularity[f.index()], l.latency, u);
                    (l.load, v)
                })
                .filter(|(_, v)| *v > 0.0)
                .collect(),
        );
    }

    // residual vector -> (best value, selection mask)
    let mut states: HashMap<Vec<Resource>, (f64, u64)> = HashMap::new();
    states.insert(full.as_slice().to_vec(), (0.0, 0));
    let mut work: u128 = 0;
    for (f, opts) in options.iter().enumerate() {
        if opts.is_empty() {
            continue;
        }
        work += states.len() as u128 * opts.len() as u128;
        check_budget(work, budget)?;
        let mut next = states.clone();
        for (residual, &(value, mask)) in &states {
            for (load, v) in opts {
                if load.iter().zip(residual).any(|(l, r)| l > r) {
                    continue;
                }
                let rest: Vec<Resource> = residual.iter().zip(load).map(|(r, l)| r - l).collect();
                let cand = (value + v, mask | 1 << f);
                next.entry(rest)
                    .and_modify(|e| {
                        if cand.0 > e.0 || (cand.0 == e.0 && cand.1 < e.1) {
                            *e = cand;
                        }
                    })
                    .or_insert(cand);
            }
        }
        states = next;
    }

    let (best_value, mask) = states
        .values()
        .copied()
        .fold((0.0, 0u64), |best, cand| {
            if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                cand
            } else {
                best
            }
        });
    Ok(OracleResult {
        best_latency,
        best_selection: catalog.sfcs().filter(|f| mask & (1 << f.index()) != 0).collect(),
        best_value,
    })
}
