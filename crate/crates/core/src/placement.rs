//! Mapping one SFC's ordered VNF occurrences onto edge servers.
//!
//! [`get_consumption`] is the Prim-inspired walk: start on the roomier end
//! of the cheapest link, pack occurrences while the node has room, then hop
//! to the nearest direct neighbour that can take the next one. The
//! baselines use [`first_fit`] (servers in index order) and [`random_fit`]
//! (any qualified server, random order).
//!
//! Plans are tentative: the residual snapshot is never mutated here.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{
    cheapest_link_anchor, Catalog, EdgeNetwork, Resource, ResidualCapacity, ServerId, SfcId,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementPlan {
    pub sfc: SfcId,
    /// One server per chain occurrence; empty for a cloud verdict.
    pub assignment: Vec<ServerId>,
    /// Summed hop latency; `INFINITY` for a cloud verdict.
    pub latency: f64,
    pub at_edge: bool,
}

impl PlacementPlan {
    pub fn cloud(sfc: SfcId) -> Self {
        PlacementPlan {
            sfc,
            assignment: Vec::new(),
            latency: f64::INFINITY,
            at_edge: false,
        }
    }

    fn edge(network: &EdgeNetwork, sfc: SfcId, assignment: Vec<ServerId>) -> Self {
        PlacementPlan {
            sfc,
            latency: network.path_latency(&assignment),
            assignment,
            at_edge: true,
        }
    }

    /// Per-server demand this plan would consume.
    pub fn consumption(&self, catalog: &Catalog, num_servers: usize) -> Vec<Resource> {
        let mut used = vec![0; num_servers];
        for (&vnf, &n) in catalog.chain(self.sfc).iter().zip(&self.assignment) {
            used[n.index()] += catalog.demand(vnf);
        }
        used
    }
}

/// Tracks what a plan under construction has already claimed on each server.
struct Tentative<'a> {
    residual: &'a ResidualCapacity,
    used: Vec<Resource>,
}

impl<'a> Tentative<'a> {
    fn new(residual: &'a ResidualCapacity) -> Self {
        Tentative {
            residual,
            used: vec![0; residual.len()],
        }
    }

    fn fits(&self, n: ServerId, demand: Resource) -> bool {
        self.residual.get(n) - self.used[n.index()] >= demand
    }

    fn take(&mut self, n: ServerId, demand: Resource) {
        self.used[n.index()] += demand;
    }
}

/// Prim-inspired minimum-latency placement of chain `f`.
///
/// Only direct neighbours of the current node are considered when it runs
/// out of room; a chain that cannot continue goes to the cloud.
pub fn get_consumption(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    f: SfcId,
) -> Result<PlacementPlan> {
    let chain = catalog.try_chain(f)?;
    let mut tentative = Tentative::new(residual);
    let mut current = cheapest_link_anchor(network, residual);
    let mut assignment = Vec::with_capacity(chain.len());

    for &vnf in chain {
        let demand = catalog.demand(vnf);
        if !tentative.fits(current, demand) {
            let next = network
                .neighbors_by_latency(current)
                .iter()
                .map(|&(n, _)| n)
                .find(|&n| tentative.fits(n, demand));
            match next {
                Some(n) => current = n,
                None => return Ok(PlacementPlan::cloud(f)),
            }
        }
        tentative.take(current, demand);
        assignment.push(current);
    }
    Ok(PlacementPlan::edge(network, f, assignment))
}

/// Runs [`get_consumption`] for every SFC not in `skip`, all against the
/// same residual snapshot. Plans come back in SFC order.
pub fn plan_all(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    skip: &BTreeSet<SfcId>,
) -> Vec<PlacementPlan> {
    catalog
        .sfcs()
        .filter(|f| !skip.contains(f))
        .map(|f| get_consumption(network, catalog, residual, f).expect("SFC id from catalog"))
        .collect()
}

/// First-fit in server index order: stay on the current server while it can
/// afford the next occurrence, otherwise advance to the next index that can.
/// Never wraps back to lower indices.
pub fn first_fit(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    f: SfcId,
) -> Result<PlacementPlan> {
    let chain = catalog.try_chain(f)?;
    let mut tentative = Tentative::new(residual);
    let mut current = 0usize;
    let mut assignment = Vec::with_capacity(chain.len());
    for &vnf in chain {
        let demand = catalog.demand(vnf);
        while current < network.num_servers() && !tentative.fits(ServerId(current), demand) {
            current += 1;
        }
        if current == network.num_servers() {
            return Ok(PlacementPlan::cloud(f));
        }
        tentative.take(ServerId(current), demand);
        assignment.push(ServerId(current));
    }
    Ok(PlacementPlan::edge(network, f, assignment))
}

/// Each occurrence goes to the first server that can hold it, scanning the
/// servers in a fresh random order.
pub fn random_fit<R: Rng + ?Sized>(
    network: &EdgeNetwork,
    catalog: &Catalog,
    residual: &ResidualCapacity,
    f: SfcId,
    rng: &mut R,
) -> Result<PlacementPlan> {
    let chain = catalog.try_chain(f)?;
    let mut tentative = Tentative::new(residual);
    let mut order: Vec<ServerId> = network.servers().collect();
    let mut assignment = Vec::with_capacity(chain.len());
    for &vnf in chain {
        let demand = catalog.demand(vnf);
        order.shuffle(rng);
        match order.iter().copied().find(|&n| tentative.fits(n, demand)) {
            Some(n) => {
                tentative.take(n, demand);
                assignment.push(n);
            }
            None => return Ok(PlacementPlan::cloud(f)),
        }
    }
    Ok(PlacementPlan::edge(network, f, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Link, VnfId};
    use rand::SeedableRng;

    fn catalog(demands: Vec<Resource>, chains: Vec<Vec<usize>>) -> Catalog {
        Catalog::new(
            demands,
            chains
                .into_iter()
                .map(|c| c.into_iter().map(VnfId).collect())
                .collect(),
        )
    }

    fn pair(caps: [Resource; 2], latency: f64) -> EdgeNetwork {
        EdgeNetwork::new(caps.to_vec(), vec![Link { u: 0, v: 1, latency }])
    }

    #[test]
    fn whole_chain_on_anchor_costs_nothing() {
        let net = pair([10, 10], 5.0);
        let cat = catalog(vec![3, 3], vec![vec![0, 1, 0]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert!(plan.at_edge);
        assert_eq!(plan.assignment, vec![ServerId(0); 3]);
        assert_eq!(plan.latency, 0.0);
    }

    #[test]
    fn spills_to_neighbour() {
        let net = pair([10, 10], 5.0);
        let cat = catalog(vec![4], vec![vec![0, 0, 0]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert_eq!(plan.assignment, vec![ServerId(0), ServerId(0), ServerId(1)]);
        assert_eq!(plan.latency, 5.0);
    }

    #[test]
    fn oversized_vnf_goes_to_cloud() {
        let net = pair([10, 10], 5.0);
        let cat = catalog(vec![2, 11], vec![vec![0, 1]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert_eq!(plan, PlacementPlan::cloud(SfcId(0)));
        assert!(plan.latency.is_infinite());
    }

    #[test]
    fn unknown_sfc_is_an_error() {
        let net = pair([10, 10], 5.0);
        let cat = catalog(vec![2], vec![vec![0]]);
        assert!(get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(3)).is_err());
    }

    #[test]
    fn walk_only_uses_direct_neighbours() {
        // line 0 - 1 - 2; the walk starts on 1 (cheapest link (1,2), tie on
        // room goes to the smaller id). The last occurrence would fit on 0,
        // but 0 is two hops away from 2.
        let net = EdgeNetwork::new(
            vec![2, 4, 4],
            vec![Link { u: 0, v: 1, latency: 3.0 }, Link { u: 1, v: 2, latency: 1.0 }],
        );
        let cat = catalog(vec![4, 2], vec![vec![0, 0, 1]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert!(!plan.at_edge);
    }

    #[test]
    fn walk_may_return_to_a_used_server() {
        let net = pair([5, 4], 1.0);
        let cat = catalog(vec![3, 2], vec![vec![0, 0, 1]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert_eq!(plan.assignment, vec![ServerId(0), ServerId(1), ServerId(0)]);
        assert_eq!(plan.latency, 2.0);
    }

    #[test]
    fn tentative_use_counts_against_the_node() {
        let net = pair([6, 6], 2.0);
        let cat = catalog(vec![6], vec![vec![0, 0, 0]]);
        let plan = get_consumption(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert!(!plan.at_edge);
    }

    #[test]
    fn plan_all_skips_and_is_deterministic() {
        let net = pair([10, 10], 5.0);
        let cat = catalog(vec![4], vec![vec![0, 0], vec![0, 0]]);
        let r = ResidualCapacity::full(&net);
        let all: BTreeSet<SfcId> = cat.sfcs().collect();
        assert!(plan_all(&net, &cat, &r, &all).is_empty());
        let plans = plan_all(&net, &cat, &r, &BTreeSet::new());
        assert_eq!(plans.len(), 2);
        assert_eq!(plans[0].assignment, plans[1].assignment);
        assert_eq!(plans[0].latency, plans[1].latency);
    }

    #[test]
    fn first_fit_cases() {
        let net = EdgeNetwork::new(
            vec![10, 8, 9],
            vec![
                Link { u: 0, v: 1, latency: 2.5 },
                Link { u: 1, v: 2, latency: 1.0 },
                Link { u: 0, v: 2, latency: 4.0 },
            ],
        );
        let r = ResidualCapacity::full(&net);

        let cat = catalog(vec![3], vec![vec![0, 0, 0]]);
        let plan = first_fit(&net, &cat, &r, SfcId(0)).unwrap();
        assert_eq!(plan.assignment, vec![ServerId(0); 3]);
        assert_eq!(plan.latency, 0.0);

        let cat = catalog(vec![8], vec![vec![0, 0]]);
        let plan = first_fit(&net, &cat, &r, SfcId(0)).unwrap();
        assert_eq!(plan.assignment, vec![ServerId(0), ServerId(1)]);
        assert_eq!(plan.latency, 2.5);

        let cat = catalog(vec![11], vec![vec![0]]);
        assert!(!first_fit(&net, &cat, &r, SfcId(0)).unwrap().at_edge);
    }

    #[test]
    fn first_fit_does_not_wrap() {
        let net = pair([5, 3], 1.0);
        // 3 fits on 0, then 4 does not fit on 0 (2 left) nor 1; no wrap
        let cat = catalog(vec![3, 4], vec![vec![0, 1]]);
        let plan = first_fit(&net, &cat, &ResidualCapacity::full(&net), SfcId(0)).unwrap();
        assert!(!plan.at_edge);
    }

    #[test]
    fn random_fit_respects_capacity() {
        let net = EdgeNetwork::new(
            vec![4, 4, 4],
            vec![Link { u: 0, v: 1, latency: 1.0 }, Link { u: 1, v: 2, latency: 1.0 }],
        );
        let cat = catalog(vec![4], vec![vec![0, 0, 0]]);
        let r = ResidualCapacity::full(&net);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let plan = random_fit(&net, &cat, &r, SfcId(0), &mut rng).unwrap();
            let mut a = plan.assignment.clone();
            a.sort();
            assert_eq!(a, vec![ServerId(0), ServerId(1), ServerId(2)]);
        }
        let cat = catalog(vec![4], vec![vec![0, 0, 0, 0]]);
        assert!(!random_fit(&net, &cat, &r, SfcId(0), &mut rng).unwrap().at_edge);
    }
}
