//! Shared generators and from-scratch reference computations.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sfc_backup::model::{Link, Resource};
use sfc_backup::{Catalog, EdgeNetwork, Instance, ServerId, VnfId};

/// A connected random instance: a random spanning tree plus extra links.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_servers: usize,
    max_chain: usize,
    max_sfcs: usize,
) -> Instance {
    let n = rng.random_range(1..=max_servers);
    let capacities: Vec<Resource> = (0..n).map(|_| rng.random_range(0..=12)).collect();
    let mut links = Vec::new();
    let mut have = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        have.insert((u, v));
        links.push(Link {
            u,
            v,
            latency: latency(rng),
        });
    }
    for u in 0..n {
        for v in u + 1..n {
            if !have.contains(&(u, v)) && rng.random_bool(0.5) {
                links.push(Link {
                    u,
                    v,
                    latency: latency(rng),
                });
            }
        }
    }
    let vnfs = rng.random_range(1..=5);
    let demand: Vec<Resource> = (0..vnfs).map(|_| rng.random_range(1..=6)).collect();
    let sfcs = rng.random_range(1..=max_sfcs);
    let chains = (0..sfcs)
        .map(|_| {
            let len = rng.random_range(1..=max_chain);
            (0..len).map(|_| VnfId(rng.random_range(0..vnfs))).collect()
        })
        .collect();
    Instance::new(EdgeNetwork::new(capacities, links), Catalog::new(demand, chains)).expect("generated instance is valid")
}

fn latency(rng: &mut ChaCha8Rng) -> f64 {
    // quarter steps keep sums exact in binary floating point
    f64::from(rng.random_range(1..=16u32)) * 0.25
}

pub fn instance_strategy(max_servers: usize, max_chain: usize, max_sfcs: usize) -> impl Strategy<Value = Instance> {
    any::<u64>().prop_map(move |seed| {
        random_instance(&mut ChaCha8Rng::seed_from_u64(seed), max_servers, max_chain, max_sfcs)
    })
}

/// All-pairs shortest latencies by repeated relaxation over the raw links.
pub fn shortest_paths(network: &EdgeNetwork) -> Vec<Vec<f64>> {
    let n = network.num_servers();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for l in network.raw_links() {
        d[l.u][l.v] = d[l.u][l.v].min(l.latency);
        d[l.v][l.u] = d[l.v][l.u].min(l.latency);
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            for l in network.raw_links() {
                for (a, b) in [(l.u, l.v), (l.v, l.u)] {
                    let cand = d[s][a] + l.latency;
                    if cand < d[s][b] {
                        d[s][b] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

/// Hop cost matrix: 0 on the diagonal, the direct link where one exists,
/// otherwise the shortest path.
pub fn hop_costs(network: &EdgeNetwork) -> Vec<Vec<f64>> {
    let mut d = shortest_paths(network);
    for l in network.raw_links() {
        d[l.u][l.v] = l.latency;
        d[l.v][l.u] = l.latency;
    }
    d
}

/// Sum of hop costs along an assignment.
pub fn path_cost(hops: &[Vec<f64>], assignment: &[ServerId]) -> f64 {
    let mut total = 0.0;
    for w in assignment.windows(2) {
        total += hops[w[0].index()][w[1].index()];
    }
    total
}

/// Brute force over every assignment of a chain's copies to servers.
pub fn brute_force_latency(instance: &Instance, residual: &[Resource], chain: &[VnfId]) -> Option<f64> {
    let dist = hop_costs(&instance.network);
    let n = instance.network.num_servers();
    let mut best: Option<f64> = None;
    let mut idx = vec![0usize; chain.len()];
    loop {
        let mut load = vec![0; n];
        for (j, &s) in idx.iter().enumerate() {
            load[s] += instance.catalog.demand(chain[j]);
        }
        if load.iter().zip(residual).all(|(l, r)| l <= r) {
            let a: Vec<ServerId> = idx.iter().map(|&s| ServerId(s)).collect();
            let c = path_cost(&dist, &a);
            best = Some(best.map_or(c, |b: f64| b.min(c)));
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
