//! Static problem instance: edge topology, VNF catalog and SFC catalog.
//!
//! Capacities and demands are integral resource units; latencies are real.
//! The topology only has to be connected. Missing links are never
//! traversed by the chain walk, and pairs without a direct link are costed
//! with their shortest-path latency when some other placer puts consecutive
//! VNFs on them.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource units (capacities, demands, residuals).
pub type Resource = i64;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident, $prefix:literal) => {
        $(#[$m])*
        #[derive(
            Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl From<usize> for $name {
            fn from(v: usize) -> Self {
                $name(v)
            }
        }
    };
}

id_type!(
    /// Edge server index.
    ServerId,
    "server"
);
id_type!(
    /// VNF index into the catalog's demand table.
    VnfId,
    "VNF"
);
id_type!(
    /// SFC index into the catalog's chain table.
    SfcId,
    "SFC"
);
id_type!(UserId, "user");

/// An undirected latency link as it appears in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub u: usize,
    pub v: usize,
    pub latency: f64,
}

/// A single broken invariant found by [`validate_instance`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    NoServers,
    NoSfcs,
    Disconnected { unreachable: Vec<ServerId> },
    NegativeCapacity { server: ServerId, capacity: Resource },
    SelfLoop { server: ServerId },
    LinkOutOfRange { u: usize, v: usize },
    DuplicateLink { u: usize, v: usize },
    BadLatency { u: usize, v: usize, latency: f64 },
    NegativeDemand { vnf: VnfId, demand: Resource },
    EmptyChain { sfc: SfcId },
    DanglingVnf { sfc: SfcId, vnf: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoServers => write!(f, "network has no servers"),
            Violation::NoSfcs => write!(f, "catalog has no SFCs"),
            Violation::Disconnected { unreachable } => {
                write!(f, "disconnected: {} server(s) unreachable from server0", unreachable.len())
            }
            Violation::NegativeCapacity { server, capacity } => {
                write!(f, "negative capacity {capacity} on {server}")
            }
            Violation::SelfLoop { server } => write!(f, "self-loop on {server}"),
            Violation::LinkOutOfRange { u, v } => write!(f, "link ({u},{v}) references unknown server"),
            Violation::DuplicateLink { u, v } => write!(f, "duplicate link ({u},{v})"),
            Violation::BadLatency { u, v, latency } => {
                write!(f, "negative or non-finite latency {latency} on link ({u},{v})")
            }
            Violation::NegativeDemand { vnf, demand } => {
                write!(f, "negative demand {demand} for {vnf}")
            }
            Violation::EmptyChain { sfc } => write!(f, "{sfc} has an empty chain"),
            Violation::DanglingVnf { sfc, vnf } => {
                write!(f, "dangling VnfId {vnf} in {sfc}")
            }
        }
    }
}

/// Servers with capacities and symmetric latency links.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeNetwork {
    capacities: Vec<Resource>,
    /// Keyed by `(min, max)` endpoint. Kept as given, even if malformed;
    /// [`validate_instance`] reports the problems.
    links: BTreeMap<(usize, usize), f64>,
    raw_links: Vec<Link>,
    adjacency: Vec<Vec<(ServerId, f64)>>,
    /// All-pairs shortest path latencies (`INFINITY` when unreachable).
    distance: Vec<Vec<f64>>,
}

impl EdgeNetwork {
    pub fn new(capacities: Vec<Resource>, links: Vec<Link>) -> Self {
        let n = capacities.len();
        let mut map = BTreeMap::new();
        for l in &links {
            if l.u == l.v || l.u >= n || l.v >= n {
                continue;
            }
            map.entry((l.u.min(l.v), l.u.max(l.v))).or_insert(l.latency);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), &lat) in &map {
            adjacency[u].push((ServerId(v), lat));
            adjacency[v].push((ServerId(u), lat));
        }
        for adj in &mut adjacency {
            adj.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        }

        let mut distance = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in distance.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for (&(u, v), &lat) in &map {
            if lat < distance[u][v] {
                distance[u][v] = lat;
                distance[v][u] = lat;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = distance[i][k] + distance[k][j];
                    if via < distance[i][j] {
                        distance[i][j] = via;
                    }
                }
            }
        }

        EdgeNetwork {
            capacities,
            links: map,
            raw_links: links,
            adjacency,
            distance,
        }
    }

    pub fn num_servers(&self) -> usize {
        self.capacities.len()
    }

    pub fn servers(&self) -> impl Iterator<Item = ServerId> {
        (0..self.capacities.len()).map(ServerId)
    }

    pub fn capacity(&self, n: ServerId) -> Resource {
        self.capacities[n.0]
    }

    pub fn capacities(&self) -> &[Resource] {
        &self.capacities
    }

    pub fn total_capacity(&self) -> Resource {
        self.capacities.iter().sum()
    }

    /// Links as `(u, v, latency)` with `u < v`, in lexicographic order.
    pub fn links(&self) -> impl Iterator<Item = (ServerId, ServerId, f64)> + '_ {
        self.links.iter().map(|(&(u, v), &l)| (ServerId(u), ServerId(v), l))
    }

    pub fn raw_links(&self) -> &[Link] {
        &self.raw_links
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn link_latency(&self, u: ServerId, v: ServerId) -> Option<f64> {
        self.links.get(&(u.0.min(v.0), u.0.max(v.0))).copied()
    }

    /// Direct neighbours of `node`, ascending by latency, ties by id.
    pub fn neighbors_by_latency(&self, node: ServerId) -> &[(ServerId, f64)] {
        &self.adjacency[node.0]
    }

    /// Latency of one chain hop: 0 on the same server, the link latency for
    /// adjacent servers, the shortest-path latency otherwise.
    pub fn hop_latency(&self, u: ServerId, v: ServerId) -> f64 {
        if u == v {
            return 0.0;
        }
        match self.link_latency(u, v) {
            Some(l) => l,
            None => self.distance[u.0][v.0],
        }
    }

    /// Total latency of a chain laid out over `assignment`.
    pub fn path_latency(&self, assignment: &[ServerId]) -> f64 {
        assignment
            .windows(2)
            .fold(0.0, |acc, w| acc + self.hop_latency(w[0], w[1]))
    }

    /// Same network with every capacity multiplied by `factor` and floored.
    pub fn scaled(&self, factor: f64) -> EdgeNetwork {
        let caps = self
            .capacities
            .iter()
            .map(|&c| (c as f64 * factor).floor() as Resource)
            .collect();
        EdgeNetwork::new(caps, self.raw_links.clone())
    }

    fn unreachable_from_first(&self) -> Vec<ServerId> {
        let n = self.num_servers();
        if n == 0 {
            return Vec::new();
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v.0] {
                    seen[v.0] = true;
                    queue.push_back(v.0);
                }
            }
        }
        (0..n).filter(|&i| !seen[i]).map(ServerId).collect()
    }
}

/// VNF demands and ordered SFC compositions. A chain may list the same VNF
/// more than once; every occurrence is a separate copy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub vnf_demand: Vec<Resource>,
    pub sfc_chain: Vec<Vec<VnfId>>,
}

impl Catalog {
    pub fn new(vnf_demand: Vec<Resource>, sfc_chain: Vec<Vec<VnfId>>) -> Self {
        Catalog {
            vnf_demand,
            sfc_chain,
        }
    }

    pub fn num_vnfs(&self) -> usize {
        self.vnf_demand.len()
    }

    pub fn num_sfcs(&self) -> usize {
        self.sfc_chain.len()
    }

    pub fn sfcs(&self) -> impl Iterator<Item = SfcId> {
        (0..self.sfc_chain.len()).map(SfcId)
    }

    pub fn demand(&self, i: VnfId) -> Resource {
        self.vnf_demand[i.0]
    }

    pub fn chain(&self, f: SfcId) -> &[VnfId] {
        &self.sfc_chain[f.0]
    }

    pub fn try_chain(&self, f: SfcId) -> Result<&[VnfId]> {
        self.sfc_chain
            .get(f.0)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownSfc(f))
    }

    /// Membership indicator: does VNF `i` appear in chain `f`.
    pub fn contains(&self, i: VnfId, f: SfcId) -> bool {
        self.sfc_chain[f.0].contains(&i)
    }

    /// Summed demand of every occurrence in chain `f`.
    pub fn chain_demand(&self, f: SfcId) -> Resource {
        self.chain(f).iter().map(|&i| self.demand(i)).sum()
    }
}

/// Reports every broken invariant; an empty list means the instance is valid.
pub fn validate_instance(network: &EdgeNetwork, catalog: &Catalog) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = network.num_servers();
    if n == 0 {
        out.push(Violation::NoServers);
    }
    for (i, &c) in network.capacities.iter().enumerate() {
        if c < 0 {
            out.push(Violation::NegativeCapacity {
                server: ServerId(i),
                capacity: c,
            });
        }
    }
    let mut seen = BTreeMap::new();
    for l in &network.raw_links {
        if l.u >= n || l.v >= n {
            out.push(Violation::LinkOutOfRange { u: l.u, v: l.v });
            continue;
        }
        if l.u == l.v {
            out.push(Violation::SelfLoop { server: ServerId(l.u) });
            continue;
        }
        let key = (l.u.min(l.v), l.u.max(l.v));
        if seen.insert(key, ()).is_some() {
            out.push(Violation::DuplicateLink { u: key.0, v: key.1 });
        }
        if !(l.latency.is_finite() && l.latency >= 0.0) {
            out.push(Violation::BadLatency {
                u: l.u,
                v: l.v,
                latency: l.latency,
            });
        }
    }
    let unreachable = network.unreachable_from_first();
    if !unreachable.is_empty() {
        out.push(Violation::Disconnected { unreachable });
    }

    if catalog.sfc_chain.is_empty() {
        out.push(Violation::NoSfcs);
    }
    for (i, &d) in catalog.vnf_demand.iter().enumerate() {
        if d < 0 {
            out.push(Violation::NegativeDemand {
                vnf: VnfId(i),
                demand: d,
            });
        }
    }
    for (f, chain) in catalog.sfc_chain.iter().enumerate() {
        if chain.is_empty() {
            out.push(Violation::EmptyChain { sfc: SfcId(f) });
        }
        for &i in chain {
            if i.0 >= catalog.num_vnfs() {
                out.push(Violation::DanglingVnf {
                    sfc: SfcId(f),
                    vnf: i.0,
                });
            }
        }
    }
    out
}

/// A validated network + catalog pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub network: EdgeNetwork,
    pub catalog: Catalog,
}

impl Instance {
    pub fn new(network: EdgeNetwork, catalog: Catalog) -> Result<Self> {
        let violations = validate_instance(&network, &catalog);
        if violations.is_empty() {
            Ok(Instance { network, catalog })
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn with_capacity_scale(&self, factor: f64) -> Instance {
        Instance {
            network: self.network.scaled(factor),
            catalog: self.catalog.clone(),
        }
    }
}

/// Remaining per-server resource while deployments are committed in a slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResidualCapacity(Vec<Resource>);

impl ResidualCapacity {
    pub fn full(network: &EdgeNetwork) -> Self {
        ResidualCapacity(network.capacities.iter().map(|&c| c.max(0)).collect())
    }

    pub fn from_vec(v: Vec<Resource>) -> Self {
        ResidualCapacity(v)
    }

    pub fn get(&self, n: ServerId) -> Resource {
        self.0[n.0]
    }

    pub fn as_slice(&self) -> &[Resource] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> Resource {
        self.0.iter().sum()
    }

    pub fn max(&self) -> Resource {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Subtracts `amount` from server `n`; refuses to go negative.
    pub fn consume(&mut self, n: ServerId, amount: Resource) -> bool {
        let slot = &mut self.0[n.0];
        if *slot < amount {
            return false;
        }
        *slot -= amount;
        true
    }
}

/// Start server of the chain walk: the endpoint with more residual resource
/// on the globally cheapest link.
///
/// Link ties go to the lexicographically smallest `(u, v)`, endpoint ties
/// to the smaller id. A network without links (a single server) anchors on
/// the server with the most residual resource.
pub fn cheapest_link_anchor(network: &EdgeNetwork, residual: &ResidualCapacity) -> ServerId {
    let cheapest = network
        .links()
        .fold(None::<(ServerId, ServerId, f64)>, |best, link| match best {
            Some(b) if b.2 <= link.2 => Some(b),
            _ => Some(link),
        });
    match cheapest {
        Some((u, v, _)) => {
            if residual.get(v) > residual.get(u) {
                v
            } else {
                u
            }
        }
        None => network
            .servers()
            .fold(None::<ServerId>, |best, n| match best {
                Some(b) if residual.get(b) >= residual.get(n) => Some(b),
                _ => Some(n),
            })
            .unwrap_or(ServerId(0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(u: usize, v: usize, latency: f64) -> Link {
        Link { u, v, latency }
    }

    fn tables_catalog() -> Catalog {
        let chains = [
            vec![3, 6, 9, 7, 4],
            vec![9, 8, 1, 3],
            vec![3, 1, 6],
            vec![10, 14, 1],
            vec![1, 11, 13, 1, 4],
            vec![8, 1, 12, 10],
        ];
        Catalog::new(
            vec![5, 4, 4, 8, 5, 3, 5, 8, 7, 5, 1, 4, 3, 3, 4],
            chains
                .iter()
                .map(|c| c.iter().map(|&i| VnfId(i)).collect())
                .collect(),
        )
    }

    fn complete(caps: Vec<Resource>) -> EdgeNetwork {
        let n = caps.len();
        let mut links = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                links.push(link(u, v, 1.0 + (u * n + v) as f64 / 10.0));
            }
        }
        EdgeNetwork::new(caps, links)
    }

    #[test]
    fn tables_instance_validates() {
        let net = complete(vec![10, 8, 9, 12, 8, 11]);
        assert!(validate_instance(&net, &tables_catalog()).is_empty());
    }

    #[test]
    fn dangling_vnf_is_reported() {
        let net = complete(vec![10, 8, 9, 12, 8, 11]);
        let mut cat = tables_catalog();
        cat.sfc_chain[2].push(VnfId(99));
        let v = validate_instance(&net, &cat);
        assert_eq!(
            v,
            vec![Violation::DanglingVnf {
                sfc: SfcId(2),
                vnf: 99
            }]
        );
        assert!(v[0].to_string().contains("dangling VnfId"));
    }

    #[test]
    fn two_servers_without_link_are_disconnected() {
        let net = EdgeNetwork::new(vec![5, 5], vec![]);
        let cat = Catalog::new(vec![1], vec![vec![VnfId(0)]]);
        let v = validate_instance(&net, &cat);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("disconnected"));
    }

    #[test]
    fn negative_and_malformed_values_are_reported() {
        let net = EdgeNetwork::new(
            vec![-1, 4, 4],
            vec![link(0, 1, -2.0), link(1, 2, 1.0), link(2, 1, 1.0), link(1, 1, 0.0)],
        );
        let cat = Catalog::new(vec![-3], vec![vec![], vec![VnfId(0)]]);
        let v = validate_instance(&net, &cat);
        assert!(v.contains(&Violation::NegativeCapacity {
            server: ServerId(0),
            capacity: -1
        }));
        assert!(v.contains(&Violation::BadLatency {
            u: 0,
            v: 1,
            latency: -2.0
        }));
        assert!(v.contains(&Violation::DuplicateLink { u: 1, v: 2 }));
        assert!(v.contains(&Violation::SelfLoop { server: ServerId(1) }));
        assert!(v.contains(&Violation::NegativeDemand {
            vnf: VnfId(0),
            demand: -3
        }));
        assert!(v.contains(&Violation::EmptyChain { sfc: SfcId(0) }));
        assert!(Instance::new(net, cat).is_err());
    }

    #[test]
    fn neighbors_sorted_by_latency() {
        let net = EdgeNetwork::new(vec![1, 1, 1], vec![link(0, 1, 5.0), link(0, 2, 2.0)]);
        assert_eq!(
            net.neighbors_by_latency(ServerId(0)),
            &[(ServerId(2), 2.0), (ServerId(1), 5.0)]
        );
    }

    #[test]
    fn neighbors_of_unlinked_node_is_empty() {
        let net = EdgeNetwork::new(vec![1, 1, 1], vec![link(0, 1, 5.0)]);
        assert!(net.neighbors_by_latency(ServerId(2)).is_empty());
    }

    #[test]
    fn neighbor_ties_break_by_id() {
        let net = EdgeNetwork::new(
            vec![1; 5],
            vec![link(0, 4, 3.0), link(0, 1, 3.0), link(2, 3, 1.0)],
        );
        assert_eq!(
            net.neighbors_by_latency(ServerId(0)),
            &[(ServerId(1), 3.0), (ServerId(4), 3.0)]
        );
    }

    #[test]
    fn anchor_is_larger_endpoint_of_cheapest_link() {
        let net = EdgeNetwork::new(vec![10, 8, 9], vec![link(0, 1, 2.0), link(1, 2, 5.0)]);
        let r = ResidualCapacity::full(&net);
        assert_eq!(cheapest_link_anchor(&net, &r), ServerId(0));
        let r = ResidualCapacity::from_vec(vec![1, 8, 9]);
        assert_eq!(cheapest_link_anchor(&net, &r), ServerId(1));
    }

    #[test]
    fn anchor_tie_breaks() {
        let net = EdgeNetwork::new(vec![4, 4], vec![link(0, 1, 1.0)]);
        assert_eq!(cheapest_link_anchor(&net, &ResidualCapacity::full(&net)), ServerId(0));

        let net = EdgeNetwork::new(
            vec![1, 2, 3, 4],
            vec![link(2, 3, 3.0), link(0, 1, 3.0), link(1, 2, 4.0)],
        );
        // link (0,1) wins the tie, server 1 has more room
        assert_eq!(cheapest_link_anchor(&net, &ResidualCapacity::full(&net)), ServerId(1));
    }

    #[test]
    fn single_server_anchor() {
        let net = EdgeNetwork::new(vec![7], vec![]);
        assert_eq!(cheapest_link_anchor(&net, &ResidualCapacity::full(&net)), ServerId(0));
    }

    #[test]
    fn hop_latency_falls_back_to_shortest_path() {
        let net = EdgeNetwork::new(vec![1, 1, 1], vec![link(0, 1, 1.5), link(1, 2, 2.0)]);
        assert_eq!(net.hop_latency(ServerId(0), ServerId(0)), 0.0);
        assert_eq!(net.hop_latency(ServerId(1), ServerId(0)), 1.5);
        assert_eq!(net.hop_latency(ServerId(0), ServerId(2)), 3.5);
        assert_eq!(
            net.path_latency(&[ServerId(0), ServerId(0), ServerId(1), ServerId(2)]),
            3.5
        );
    }

    #[test]
    fn capacity_scaling_floors() {
        let net = complete(vec![10, 8, 9, 12, 8, 11]);
        assert_eq!(net.scaled(1.5).capacities(), &[15, 12, 13, 18, 12, 16]);
        assert_eq!(net.scaled(0.5).capacities(), &[5, 4, 4, 6, 4, 5]);
    }

    #[test]
    fn membership_indicator() {
        let cat = tables_catalog();
        assert!(cat.contains(VnfId(1), SfcId(4)));
        assert!(!cat.contains(VnfId(0), SfcId(4)));
        assert_eq!(cat.chain_demand(SfcId(4)), 20);
    }
}
