//! Failure-aware edge backup of service function chains.
//!
//! A time-slotted simulator and algorithm library. Each slot, a policy picks
//! which SFC backups to deploy on a capacity-constrained edge network, using
//! UCB-style estimates of SFC popularity and VNF failure rates that are
//! learned online from the requests and failures it observes.
//!
//! Module map:
//!
//! * [`model`] - edge topology, VNF/SFC catalog, validation, graph queries.
//! * [`workload`] - hidden ground truth and per-slot request/failure sampling.
//! * [`learning`] - popularity and failure-rate UCB learners.
//! * [`placement`] - the Prim-inspired minimum-latency chain walk plus the
//!   first-fit and random-fit placers used by the baselines.
//! * [`policy`] - reward, the RTSD greedy loop, Bandit and Random schemes.
//! * [`oracle`] - exhaustive references for small instances.
//! * [`harness`] - configuration, the slot loop, sweeps and trace output.

pub mod error;
pub mod harness;
pub mod learning;
pub mod model;
pub mod oracle;
pub mod placement;
pub mod policy;
mod rng;
pub mod workload;

pub use error::{Error, Result};
pub use model::{Catalog, EdgeNetwork, Instance, ResidualCapacity, ServerId, SfcId, UserId, VnfId};
