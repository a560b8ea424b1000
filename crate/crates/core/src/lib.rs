//! Public goods games on networks with pool-size-weighted investment.
//!
//! Agents sit on an undirected network and run a public goods game in the
//! closed neighborhood of every agent: each cooperator splits one unit of
//! capital across the pools in its portfolio proportionally to pool
//! attractiveness `(k+1)^alpha`, pools multiply their take by an interest
//! rate `r` and share it equally among members, and agents imitate
//! neighbors through a Fermi rule. The crate provides the two network
//! generators used throughout (periodic square lattice, Barabasi-Albert),
//! sparse column-stochastic payoff operators with a brute-force oracle,
//! the evolutionary dynamics, static self-return analysis, and a
//! reproducible parallel ensemble runner.

pub mod analysis;
pub mod dynamics;
pub mod ensemble;
mod error;
pub mod graph;
pub mod payoff;
pub mod report;

pub use error::{Error, Result};
pub use graph::{GraphKind, GraphSpec, Network};
pub use payoff::{
    AttractivenessProfile, InvestmentOperator, PayoffResult, SharingOperator, StateVector,
};
pub use dynamics::{SimConfig, Trajectory, UpdateMode, UpdateStats};
pub use ensemble::{derive_seed, EnsembleStats, SweepPoint, SweepRow};
