//! Overlapping community detection in attributed, undirected, unweighted
//! networks via multi-objective biogeography-based optimization.
//!
//! The library evolves a population of candidate community structures
//! ("habitats") encoded in an overlapping locus-based adjacency representation
//! and jointly maximizes two objectives: extended modularity (structural
//! quality, overlap-aware) and attribute similarity (homogeneity of node
//! attributes inside each community). The final Pareto front is ranked with
//! non-dominated sorting plus crowding distance, and a single compromise
//! solution can be picked with the `α_SAEM` score, a parameterized
//! generalization of the harmonic mean of the two objectives.
//!
//! Module map:
//!
//! * [`graph`] — attributed network loading, validation, and adjacency queries
//! * [`overlap`] — candidate overlapping-node detection (`OVSet`)
//! * [`olar`] — genotype encoding and two-stage decoding to communities
//! * [`objectives`] — extended modularity, attribute similarity, `α_SAEM`
//! * [`pareto`] — dominance, non-dominated sorting, crowding, selection
//! * [`operators`] — migration, mutation, and crossover over habitats
//! * [`engine`] — the generational loop, seeding, and result assembly
//! * [`cli`] — the `mobbo` command-line front end

pub mod cli;
pub mod engine;
pub mod graph;
pub mod objectives;
pub mod olar;
pub mod operators;
pub mod overlap;
pub mod pareto;
