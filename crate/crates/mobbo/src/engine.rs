//! The generational optimizer that ties everything together.
//!
//! One run proceeds as: derive the overlap candidate set, seed `n_habitat`
//! random habitats, then for a fixed number of generations evolve a copy of
//! the population against the frozen sorted parents (per-locus migration, a
//! single gated pass of both mutation phases, one status crossover per
//! habitat), re-decode and re-score each child, merge parents with children,
//! and keep the best half. Sorting is Pareto-based in the bi-objective mode
//! and plain scalar descent in the two single-objective baselines.
//!
//! Every random draw comes from a ChaCha8 stream keyed by `(master seed,
//! domain, a, b)`, so initialization, the overlap scan, and each
//! `(generation, habitat)` evolution step own disjoint deterministic streams.
//! That is what lets the parallel mode produce byte-identical results: each
//! child's stream is independent of scheduling order.

use std::fmt;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::AttributedNetwork;
use crate::objectives::{self, MetricError, ObjectiveVector};
use crate::olar::{self, Habitat};
use crate::operators::{self, OperatorError};
use crate::overlap::{self, OvSet};
use crate::pareto::{self, ParetoError};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("result has no rank-1 habitat")]
    EmptyFront,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
}

/// Which fitness drives sorting and selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Bi-objective search over structure and attributes with Pareto ranking.
    MobboOcd,
    /// Baseline maximizing extended modularity alone.
    EmBbo,
    /// Baseline maximizing attribute similarity alone.
    OvSimattBbo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::MobboOcd => "mobbo-ocd",
            Mode::EmBbo => "em-bbo",
            Mode::OvSimattBbo => "ov-simatt-bbo",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n_habitat: usize,
    pub generations: usize,
    pub seed: u64,
    pub lc_threshold: f64,
    /// Numerator of the per-locus mutation probability `min(1, c/nSIV)`.
    pub mutation_constant: f64,
    /// Compromise exponents to report scores at.
    pub alphas: Vec<f64>,
    pub mode: Mode,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_habitat: 100,
            generations: 100,
            seed: 0,
            lc_threshold: 0.1,
            mutation_constant: 10.0,
            alphas: vec![0.5, 1.0, 1.5],
            mode: Mode::MobboOcd,
            parallel: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let fail = |msg: String| Err(EngineError::ConfigInvalid(msg));
        if self.n_habitat < 2 {
            return fail(format!("population needs at least 2 habitats, got {}", self.n_habitat));
        }
        if self.generations < 1 {
            return fail("at least one generation is required".into());
        }
        if !(self.lc_threshold.is_finite() && self.lc_threshold >= 0.0) {
            return fail(format!("link-closeness threshold must be ≥ 0, got {}", self.lc_threshold));
        }
        if !(self.mutation_constant.is_finite() && self.mutation_constant > 0.0) {
            return fail(format!("mutation constant must be > 0, got {}", self.mutation_constant));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return fail(format!("α values must be finite and ≥ 0, got {a}"));
        }
        Ok(())
    }
}

pub const DOMAIN_OVSET: u64 = 1;
pub const DOMAIN_INIT: u64 = 2;
pub const DOMAIN_EVOLVE: u64 = 3;

/// The deterministic ChaCha8 stream for `(master seed, domain, a, b)`.
///
/// The four words fill the 256-bit cipher key little-endian, so distinct
/// coordinates give statistically independent streams and the draw sequence
/// never depends on scheduling.
pub fn stream(master_seed: u64, domain: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    key[16..24].copy_from_slice(&a.to_le_bytes());
    key[24..32].copy_from_slice(&b.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Best objective values anywhere in the population after a generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenerationStat {
    pub generation: usize,
    pub best_eq: f64,
    pub best_simatt: f64,
}

/// Everything one run produces: the final sorted population plus the inputs
/// needed to interpret it.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub config: RunConfig,
    pub ovset: OvSet,
    pub population: Vec<Habitat>,
    /// One entry per generation boundary, starting at generation 0.
    pub trace: Vec<GenerationStat>,
    pub wall: Duration,
}

impl RunResult {
    /// Indices of the rank-1 habitats, in population order.
    pub fn front(&self) -> Vec<usize> {
        self.population
            .iter()
            .enumerate()
            .filter(|(_, h)| h.rank == Some(1))
            .map(|(i, _)| i)
            .collect()
    }

    /// Index of the rank-1 habitat maximizing the compromise score at
    /// `alpha`; ties keep the earlier habitat.
    pub fn best_compromise(&self, alpha: f64) -> Result<usize, EngineError> {
        let mut best: Option<(usize, f64)> = None;
        for i in self.front() {
            let hsi = self.population[i].hsi.expect("front is evaluated");
            let score = objectives::alpha_saem(hsi.simatt, hsi.eq, alpha)?;
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((i, score));
            }
        }
        best.map(|(i, _)| i).ok_or(EngineError::EmptyFront)
    }
}

fn stat(generation: usize, pop: &[Habitat]) -> GenerationStat {
    let mut best_eq = f64::NEG_INFINITY;
    let mut best_simatt = f64::NEG_INFINITY;
    for h in pop {
        let hsi = h.hsi.expect("population is evaluated");
        best_eq = best_eq.max(hsi.eq);
        best_simatt = best_simatt.max(hsi.simatt);
    }
    GenerationStat { generation, best_eq, best_simatt }
}

/// Stable descending sort on one objective; ranks become positions, so only
/// the single best habitat carries rank 1.
fn scalar_sort(pop: &mut [Habitat], key: fn(&ObjectiveVector) -> f64) {
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        let (oa, ob) = (pop[a].hsi, pop[b].hsi);
        key(&ob.expect("evaluated")).total_cmp(&key(&oa.expect("evaluated")))
    });
    let mut sorted: Vec<Habitat> = order.iter().map(|&i| pop[i].clone()).collect();
    for (slot, h) in pop.iter_mut().zip(sorted.drain(..)) {
        *slot = h;
    }
    for (i, h) in pop.iter_mut().enumerate() {
        h.rank = Some(i + 1);
        h.crowding = None;
    }
}

fn sort(mode: Mode, pop: &mut [Habitat]) -> Result<(), EngineError> {
    match mode {
        Mode::MobboOcd => pareto::sort_population(pop).map_err(Into::into),
        Mode::EmBbo => {
            scalar_sort(pop, |o| o.eq);
            Ok(())
        }
        Mode::OvSimattBbo => {
            scalar_sort(pop, |o| o.simatt);
            Ok(())
        }
    }
}

/// Merge-then-truncate selection, re-sorted afterwards so ranks and crowding
/// describe the survivor set only.
fn select(mode: Mode, merged: Vec<Habitat>, n: usize) -> Result<Vec<Habitat>, EngineError> {
    match mode {
        Mode::MobboOcd => {
            let mut pop = pareto::select_survivors(merged, n)?;
            pareto::sort_population(&mut pop)?;
            Ok(pop)
        }
        _ => {
            let mut pop = merged;
            sort(mode, &mut pop)?;
            pop.truncate(n);
            Ok(pop)
        }
    }
}

/// Runs the configured mode end to end.
pub fn run(net: &AttributedNetwork, config: &RunConfig) -> Result<RunResult, EngineError> {
    config.validate()?;
    let start = Instant::now();
    let n = config.n_habitat;
    let nsiv = net.node_count();

    let mut ov_rng = stream(config.seed, DOMAIN_OVSET, 0, 0);
    let ovset = overlap::find_ovset(net, config.lc_threshold, &mut ov_rng);

    let mut population: Vec<Habitat> = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = stream(config.seed, DOMAIN_INIT, i as u64, 0);
        let mut h = olar::encode_random(net, &ovset, &mut rng);
        olar::decode(net, &mut h);
        objectives::evaluate_hsi(net, &mut h)?;
        population.push(h);
    }
    sort(config.mode, &mut population)?;

    let rates = operators::migration_rates(n)?;
    let pmut = operators::p_mutation_with(config.mutation_constant, nsiv);

    let mut trace = Vec::with_capacity(config.generations + 1);
    trace.push(stat(0, &population));

    for g in 1..=config.generations {
        let parents = &population;
        let evolve_one = |i: usize| -> Result<Habitat, MetricError> {
            let mut rng = stream(config.seed, DOMAIN_EVOLVE, g as u64, i as u64);
            let mut child = parents[i].clone();
            for k in 0..nsiv {
                operators::migrate(parents, &mut child, i, k, &rates, &mut rng);
                // One draw gates both mutation phases at this locus.
                if rng.random::<f64>() <= pmut {
                    operators::mutate_siv(net, parents, &mut child, k, &mut rng);
                    operators::mutate_status(&mut child, k, &ovset);
                }
            }
            operators::crossover_status(parents, &mut child, i, &rates, &mut rng);
            olar::decode(net, &mut child);
            objectives::evaluate_hsi(net, &mut child)?;
            Ok(child)
        };
        let children: Vec<Habitat> = if config.parallel {
            (0..n).into_par_iter().map(evolve_one).collect::<Result<_, _>>()?
        } else {
            (0..n).map(evolve_one).collect::<Result<_, _>>()?
        };
        let mut merged = population;
        merged.extend(children);
        population = select(config.mode, merged, n)?;
        trace.push(stat(g, &population));
    }

    Ok(RunResult {
        config: config.clone(),
        ovset,
        population,
        trace,
        wall: start.elapsed(),
    })
}

/// The bi-objective algorithm; rejects configs set to a baseline mode.
pub fn run_mobbo_ocd(net: &AttributedNetwork, config: &RunConfig) -> Result<RunResult, EngineError> {
    if config.mode != Mode::MobboOcd {
        return Err(EngineError::ConfigInvalid(format!(
            "run_mobbo_ocd called with mode {}", config.mode
        )));
    }
    run(net, config)
}

/// Either single-objective baseline; rejects the bi-objective mode.
pub fn run_single_objective(
    net: &AttributedNetwork,
    config: &RunConfig,
) -> Result<RunResult, EngineError> {
    if config.mode == Mode::MobboOcd {
        return Err(EngineError::ConfigInvalid(
            "run_single_objective called with mode mobbo-ocd".into(),
        ));
    }
    run(net, config)
}
