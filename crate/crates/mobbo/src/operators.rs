//! Evolutionary operators over habitats.
//!
//! Rates follow the linear biogeography schedule: with the population sorted
//! best-first, habitat `i` of `n` has immigration rate `λ_i = i/(n−1)` and
//! emigration rate `μ_i = 1 − λ_i`, so the best habitat never immigrates and
//! the worst never emigrates. Donors are always drawn from the frozen sorted
//! parent snapshot by a roulette over `μ` that excludes the receiving
//! position. Every operator preserves genotype closure: a locus always points
//! at a neighbor of its node, and overlap status stays confined to `OVSet`
//! members.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::graph::{AttributedNetwork, NodeId};
use crate::olar::Habitat;
use crate::overlap::OvSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("population must have at least 2 habitats, got {0}")]
    PopulationTooSmall(usize),
}

/// Per-position immigration (`lambda`) and emigration (`mu`) rates; index 0
/// is the best habitat of the sorted population.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSchedule {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl RateSchedule {
    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// The linear rate schedule for a population of `n_habitat`.
pub fn migration_rates(n_habitat: usize) -> Result<RateSchedule, OperatorError> {
    if n_habitat < 2 {
        return Err(OperatorError::PopulationTooSmall(n_habitat));
    }
    let denom = (n_habitat - 1) as f64;
    let lambda: Vec<f64> = (0..n_habitat).map(|i| i as f64 / denom).collect();
    let mu: Vec<f64> = lambda.iter().map(|l| 1.0 - l).collect();
    Ok(RateSchedule { lambda, mu })
}

/// Per-locus mutation probability `min(1, 10/nSIV)`.
pub fn p_mutation(nsiv: usize) -> f64 {
    p_mutation_with(10.0, nsiv)
}

/// Per-locus mutation probability with a configurable numerator.
pub fn p_mutation_with(constant: f64, nsiv: usize) -> f64 {
    debug_assert!(nsiv >= 1 && constant > 0.0);
    (constant / nsiv as f64).min(1.0)
}

/// Fitness-proportional selection over `weights`, skipping `exclude`;
/// `None` when the selectable weight mass is zero.
pub fn roulette_select<R: Rng + ?Sized>(
    weights: &[f64],
    exclude: Option<usize>,
    rng: &mut R,
) -> Option<usize> {
    debug_assert!(weights.iter().all(|w| w >= &0.0));
    let total: f64 = weights
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(_, &w)| w)
        .sum();
    if total <= 0.0 {
        return None;
    }
    let mut x = rng.random::<f64>() * total;
    let mut fallback = None;
    for (i, &w) in weights.iter().enumerate() {
        if Some(i) == exclude || w <= 0.0 {
            continue;
        }
        fallback = Some(i);
        if x < w {
            return Some(i);
        }
        x -= w;
    }
    // Floating-point drift can walk x past the last bucket; land there.
    fallback
}

/// Immigration of one locus: with probability `λ_position`, habitat
/// `position` adopts the `k`-th locus of an emigration-roulette donor.
pub fn migrate<R: Rng + ?Sized>(
    donors: &[Habitat],
    target: &mut Habitat,
    position: usize,
    k: usize,
    rates: &RateSchedule,
    rng: &mut R,
) {
    if rng.random::<f64>() <= rates.lambda[position] {
        if let Some(j) = roulette_select(&rates.mu, Some(position), rng) {
            target.siv[k] = donors[j].siv[k];
        }
    }
}

/// Neighborhood-majority move: point the locus at a random neighbor drawn
/// from the base community most common among `k`'s neighbors (label ties
/// uniform). Reads the habitat's own — possibly stale — `community` labels.
fn mutate_siv_majority<R: Rng + ?Sized>(
    net: &AttributedNetwork,
    target: &mut Habitat,
    k: NodeId,
    rng: &mut R,
) {
    let mut counts: HashMap<usize, u32> = HashMap::new();
    let mut label_order: Vec<usize> = Vec::new();
    for &j in net.neighbors(k) {
        let label = target.community[j];
        *counts.entry(label).or_insert_with(|| {
            label_order.push(label);
            0
        }) += 1;
    }
    let best = counts.values().copied().max().expect("degree ≥ 1");
    let tied: Vec<usize> =
        label_order.into_iter().filter(|l| counts[l] == best).collect();
    let label = if tied.len() == 1 { tied[0] } else { tied[rng.random_range(0..tied.len())] };
    let members: Vec<NodeId> = net
        .neighbors(k)
        .iter()
        .copied()
        .filter(|&j| target.community[j] == label)
        .collect();
    target.siv[k] = members[rng.random_range(0..members.len())];
}

/// Population-consensus cascade: move the locus towards the population's most
/// frequent value at `k` (ties to the smallest node id), falling back to the
/// best habitat's value, falling back to a random neighbor different from the
/// consensus (unchanged if no such neighbor exists).
fn mutate_siv_consensus<R: Rng + ?Sized>(
    net: &AttributedNetwork,
    donors: &[Habitat],
    target: &mut Habitat,
    k: NodeId,
    rng: &mut R,
) {
    let mut counts: HashMap<NodeId, u32> = HashMap::new();
    for d in donors {
        *counts.entry(d.siv[k]).or_default() += 1;
    }
    // (count desc, id asc) is a total order, so the winner is iteration-order
    // independent.
    let pos1 = counts
        .iter()
        .fold(None, |acc: Option<(NodeId, u32)>, (&v, &c)| match acc {
            Some((bv, bc)) if c < bc || (c == bc && v > bv) => Some((bv, bc)),
            _ => Some((v, c)),
        })
        .expect("donor population is non-empty")
        .0;
    let pos2 = donors[0].siv[k];
    if target.siv[k] != pos1 {
        target.siv[k] = pos1;
    } else if target.siv[k] != pos2 {
        target.siv[k] = pos2;
    } else {
        let others: Vec<NodeId> =
            net.neighbors(k).iter().copied().filter(|&j| j != pos1).collect();
        if !others.is_empty() {
            target.siv[k] = others[rng.random_range(0..others.len())];
        }
    }
}

/// Locus mutation: a fair coin picks the neighborhood-majority move or the
/// population-consensus cascade.
pub fn mutate_siv<R: Rng + ?Sized>(
    net: &AttributedNetwork,
    donors: &[Habitat],
    target: &mut Habitat,
    k: NodeId,
    rng: &mut R,
) {
    if rng.random::<f64>() <= 0.5 {
        mutate_siv_majority(net, target, k, rng);
    } else {
        mutate_siv_consensus(net, donors, target, k, rng);
    }
}

/// Status mutation: `OVSet` members toggle, everyone else is untouched.
pub fn mutate_status(target: &mut Habitat, k: NodeId, ovset: &OvSet) {
    if ovset.contains(k) {
        target.status[k] = !target.status[k];
    }
}

/// Double-point status crossover: with probability `λ_position`, two distinct
/// cut points `1 ≤ c_lo < c_hi ≤ nSIV` split the status string; the segments
/// before and including `c_lo` and after `c_hi` come from a roulette-selected
/// donor, the middle stays.
pub fn crossover_status<R: Rng + ?Sized>(
    donors: &[Habitat],
    target: &mut Habitat,
    position: usize,
    rates: &RateSchedule,
    rng: &mut R,
) {
    if rng.random::<f64>() > rates.lambda[position] {
        return;
    }
    let Some(j) = roulette_select(&rates.mu, Some(position), rng) else {
        return;
    };
    let n = target.status.len();
    debug_assert!(n >= 2);
    let c1 = rng.random_range(1..=n);
    let mut c2 = rng.random_range(1..=n - 1);
    if c2 >= c1 {
        c2 += 1;
    }
    let (lo, hi) = (c1.min(c2), c1.max(c2));
    let donor = &donors[j];
    target.status[..lo].copy_from_slice(&donor.status[..lo]);
    target.status[hi..].copy_from_slice(&donor.status[hi..]);
}
