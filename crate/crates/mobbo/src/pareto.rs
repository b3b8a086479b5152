//! Non-dominated sorting, crowding distance, and environmental selection.
//!
//! Both objectives are maximized. Rank 1 is the non-dominated front of the
//! population; removing it exposes rank 2, and so on. Within a front, habitats
//! are ordered by descending crowding distance — boundary points per objective
//! get `+∞`, interior points the normalized gap between their neighbors, and an
//! objective whose values coincide across the whole front contributes nothing.
//! All ordering is stable, so equal keys keep their prior relative order and a
//! run is reproducible. Duplicate genotypes are kept; nothing deduplicates.

use thiserror::Error;

use crate::objectives::ObjectiveVector;
use crate::olar::Habitat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParetoError {
    #[error("habitat {0} has no evaluated HSI")]
    UnevaluatedHabitat(usize),
    #[error("population of {have} cannot fill {need} survivor slots")]
    InsufficientPopulation { have: usize, need: usize },
}

/// True iff `a` is at least as good as `b` on both objectives and strictly
/// better on at least one.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.eq >= b.eq && a.simatt >= b.simatt && (a.eq > b.eq || a.simatt > b.simatt)
}

fn objectives(pop: &[Habitat]) -> Result<Vec<ObjectiveVector>, ParetoError> {
    pop.iter()
        .enumerate()
        .map(|(i, h)| h.hsi.ok_or(ParetoError::UnevaluatedHabitat(i)))
        .collect()
}

/// Assigns 1-based Pareto ranks by repeated front peeling (fast non-dominated
/// sort). Returns one rank per habitat, aligned with `pop`.
pub fn non_dominated_sort(pop: &[Habitat]) -> Result<Vec<usize>, ParetoError> {
    let objs = objectives(pop)?;
    let n = objs.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&objs[p], &objs[q]) {
                dominates_list[p].push(q);
                dominated_by[q] += 1;
            } else if dominates(&objs[q], &objs[p]) {
                dominates_list[q].push(p);
                dominated_by[p] += 1;
            }
        }
    }
    let mut ranks = vec![0usize; n];
    let mut current: Vec<usize> = (0..n).filter(|&p| dominated_by[p] == 0).collect();
    let mut rank = 1;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            ranks[p] = rank;
            for &q in &dominates_list[p] {
                dominated_by[q] -= 1;
                if dominated_by[q] == 0 {
                    next.push(q);
                }
            }
        }
        rank += 1;
        current = next;
    }
    Ok(ranks)
}

/// Crowding distances for one front, aligned with `front` (indices into
/// `pop`). Boundary habitats per objective get `+∞`.
pub fn crowding_distance(pop: &[Habitat], front: &[usize]) -> Result<Vec<f64>, ParetoError> {
    let objs = objectives(pop)?;
    let k = front.len();
    let mut dist = vec![0.0f64; k];
    if k == 0 {
        return Ok(dist);
    }
    for pick in [|o: &ObjectiveVector| o.eq, |o: &ObjectiveVector| o.simatt] {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| pick(&objs[front[a]]).total_cmp(&pick(&objs[front[b]])));
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        let range = pick(&objs[front[order[k - 1]]]) - pick(&objs[front[order[0]]]);
        if range > 0.0 {
            for w in order.windows(3) {
                let gap = pick(&objs[front[w[2]]]) - pick(&objs[front[w[0]]]);
                dist[w[1]] += gap / range;
            }
        }
    }
    Ok(dist)
}

/// Stably sorts the population by (rank ascending, crowding descending),
/// writing both keys back onto the habitats. Crowding is computed per front
/// over the population as given.
pub fn sort_population(pop: &mut [Habitat]) -> Result<(), ParetoError> {
    let ranks = non_dominated_sort(pop)?;
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let mut fronts: Vec<Vec<usize>> = vec![Vec::new(); max_rank];
    for (i, &r) in ranks.iter().enumerate() {
        fronts[r - 1].push(i);
    }
    for front in &fronts {
        let dist = crowding_distance(pop, front)?;
        for (&i, &d) in front.iter().zip(&dist) {
            pop[i].crowding = Some(d);
        }
    }
    for (i, &r) in ranks.iter().enumerate() {
        pop[i].rank = Some(r);
    }
    // Stable: equal (rank, crowding) keys keep their existing order.
    let mut order: Vec<usize> = (0..pop.len()).collect();
    order.sort_by(|&a, &b| {
        pop[a]
            .rank
            .cmp(&pop[b].rank)
            .then_with(|| pop[b].crowding.unwrap().total_cmp(&pop[a].crowding.unwrap()))
    });
    apply_order(pop, order);
    Ok(())
}

/// Reorders `items` in place so `items[i] = old_items[order[i]]`.
fn apply_order(items: &mut [Habitat], order: Vec<usize>) {
    let mut sorted: Vec<Habitat> = Vec::with_capacity(items.len());
    for &i in &order {
        sorted.push(items[i].clone());
    }
    for (slot, h) in items.iter_mut().zip(sorted) {
        *slot = h;
    }
}

/// NSGA-II environmental selection: sorts the merged population and keeps the
/// first `n`. The front that straddles the cut is ordered by crowding computed
/// over the whole front before truncation.
pub fn select_survivors(
    mut merged: Vec<Habitat>,
    n: usize,
) -> Result<Vec<Habitat>, ParetoError> {
    if merged.len() < n {
        return Err(ParetoError::InsufficientPopulation { have: merged.len(), need: n });
    }
    sort_population(&mut merged)?;
    merged.truncate(n);
    Ok(merged)
}
