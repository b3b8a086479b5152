//! Fitness metrics over overlapping partitions.
//!
//! * **Extended modularity (EQ)** — Newman–Girvan modularity generalized to
//!   overlap: each ordered node pair `(v, w)` inside a community contributes
//!   `(A_vw − k_v·k_w/2m) / (O_v·O_w)`, where `O_v` counts the communities
//!   containing `v`. On disjoint covers it reduces exactly to plain
//!   modularity. Values may be negative; nothing clamps them.
//! * **Attribute similarity (SimAtt)** — per community, the best achievable
//!   per-attribute value agreement: for each attribute pick the value with the
//!   most support, sum the supports, and normalize by members × attributes;
//!   average over communities. Single-member communities are ignored.
//! * **α_SAEM** — a parameterized compromise of the two: `α = 1` is the
//!   harmonic mean, `α → 0` approaches SimAtt, `α → ∞` approaches EQ.

use serde::Serialize;
use thiserror::Error;

use crate::graph::AttributedNetwork;
use crate::olar::{Habitat, OverlappingPartition};

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("partition has no communities to score")]
    EmptyPartition,
    #[error("network has no attributes")]
    NoAttributes,
    #[error("partition overlaps; plain modularity requires disjoint communities")]
    OverlapPresent,
    #[error("α_SAEM denominator α²·SimAtt + EQ is zero")]
    DegenerateDenominator,
    #[error("α must be finite and positive, got {0}")]
    InvalidAlpha(f64),
    #[error("partition is over {partition} nodes but the network has {network}")]
    PartitionMismatch { partition: usize, network: usize },
}

/// The two maximized objectives of one habitat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveVector {
    pub eq: f64,
    pub simatt: f64,
}

fn check_partition(
    net: &AttributedNetwork,
    part: &OverlappingPartition,
) -> Result<(), MetricError> {
    if part.node_count() != net.node_count() {
        return Err(MetricError::PartitionMismatch {
            partition: part.node_count(),
            network: net.node_count(),
        });
    }
    if part.community_count() == 0 {
        return Err(MetricError::EmptyPartition);
    }
    Ok(())
}

/// Extended modularity of a (possibly overlapping) partition.
pub fn extended_modularity(
    net: &AttributedNetwork,
    part: &OverlappingPartition,
) -> Result<f64, MetricError> {
    check_partition(net, part)?;
    let two_m = 2.0 * net.edge_count() as f64;
    let mut stamp = vec![0u32; net.node_count()];
    let mut total = 0.0;
    for (c, members) in part.communities().iter().enumerate() {
        let tag = c as u32 + 1;
        for &v in members {
            stamp[v] = tag;
        }
        // Ordered pairs (v, w) with an edge contribute A_vw/(O_v·O_w) twice
        // per undirected edge; the degree product term factors into
        // (Σ k_v/O_v)² / 2m.
        let mut edge_part = 0.0;
        let mut strength = 0.0;
        for &v in members {
            let ov = part.overlap_count(v) as f64;
            strength += net.degree(v) as f64 / ov;
            for &w in net.neighbors(v) {
                if stamp[w] == tag && w > v {
                    edge_part += 2.0 / (ov * part.overlap_count(w) as f64);
                }
            }
        }
        total += edge_part - strength * strength / two_m;
    }
    Ok(total / two_m)
}

/// Newman–Girvan modularity; the partition must be disjoint. Kept as an
/// independent implementation so the two routes can be checked against each
/// other on disjoint covers.
pub fn modularity(
    net: &AttributedNetwork,
    part: &OverlappingPartition,
) -> Result<f64, MetricError> {
    check_partition(net, part)?;
    for v in 0..part.node_count() {
        if part.overlap_count(v) > 1 {
            return Err(MetricError::OverlapPresent);
        }
    }
    let m = net.edge_count() as f64;
    let two_m = 2.0 * m;
    let mut stamp = vec![0u32; net.node_count()];
    let mut total = 0.0;
    for (c, members) in part.communities().iter().enumerate() {
        let tag = c as u32 + 1;
        for &v in members {
            stamp[v] = tag;
        }
        let mut internal = 0usize;
        let mut degree_sum = 0usize;
        for &v in members {
            degree_sum += net.degree(v);
            for &w in net.neighbors(v) {
                if stamp[w] == tag && w > v {
                    internal += 1;
                }
            }
        }
        let frac = degree_sum as f64 / two_m;
        total += internal as f64 / m - frac * frac;
    }
    Ok(total)
}

/// Attribute similarity of a partition; single-member communities are
/// excluded from both the average and its denominator.
pub fn sim_att(
    net: &AttributedNetwork,
    part: &OverlappingPartition,
) -> Result<f64, MetricError> {
    check_partition(net, part)?;
    let k = net.attribute_count();
    if k == 0 {
        return Err(MetricError::NoAttributes);
    }
    let mut counts: Vec<u32> = Vec::new();
    let mut counted = 0usize;
    let mut total = 0.0;
    for members in part.communities() {
        if members.len() < 2 {
            continue;
        }
        counted += 1;
        let mut agreement = 0.0;
        for h in 0..k {
            counts.clear();
            counts.resize(net.attribute_domain(h).len(), 0);
            let mut best = 0u32;
            for &v in members {
                let slot = &mut counts[net.attribute(v, h) as usize];
                *slot += 1;
                best = best.max(*slot);
            }
            agreement += best as f64;
        }
        total += agreement / (k as f64 * members.len() as f64);
    }
    if counted == 0 {
        return Err(MetricError::EmptyPartition);
    }
    Ok(total / counted as f64)
}

/// The parameterized compromise score `(1+α²)·SimAtt·EQ / (α²·SimAtt + EQ)`.
///
/// Negative EQ passes straight through — a structurally poor partition scores
/// negatively rather than being clamped.
pub fn alpha_saem(simatt: f64, eq: f64, alpha: f64) -> Result<f64, MetricError> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(MetricError::InvalidAlpha(alpha));
    }
    let a2 = alpha * alpha;
    let den = a2 * simatt + eq;
    if den == 0.0 {
        return Err(MetricError::DegenerateDenominator);
    }
    Ok((1.0 + a2) * simatt * eq / den)
}

/// Scores a decoded habitat on both objectives and caches the result on it.
pub fn evaluate_hsi(
    net: &AttributedNetwork,
    habitat: &mut Habitat,
) -> Result<ObjectiveVector, MetricError> {
    let part = habitat.partition();
    let hsi = ObjectiveVector {
        eq: extended_modularity(net, &part)?,
        simatt: sim_att(net, &part)?,
    };
    habitat.hsi = Some(hsi);
    Ok(hsi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_network;
    use crate::olar;

    fn bridge() -> AttributedNetwork {
        load_network(
            "1 2\n1 3\n2 3\n3 4\n3 5\n4 5\n",
            "node,color\n1,a\n2,a\n3,a\n4,b\n5,b\n",
            false,
        )
        .unwrap()
    }

    fn part(n: usize, cs: &[&[usize]]) -> OverlappingPartition {
        OverlappingPartition::new(n, cs.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn eq_of_the_overlapping_bridge_partition() {
        // Communities {1,2,3} and {3,4,5} with node 3 in both: EQ = 1/6.
        let net = bridge();
        let p = part(5, &[&[0, 1, 2], &[2, 3, 4]]);
        let eq = extended_modularity(&net, &p).unwrap();
        assert!((eq - 1.0 / 6.0).abs() <= 1e-12, "eq = {eq}");
    }

    #[test]
    fn eq_of_the_disjoint_bridge_partition() {
        let net = bridge();
        let p = part(5, &[&[0, 1, 2], &[3, 4]]);
        let eq = extended_modularity(&net, &p).unwrap();
        assert!((eq - 1.0 / 9.0).abs() <= 1e-12, "eq = {eq}");
    }

    #[test]
    fn eq_reduces_to_modularity_on_disjoint_covers() {
        let net = bridge();
        for cs in [
            vec![vec![0, 1, 2], vec![3, 4]],
            vec![vec![0, 1], vec![2, 3, 4]],
            vec![vec![0, 1, 2, 3, 4]],
            vec![vec![0, 3], vec![1, 4], vec![2]],
        ] {
            let p = OverlappingPartition::new(5, cs).unwrap();
            let eq = extended_modularity(&net, &p).unwrap();
            let q = modularity(&net, &p).unwrap();
            assert!((eq - q).abs() <= 1e-12, "eq = {eq}, q = {q}");
        }
    }

    #[test]
    fn eq_of_the_whole_network_as_one_community_is_zero() {
        let net = bridge();
        let p = part(5, &[&[0, 1, 2, 3, 4]]);
        let eq = extended_modularity(&net, &p).unwrap();
        assert!(eq.abs() <= 1e-12, "eq = {eq}");
    }

    #[test]
    fn eq_of_two_disconnected_triangles_split_apart_is_half() {
        let net = load_network(
            "a b\nb c\na c\nd e\ne f\nd f\n",
            "node,k\na,0\nb,0\nc,0\nd,1\ne,1\nf,1\n",
            false,
        )
        .unwrap();
        let p = part(6, &[&[0, 1, 2], &[3, 4, 5]]);
        let eq = extended_modularity(&net, &p).unwrap();
        assert!((eq - 0.5).abs() <= 1e-12, "eq = {eq}");
    }

    #[test]
    fn modularity_rejects_overlap() {
        let net = bridge();
        let p = part(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(modularity(&net, &p).unwrap_err(), MetricError::OverlapPresent);
    }

    #[test]
    fn partitions_over_the_wrong_node_count_are_rejected() {
        let net = bridge();
        let p = part(4, &[&[0, 1, 2, 3]]);
        assert!(matches!(
            extended_modularity(&net, &p).unwrap_err(),
            MetricError::PartitionMismatch { partition: 4, network: 5 }
        ));
    }

    #[test]
    fn simatt_of_a_single_mixed_community() {
        // Values a,a,a,b in one 4-node community: 3/4.
        let net = load_network(
            "1 2\n2 3\n3 4\n",
            "node,color\n1,a\n2,a\n3,a\n4,b\n",
            false,
        )
        .unwrap();
        let p = part(4, &[&[0, 1, 2, 3]]);
        assert!((sim_att(&net, &p).unwrap() - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn simatt_decomposes_per_attribute() {
        // Community {0,1}: attr1 agrees twice (a), attr2 splits (x, y) → 3/4.
        // Community {2,3}: attr1 splits (b, c), attr2 agrees (x) → 3/4.
        let net = load_network(
            "1 2\n2 3\n3 4\n",
            "node,a1,a2\n1,a,x\n2,a,y\n3,b,x\n4,c,x\n",
            false,
        )
        .unwrap();
        let p = part(4, &[&[0, 1], &[2, 3]]);
        assert!((sim_att(&net, &p).unwrap() - 0.75).abs() <= 1e-12);
    }

    #[test]
    fn simatt_of_the_bridge_partitions() {
        let net = bridge();
        let overlapping = part(5, &[&[0, 1, 2], &[2, 3, 4]]);
        assert!((sim_att(&net, &overlapping).unwrap() - 5.0 / 6.0).abs() <= 1e-12);
        let disjoint = part(5, &[&[0, 1, 2], &[3, 4]]);
        assert!((sim_att(&net, &disjoint).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn simatt_skips_singleton_communities() {
        let net = bridge();
        let p = part(5, &[&[0, 1, 2], &[3]]);
        // Only the pure 3-node community counts.
        assert!((sim_att(&net, &p).unwrap() - 1.0).abs() <= 1e-12);
        let only_singletons = part(5, &[&[0], &[1]]);
        assert_eq!(sim_att(&net, &only_singletons).unwrap_err(), MetricError::EmptyPartition);
    }

    #[test]
    fn alpha_one_is_the_harmonic_mean() {
        let v = alpha_saem(0.8, 0.4, 1.0).unwrap();
        let harmonic = 2.0 * 0.8 * 0.4 / (0.8 + 0.4);
        assert!((v - harmonic).abs() <= 1e-12);
        assert!((v - 8.0 / 15.0).abs() <= 1e-12);
    }

    #[test]
    fn alpha_extremes_approach_each_objective() {
        let v = alpha_saem(0.7, 0.3, 1e-6).unwrap();
        assert!((v - 0.7).abs() <= 1e-4, "α→0 gave {v}");
        let v = alpha_saem(0.7, 0.3, 1e6).unwrap();
        assert!((v - 0.3).abs() <= 1e-4, "α→∞ gave {v}");
    }

    #[test]
    fn negative_eq_is_not_clamped() {
        let v = alpha_saem(0.5, -0.1, 1.0).unwrap();
        assert!((v - -0.25).abs() <= 1e-12, "v = {v}");
    }

    #[test]
    fn degenerate_denominator_is_an_error() {
        assert_eq!(
            alpha_saem(0.5, -0.5, 1.0).unwrap_err(),
            MetricError::DegenerateDenominator
        );
    }

    #[test]
    fn alpha_domain_is_validated() {
        for bad in [-1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                alpha_saem(0.5, 0.5, bad).unwrap_err(),
                MetricError::InvalidAlpha(_)
            ));
        }
        // α = 0 is in the domain and collapses to SimAtt outright.
        assert!((alpha_saem(0.7, 0.3, 0.0).unwrap() - 0.7).abs() <= 1e-15);
    }

    #[test]
    fn evaluate_hsi_caches_on_the_habitat() {
        let net = bridge();
        let mut h = crate::olar::Habitat {
            siv: vec![1, 0, 0, 4, 3],
            status: vec![false, false, true, false, false],
            community: Vec::new(),
            final_community: Vec::new(),
            hsi: None,
            rank: None,
            crowding: None,
        };
        olar::decode(&net, &mut h);
        let hsi = evaluate_hsi(&net, &mut h).unwrap();
        assert_eq!(h.hsi, Some(hsi));
        assert!((hsi.eq - 1.0 / 6.0).abs() <= 1e-12);
        assert!((hsi.simatt - 5.0 / 6.0).abs() <= 1e-12);
    }
}
