//! Overlapping locus-based adjacency representation: encoding and decoding.
//!
//! A habitat (candidate solution) stores one adjacency locus per node —
//! `siv[i]` is always one of `i`'s neighbors — plus a binary overlap flag that
//! may be set only for `OVSet` members. Decoding runs in two stages:
//!
//! 1. **First decoding** reads disjoint base communities off the connected
//!    components of the undirected edge set `{(i, siv[i])}`. Component labels
//!    are canonical: communities are numbered `0..n_cm` in order of their
//!    smallest member, so equal genotypes always decode to equal labelings.
//! 2. **Final decoding** expands overlap: a node with status 0 belongs to its
//!    own base community only, while a node with status 1 belongs to every
//!    base community represented in its neighborhood (its own is always among
//!    them because `siv[i]` is a neighbor).
//!
//! Base communities always have at least two members, so decoding alone can
//! never produce singleton communities.

use rand::Rng;
use thiserror::Error;

use crate::graph::{AttributedNetwork, NodeId};
use crate::objectives::ObjectiveVector;
use crate::overlap::OvSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OlarError {
    #[error("node index {index} out of range for {nodes} nodes")]
    OutOfRangeNode { index: usize, nodes: usize },
    #[error("partition contains no communities")]
    EmptyPartition,
}

/// One candidate solution.
///
/// `community` and `final_community` are derived fields filled by [`decode`];
/// operators may leave them stale until the next decode. `status[i]` may be
/// true only for `OVSet` members.
#[derive(Debug, Clone, PartialEq)]
pub struct Habitat {
    pub siv: Vec<NodeId>,
    pub status: Vec<bool>,
    /// Base community label per node (canonical, 0-based).
    pub community: Vec<usize>,
    /// Sorted set of community labels per node after overlap expansion.
    pub final_community: Vec<Vec<usize>>,
    pub hsi: Option<ObjectiveVector>,
    pub rank: Option<usize>,
    pub crowding: Option<f64>,
}

impl Habitat {
    /// Number of base communities (valid after decoding).
    pub fn community_count(&self) -> usize {
        self.community.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Builds the overlapping partition this habitat decodes to.
    pub fn partition(&self) -> OverlappingPartition {
        let n_cm = self.community_count();
        let mut communities = vec![Vec::new(); n_cm];
        for v in 0..self.final_community.len() {
            for &c in &self.final_community[v] {
                communities[c].push(v);
            }
        }
        OverlappingPartition { node_count: self.final_community.len(), communities, memberships: self.final_community.clone() }
    }
}

/// Draws a uniformly random genotype: every locus picks one of the node's
/// neighbors, then every `OVSet` member flips a fair coin for its status
/// (non-members stay 0). The returned habitat is not yet decoded.
pub fn encode_random<R: Rng + ?Sized>(
    net: &AttributedNetwork,
    ovset: &OvSet,
    rng: &mut R,
) -> Habitat {
    let n = net.node_count();
    let mut siv = Vec::with_capacity(n);
    for i in 0..n {
        let nb = net.neighbors(i);
        siv.push(nb[rng.random_range(0..nb.len())]);
    }
    let mut status = vec![false; n];
    for &i in ovset.members() {
        status[i] = rng.random_bool(0.5);
    }
    Habitat {
        siv,
        status,
        community: Vec::new(),
        final_community: Vec::new(),
        hsi: None,
        rank: None,
        crowding: None,
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Stage one: base communities = connected components of `{(i, siv[i])}`,
/// labeled canonically in order of smallest member.
pub fn first_decode(habitat: &mut Habitat) {
    let n = habitat.siv.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        uf.union(i, habitat.siv[i]);
    }
    let mut root_label = vec![usize::MAX; n];
    let mut next = 0;
    habitat.community.clear();
    habitat.community.reserve(n);
    for v in 0..n {
        let r = uf.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        habitat.community.push(root_label[r]);
    }
}

/// Stage two: overlap expansion of status-1 nodes into every neighboring base
/// community.
pub fn final_decode(net: &AttributedNetwork, habitat: &mut Habitat) {
    let n = habitat.siv.len();
    habitat.final_community.clear();
    habitat.final_community.reserve(n);
    for i in 0..n {
        if habitat.status[i] {
            let mut labels: Vec<usize> =
                net.neighbors(i).iter().map(|&j| habitat.community[j]).collect();
            labels.sort_unstable();
            labels.dedup();
            habitat.final_community.push(labels);
        } else {
            habitat.final_community.push(vec![habitat.community[i]]);
        }
    }
}

/// Runs both decoding stages and clears any cached evaluation.
pub fn decode(net: &AttributedNetwork, habitat: &mut Habitat) {
    first_decode(habitat);
    final_decode(net, habitat);
    habitat.hsi = None;
    habitat.rank = None;
    habitat.crowding = None;
}

/// A (possibly overlapping) community structure over `0..node_count`.
///
/// Community member lists and per-node membership lists are sorted. Nodes may
/// belong to any number of communities, including zero for externally
/// supplied partitions that do not cover the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlappingPartition {
    node_count: usize,
    communities: Vec<Vec<NodeId>>,
    memberships: Vec<Vec<usize>>,
}

impl OverlappingPartition {
    /// Builds a partition from explicit community member lists. Members are
    /// sorted and deduplicated; empty communities are rejected.
    pub fn new(
        node_count: usize,
        communities: Vec<Vec<NodeId>>,
    ) -> Result<Self, OlarError> {
        if communities.is_empty() {
            return Err(OlarError::EmptyPartition);
        }
        let mut normalized = Vec::with_capacity(communities.len());
        for mut members in communities {
            for &v in &members {
                if v >= node_count {
                    return Err(OlarError::OutOfRangeNode { index: v, nodes: node_count });
                }
            }
            members.sort_unstable();
            members.dedup();
            if members.is_empty() {
                return Err(OlarError::EmptyPartition);
            }
            normalized.push(members);
        }
        let mut memberships = vec![Vec::new(); node_count];
        for (c, members) in normalized.iter().enumerate() {
            for &v in members {
                memberships[v].push(c);
            }
        }
        Ok(OverlappingPartition { node_count, communities: normalized, memberships })
    }

    /// Removes single-member communities, renumbering the rest; returns the
    /// filtered partition and how many were dropped. The result may have zero
    /// communities.
    pub fn drop_singletons(self) -> (Self, usize) {
        let node_count = self.node_count;
        let before = self.communities.len();
        let kept: Vec<Vec<NodeId>> =
            self.communities.into_iter().filter(|c| c.len() >= 2).collect();
        let dropped = before - kept.len();
        let mut memberships = vec![Vec::new(); node_count];
        for (c, members) in kept.iter().enumerate() {
            for &v in members {
                memberships[v].push(c);
            }
        }
        (
            OverlappingPartition { node_count, communities: kept, memberships },
            dropped,
        )
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    /// Sorted member list of community `c`.
    pub fn members(&self, c: usize) -> &[NodeId] {
        &self.communities[c]
    }

    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    /// Sorted community indices containing `v`.
    pub fn memberships(&self, v: NodeId) -> &[usize] {
        &self.memberships[v]
    }

    /// `O_v`: number of communities containing `v`.
    pub fn overlap_count(&self, v: NodeId) -> usize {
        self.memberships[v].len()
    }
}
