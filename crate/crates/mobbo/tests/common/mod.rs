//! Shared fixtures and brute-force reference implementations.
//!
//! Everything here recomputes results from first principles — adjacency
//! matrices, BFS, repeated peeling — deliberately avoiding the library's own
//! algebraic shortcuts so the two routes can disagree when one is wrong.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use mobbo::graph::{load_network, AttributedNetwork, NodeId};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// Loads `data/<stem>.edges` + `data/<stem>.attrs.csv`.
pub fn load_fixture(stem: &str) -> AttributedNetwork {
    let edges = std::fs::read_to_string(fixture(&format!("{stem}.edges"))).unwrap();
    let attrs = std::fs::read_to_string(fixture(&format!("{stem}.attrs.csv"))).unwrap();
    load_network(&edges, &attrs, false).unwrap()
}

/// A random connected network with `2..=max_n` nodes, built as text and fed
/// through the loader: a uniform random spanning tree plus up to `n` extra
/// edges, with 1–3 categorical attributes of small domains.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> AttributedNetwork {
    let n = rng.random_range(2..=max_n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for _ in 0..rng.random_range(0..=n) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    edges.sort_unstable();
    edges.dedup();

    let mut edge_text = String::new();
    for (u, v) in &edges {
        edge_text.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    let k = rng.random_range(1..=3);
    let mut attr_text = String::from("node");
    for h in 0..k {
        attr_text.push_str(&format!(",a{h}"));
    }
    attr_text.push('\n');
    for v in 0..n {
        attr_text.push_str(&format!("{}", v + 1));
        for _ in 0..k {
            attr_text.push_str(&format!(",v{}", rng.random_range(0..4)));
        }
        attr_text.push('\n');
    }
    load_network(&edge_text, &attr_text, false).unwrap()
}

/// Connected-component labels of the graph `{(i, succ[i])}`, canonical:
/// labels are assigned 0.. in ascending order of each component's first node.
pub fn bfs_components(n: usize, succ: &[NodeId]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, &j) in succ.iter().enumerate() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        label[start] = next;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if label[w] == usize::MAX {
                    label[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// Reference decoding: BFS base labels, then per-node final label sets, then
/// the label-indexed communities.
pub fn oracle_decode(
    net: &AttributedNetwork,
    siv: &[NodeId],
    status: &[bool],
) -> (Vec<usize>, Vec<Vec<usize>>, Vec<Vec<NodeId>>) {
    let n = siv.len();
    let label = bfs_components(n, siv);
    let mut final_labels = Vec::with_capacity(n);
    for i in 0..n {
        let mut ls: Vec<usize> = if status[i] {
            net.neighbors(i).iter().map(|&j| label[j]).collect()
        } else {
            vec![label[i]]
        };
        ls.sort_unstable();
        ls.dedup();
        final_labels.push(ls);
    }
    let n_label = label.iter().max().map_or(0, |m| m + 1);
    let mut communities = vec![Vec::new(); n_label];
    for (i, ls) in final_labels.iter().enumerate() {
        for &l in ls {
            communities[l].push(i);
        }
    }
    (label, final_labels, communities)
}

/// Ordered-pair extended modularity straight from the definition, via a
/// dense adjacency matrix.
pub fn oracle_eq(net: &AttributedNetwork, communities: &[Vec<NodeId>]) -> f64 {
    let n = net.node_count();
    let two_m = (2 * net.edge_count()) as f64;
    let mut adj = vec![vec![0.0f64; n]; n];
    for &(u, v) in net.edges() {
        adj[u][v] = 1.0;
        adj[v][u] = 1.0;
    }
    let mut overlap = vec![0usize; n];
    for community in communities {
        for &v in community {
            overlap[v] += 1;
        }
    }
    let mut total = 0.0;
    for community in communities {
        for &v in community {
            for &w in community {
                let expected = (net.degree(v) * net.degree(w)) as f64 / two_m;
                total += (adj[v][w] - expected) / (overlap[v] * overlap[w]) as f64;
            }
        }
    }
    total / two_m
}

/// Attribute-homogeneity score straight from the definition; communities of
/// fewer than two distinct nodes are excluded. `None` when nothing counts.
pub fn oracle_simatt(net: &AttributedNetwork, communities: &[Vec<NodeId>]) -> Option<f64> {
    let k = net.attribute_count();
    let mut total = 0.0;
    let mut counted = 0usize;
    for community in communities {
        let mut members = community.clone();
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            continue;
        }
        counted += 1;
        let mut agreement = 0usize;
        for h in 0..k {
            let domain = net.attribute_domain(h).len();
            let mut counts = vec![0usize; domain];
            for &v in &members {
                counts[net.attribute(v, h) as usize] += 1;
            }
            agreement += counts.into_iter().max().unwrap_or(0);
        }
        total += agreement as f64 / (k * members.len()) as f64;
    }
    (counted > 0).then(|| total / counted as f64)
}

pub fn harmonic(s: f64, e: f64) -> f64 {
    2.0 * s * e / (s + e)
}

/// Max-form Pareto dominance on (eq, simatt) pairs.
pub fn oracle_dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 >= b.0 && a.1 >= b.1 && (a.0 > b.0 || a.1 > b.1)
}

/// 1-based front ranks by repeated peeling: strip the currently
/// non-dominated points, assign them the next rank, repeat.
pub fn oracle_ranks(objs: &[(f64, f64)]) -> Vec<usize> {
    let n = objs.len();
    let mut rank = vec![0usize; n];
    let mut round = 0;
    while rank.contains(&0) {
        round += 1;
        let peel: Vec<usize> = (0..n)
            .filter(|&p| rank[p] == 0)
            .filter(|&p| {
                !(0..n).any(|q| rank[q] == 0 && q != p && oracle_dominates(objs[q], objs[p]))
            })
            .collect();
        for p in peel {
            rank[p] = round;
        }
    }
    rank
}

/// Crowding distances for `front` (positions into `objs`), by the textbook
/// procedure: per objective, stable-sort the front, give the ends infinity,
/// and add the normalized neighbor gap to interior members.
pub fn oracle_crowding(objs: &[(f64, f64)], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    let mut dist = vec![0.0f64; k];
    if k == 0 {
        return dist;
    }
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    for pick in [|o: (f64, f64)| o.0, |o: (f64, f64)| o.1] {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| pick(objs[front[a]]).total_cmp(&pick(objs[front[b]])));
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        let range = pick(objs[front[order[k - 1]]]) - pick(objs[front[order[0]]]);
        if range > 0.0 {
            for w in 0..k - 2 {
                let gap = pick(objs[front[order[w + 2]]]) - pick(objs[front[order[w]]]);
                dist[order[w + 1]] += gap / range;
            }
        }
    }
    dist
}

/// The population order after environmental sorting: (rank ascending,
/// crowding descending, original index) — the last key reproduces stability.
pub fn oracle_sorted_order(objs: &[(f64, f64)]) -> Vec<usize> {
    let ranks = oracle_ranks(objs);
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let mut crowding = vec![0.0f64; objs.len()];
    for r in 1..=max_rank {
        let front: Vec<usize> = (0..objs.len()).filter(|&i| ranks[i] == r).collect();
        for (pos, d) in oracle_crowding(objs, &front).into_iter().enumerate() {
            crowding[front[pos]] = d;
        }
    }
    let mut order: Vec<usize> = (0..objs.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .cmp(&ranks[b])
            .then_with(|| crowding[b].total_cmp(&crowding[a]))
            .then_with(|| a.cmp(&b))
    });
    order
}
