//! Attributed, undirected, unweighted networks.
//!
//! The loader consumes two plain-text inputs: an edge list (one `u<ws>v` pair
//! per line, `#` starts a comment, blank lines ignored) and an attribute table
//! (CSV with header `node,attr1,...,attrK`). External node ids are arbitrary
//! strings; internally nodes are dense 0-based indices, adjacency is a CSR
//! layout with sorted neighbor slices, and attribute values are interned to
//! small integers once so metric code never compares strings.

use std::collections::HashMap;

use thiserror::Error;

/// Dense 0-based internal node index.
pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed input: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("attribute row for unknown node {0:?} (pass drop_isolated to skip rows for nodes absent from the edge list)")]
    UnknownNodeInAttributes(String),
    #[error("node {0:?} has no attribute row")]
    MissingAttributeRow(String),
    #[error("node {0:?} is isolated (degree 0)")]
    IsolatedNode(String),
    #[error("node index {index} out of range for {nodes} nodes")]
    OutOfRangeNode { index: usize, nodes: usize },
    #[error("empty network: {0}")]
    EmptyNetwork(String),
}

/// An undirected, unweighted graph with one or more categorical attributes
/// per node.
///
/// Invariants established at construction: at least 2 nodes and 1 edge, no
/// self-loops, no duplicate edges, every node has degree ≥ 1 and a full
/// attribute row.
#[derive(Debug, Clone)]
pub struct AttributedNetwork {
    ext_ids: Vec<String>,
    ext_index: HashMap<String, NodeId>,
    row_ptr: Vec<usize>,
    col_idx: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
    attr_names: Vec<String>,
    attr_domains: Vec<Vec<String>>,
    /// Interned values, node-major with stride `attr_names.len()`.
    attrs: Vec<u32>,
}

impl AttributedNetwork {
    pub fn node_count(&self) -> usize {
        self.ext_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attr_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attr_names
    }

    /// Distinct values seen for attribute column `h`.
    pub fn attribute_domain(&self, h: usize) -> &[String] {
        &self.attr_domains[h]
    }

    /// Sorted, duplicate-free neighbor slice of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.col_idx[self.row_ptr[v]..self.row_ptr[v + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.row_ptr[v + 1] - self.row_ptr[v]
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn external_id(&self, v: NodeId) -> &str {
        &self.ext_ids[v]
    }

    pub fn internal_id(&self, ext: &str) -> Option<NodeId> {
        self.ext_index.get(ext).copied()
    }

    /// Interned value of attribute column `h` at node `v`.
    pub fn attribute(&self, v: NodeId, h: usize) -> u32 {
        self.attrs[v * self.attr_names.len() + h]
    }

    /// Checks a caller-supplied node index, for APIs that accept raw indices.
    pub fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::OutOfRangeNode { index: v, nodes: self.node_count() })
        }
    }

    /// Canonical edge-list text; reloading it reproduces the same external
    /// adjacency and internal numbering.
    pub fn to_edge_text(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&self.ext_ids[u]);
            out.push('\t');
            out.push_str(&self.ext_ids[v]);
            out.push('\n');
        }
        out
    }

    /// Canonical attribute CSV matching [`Self::to_edge_text`].
    pub fn to_attribute_text(&self) -> String {
        let mut out = String::from("node");
        for name in &self.attr_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for v in 0..self.node_count() {
            out.push_str(&self.ext_ids[v]);
            for h in 0..self.attr_names.len() {
                out.push(',');
                out.push_str(&self.attr_domains[h][self.attribute(v, h) as usize]);
            }
            out.push('\n');
        }
        out
    }
}

/// Parses and validates a network from edge-list text and attribute CSV text.
///
/// Nodes are numbered in order of first appearance in the edge list. Duplicate
/// edges (in either orientation) collapse to one. With `drop_isolated`,
/// attribute rows for nodes absent from the edge list are skipped (they belong
/// to isolated nodes, which cannot take part in detection); without it such a
/// row is an error.
pub fn load_network(
    edge_text: &str,
    attribute_text: &str,
    drop_isolated: bool,
) -> Result<AttributedNetwork, GraphError> {
    let mut ext_ids: Vec<String> = Vec::new();
    let mut ext_index: HashMap<String, NodeId> = HashMap::new();
    let intern = |tok: &str, ids: &mut Vec<String>, index: &mut HashMap<String, NodeId>| {
        if let Some(&v) = index.get(tok) {
            v
        } else {
            let v = ids.len();
            ids.push(tok.to_string());
            index.insert(tok.to_string(), v);
            v
        }
    };

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for (lineno, raw) in edge_text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (u, v) = match (toks.next(), toks.next(), toks.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(GraphError::MalformedLine {
                    line: lineno + 1,
                    msg: format!("expected two node ids, got {:?}", line),
                })
            }
        };
        if u == v {
            return Err(GraphError::SelfLoop(u.to_string()));
        }
        let ui = intern(u, &mut ext_ids, &mut ext_index);
        let vi = intern(v, &mut ext_ids, &mut ext_index);
        edges.push((ui.min(vi), ui.max(vi)));
    }
    if edges.is_empty() {
        return Err(GraphError::EmptyNetwork(
            "edge list contains no edges".to_string(),
        ));
    }
    edges.sort_unstable();
    edges.dedup();

    let n = ext_ids.len();
    if n < 2 {
        return Err(GraphError::EmptyNetwork(
            "network must contain at least 2 nodes".to_string(),
        ));
    }

    // CSR over both edge orientations.
    let mut deg = vec![0usize; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    if let Some(v) = deg.iter().position(|&d| d == 0) {
        // Unreachable for edge-list input; guards programmatic misuse.
        if !drop_isolated {
            return Err(GraphError::IsolatedNode(ext_ids[v].clone()));
        }
    }
    let mut row_ptr = vec![0usize; n + 1];
    for v in 0..n {
        row_ptr[v + 1] = row_ptr[v] + deg[v];
    }
    let mut col_idx = vec![0 as NodeId; 2 * edges.len()];
    let mut cursor = row_ptr.clone();
    for &(u, v) in &edges {
        col_idx[cursor[u]] = v;
        cursor[u] += 1;
        col_idx[cursor[v]] = u;
        cursor[v] += 1;
    }
    for v in 0..n {
        col_idx[row_ptr[v]..row_ptr[v + 1]].sort_unstable();
    }

    // Attribute CSV: header, then one row per node.
    let mut lines = attribute_text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or_else(|| GraphError::MalformedLine {
        line: 1,
        msg: "attribute table is empty".to_string(),
    })?;
    let header_fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if header_fields.first() != Some(&"node") || header_fields.len() < 2 {
        return Err(GraphError::MalformedLine {
            line: header_no + 1,
            msg: "attribute header must be `node,attr1,...` with at least one attribute".to_string(),
        });
    }
    let attr_names: Vec<String> = header_fields[1..].iter().map(|s| s.to_string()).collect();
    let k = attr_names.len();

    let mut attr_domains: Vec<Vec<String>> = vec![Vec::new(); k];
    let mut value_index: Vec<HashMap<String, u32>> = vec![HashMap::new(); k];
    let mut attrs = vec![u32::MAX; n * k];
    let mut seen = vec![false; n];
    for (lineno, row) in lines {
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != k + 1 {
            return Err(GraphError::MalformedLine {
                line: lineno + 1,
                msg: format!("expected {} fields, got {}", k + 1, fields.len()),
            });
        }
        let Some(v) = ext_index.get(fields[0]).copied() else {
            if drop_isolated {
                continue;
            }
            return Err(GraphError::UnknownNodeInAttributes(fields[0].to_string()));
        };
        if seen[v] {
            return Err(GraphError::MalformedLine {
                line: lineno + 1,
                msg: format!("duplicate attribute row for node {:?}", fields[0]),
            });
        }
        seen[v] = true;
        for (h, tok) in fields[1..].iter().enumerate() {
            let next = attr_domains[h].len() as u32;
            let id = *value_index[h].entry(tok.to_string()).or_insert_with(|| {
                attr_domains[h].push(tok.to_string());
                next
            });
            attrs[v * k + h] = id;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(GraphError::MissingAttributeRow(ext_ids[v].clone()));
    }

    Ok(AttributedNetwork {
        ext_ids,
        ext_index,
        row_ptr,
        col_idx,
        edges,
        attr_names,
        attr_domains,
        attrs,
    })
}
