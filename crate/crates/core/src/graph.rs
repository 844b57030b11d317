//! Typed property graph storage and the basic graph operations every other
//! module builds on.
//!
//! Edges are stored directed; metric computations project them onto an
//! undirected view (see [`crate::metrics`]). Parallel edges between the same
//! endpoints with the same label are collapsed into one edge whose `weight`
//! property counts the multiplicity. A graph is mutated only while it is
//! being built; afterwards it is shared read-only across workers.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node identifier, namespaced by entity kind (e.g. `user:alice`)
/// so users and hashtags with identical text stay distinct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(raw: impl Into<String>) -> Self {
        NodeId(raw.into())
    }

    /// Build a `kind:local` namespaced id.
    pub fn scoped(kind: &str, local: &str) -> Self {
        NodeId(format!("{kind}:{local}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

/// Edge identifier, unique within one graph. Subgraphs keep the ids of their
/// parent so provenance survives candidate construction.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Node or edge property value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropValue {
    Int(i64),
    Str(String),
}

impl PropValue {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            PropValue::Str(s) => Some(s),
            PropValue::Int(_) => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            PropValue::Int(v) => Some(*v),
            PropValue::Str(_) => None,
        }
    }

    /// Stable textual rendering, used for grouping keys.
    pub fn render(&self) -> String {
        match self {
            PropValue::Int(v) => v.to_string(),
            PropValue::Str(s) => s.clone(),
        }
    }
}

impl From<&str> for PropValue {
    fn from(s: &str) -> Self {
        PropValue::Str(s.to_owned())
    }
}

impl From<String> for PropValue {
    fn from(s: String) -> Self {
        PropValue::Str(s)
    }
}

impl From<i64> for PropValue {
    fn from(v: i64) -> Self {
        PropValue::Int(v)
    }
}

pub type PropMap = BTreeMap<String, PropValue>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub label: String,
    #[serde(default)]
    pub props: PropMap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub label: String,
    #[serde(default)]
    pub props: PropMap,
}

impl Edge {
    pub fn weight(&self) -> i64 {
        self.props.get("weight").and_then(PropValue::as_int).unwrap_or(1)
    }
}

/// Which incident edges to follow from a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PropertyGraph {
    nodes: BTreeMap<NodeId, Node>,
    edges: BTreeMap<EdgeId, Edge>,
    #[serde(skip)]
    out_adj: BTreeMap<NodeId, Vec<EdgeId>>,
    #[serde(skip)]
    in_adj: BTreeMap<NodeId, Vec<EdgeId>>,
    #[serde(skip)]
    pair_index: BTreeMap<(NodeId, String, NodeId), EdgeId>,
    #[serde(skip)]
    next_edge: u64,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(&id)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Node)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> {
        self.edges.iter().map(|(id, e)| (*id, e))
    }

    pub fn nodes_with_label<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a NodeId> {
        self.nodes
            .iter()
            .filter(move |(_, n)| n.label == label)
            .map(|(id, _)| id)
    }

    pub fn has_node_label(&self, label: &str) -> bool {
        self.nodes.values().any(|n| n.label == label)
    }

    pub fn has_edge_label(&self, label: &str) -> bool {
        self.edges.values().any(|e| e.label == label)
    }

    /// Insert a node, or return `false` if the id already exists (the
    /// existing node is kept untouched).
    pub fn add_node(&mut self, id: NodeId, label: impl Into<String>) -> bool {
        match self.nodes.entry(id) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(Node {
                    label: label.into(),
                    props: PropMap::new(),
                });
                true
            }
        }
    }

    pub fn set_node_prop(&mut self, id: &NodeId, key: &str, value: PropValue) -> Result<()> {
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| Error::UnknownNode(id.clone()))?;
        node.props.insert(key.to_owned(), value);
        Ok(())
    }

    /// Insert a directed edge. A repeated `(source, label, target)` triple is
    /// collapsed into the existing edge with its `weight` incremented.
    pub fn add_edge(
        &mut self,
        source: NodeId,
        target: NodeId,
        label: impl Into<String>,
    ) -> Result<EdgeId> {
        if !self.nodes.contains_key(&source) {
            return Err(Error::UnknownNode(source));
        }
        if !self.nodes.contains_key(&target) {
            return Err(Error::UnknownNode(target));
        }
        let label = label.into();
        let key = (source.clone(), label.clone(), target.clone());
        if let Some(&id) = self.pair_index.get(&key) {
            let edge = self.edges.get_mut(&id).expect("indexed edge exists");
            let w = edge.weight();
            edge.props.insert("weight".into(), PropValue::Int(w + 1));
            return Ok(id);
        }
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        let mut props = PropMap::new();
        props.insert("weight".into(), PropValue::Int(1));
        self.edges.insert(
            id,
            Edge {
                source: source.clone(),
                target: target.clone(),
                label,
                props,
            },
        );
        self.out_adj.entry(source).or_default().push(id);
        self.in_adj.entry(target).or_default().push(id);
        self.pair_index.insert(key, id);
        Ok(id)
    }

    pub fn set_edge_prop(&mut self, id: EdgeId, key: &str, value: PropValue) -> Result<()> {
        let edge = self
            .edges
            .get_mut(&id)
            .ok_or_else(|| Error::Invalid(format!("unknown edge id {id}")))?;
        edge.props.insert(key.to_owned(), value);
        Ok(())
    }

    /// Edge ids incident to `n` in the given direction.
    pub fn incident_edges(&self, n: &NodeId, direction: Direction) -> Vec<EdgeId> {
        let mut out = Vec::new();
        if matches!(direction, Direction::Out | Direction::Both) {
            if let Some(ids) = self.out_adj.get(n) {
                out.extend(ids.iter().copied());
            }
        }
        if matches!(direction, Direction::In | Direction::Both) {
            if let Some(ids) = self.in_adj.get(n) {
                out.extend(ids.iter().copied());
            }
        }
        out
    }

    /// Endpoints of edges incident to `n`, optionally restricted to one edge
    /// label; never contains duplicates.
    pub fn neighbors(
        &self,
        n: &NodeId,
        edge_type: Option<&str>,
        direction: Direction,
    ) -> Result<BTreeSet<NodeId>> {
        if !self.nodes.contains_key(n) {
            return Err(Error::UnknownNode(n.clone()));
        }
        let mut out = BTreeSet::new();
        for id in self.incident_edges(n, direction) {
            let edge = &self.edges[&id];
            if let Some(t) = edge_type {
                if edge.label != t {
                    continue;
                }
            }
            let other = if edge.source == *n {
                &edge.target
            } else {
                &edge.source
            };
            if other != n {
                out.insert(other.clone());
            }
        }
        Ok(out)
    }

    /// Strict induced subgraph: the given nodes plus every edge of `self`
    /// with both endpoints inside the set. Properties are copied; edge ids
    /// are preserved.
    pub fn induced_subgraph(&self, ns: &BTreeSet<NodeId>) -> Result<PropertyGraph> {
        self.filtered_subgraph(ns, |_, _| true)
    }

    /// Induced subgraph restricted to edges accepted by `keep`.
    pub fn filtered_subgraph(
        &self,
        ns: &BTreeSet<NodeId>,
        keep: impl Fn(EdgeId, &Edge) -> bool,
    ) -> Result<PropertyGraph> {
        for id in ns {
            if !self.nodes.contains_key(id) {
                return Err(Error::UnknownNode(id.clone()));
            }
        }
        let mut g = PropertyGraph::new();
        for id in ns {
            let node = &self.nodes[id];
            g.add_node(id.clone(), node.label.clone());
            g.nodes.get_mut(id).expect("just inserted").props = node.props.clone();
        }
        for (&eid, edge) in &self.edges {
            if ns.contains(&edge.source) && ns.contains(&edge.target) && keep(eid, edge) {
                g.insert_edge_verbatim(eid, edge.clone());
            }
        }
        g.next_edge = self.next_edge;
        Ok(g)
    }

    fn insert_edge_verbatim(&mut self, id: EdgeId, edge: Edge) {
        self.out_adj.entry(edge.source.clone()).or_default().push(id);
        self.in_adj.entry(edge.target.clone()).or_default().push(id);
        self.pair_index.insert(
            (edge.source.clone(), edge.label.clone(), edge.target.clone()),
            id,
        );
        self.edges.insert(id, edge);
    }

    /// Maximal components under undirected reachability, largest first
    /// (ties broken by smallest contained node id).
    pub fn connected_components(&self) -> Vec<BTreeSet<NodeId>> {
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut components = Vec::new();
        for start in self.nodes.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(n) = stack.pop() {
                comp.insert(n.clone());
                for eid in self.incident_edges(n, Direction::Both) {
                    let edge = &self.edges[&eid];
                    let other = if edge.source == *n {
                        &edge.target
                    } else {
                        &edge.source
                    };
                    if seen.insert(other) {
                        stack.push(other);
                    }
                }
            }
            components.push(comp);
        }
        components.sort_by(|a, b| {
            b.len()
                .cmp(&a.len())
                .then_with(|| a.iter().next().cmp(&b.iter().next()))
        });
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// The largest connected component as a new graph; empty graphs stay empty.
    pub fn largest_component(&self) -> PropertyGraph {
        match self.connected_components().into_iter().next() {
            Some(ns) => self.induced_subgraph(&ns).expect("component nodes exist"),
            None => PropertyGraph::new(),
        }
    }

    /// Node counts per label, for report summaries.
    pub fn node_label_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for node in self.nodes.values() {
            *counts.entry(node.label.clone()).or_insert(0) += 1;
        }
        counts
    }

    pub fn edge_label_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for edge in self.edges.values() {
            *counts.entry(edge.label.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Debug snapshot: `{"nodes": [...], "edges": [...]}`.
    pub fn snapshot(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|(id, n)| {
                serde_json::json!({"id": id, "label": n.label, "props": n.props})
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|(id, e)| {
                serde_json::json!({
                    "id": id,
                    "source": e.source,
                    "target": e.target,
                    "label": e.label,
                    "props": e.props,
                })
            })
            .collect();
        serde_json::json!({"nodes": nodes, "edges": edges})
    }

    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut f, &self.snapshot())?;
        f.write_all(b"\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> PropertyGraph {
        let mut g = PropertyGraph::new();
        for n in ["a", "b", "c"] {
            g.add_node(NodeId::new(n), "node");
        }
        g.add_edge(NodeId::new("a"), NodeId::new("b"), "link").unwrap();
        g.add_edge(NodeId::new("b"), NodeId::new("c"), "link").unwrap();
        g.add_edge(NodeId::new("c"), NodeId::new("a"), "link").unwrap();
        g
    }

    #[test]
    fn multi_edge_collapses_into_weight() {
        let mut g = PropertyGraph::new();
        g.add_node(NodeId::new("a"), "user");
        g.add_node(NodeId::new("b"), "user");
        let e1 = g.add_edge(NodeId::new("a"), NodeId::new("b"), "mentions").unwrap();
        let e2 = g.add_edge(NodeId::new("a"), NodeId::new("b"), "mentions").unwrap();
        assert_eq!(e1, e2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edge(e1).unwrap().weight(), 2);
        // opposite direction is a distinct edge
        let e3 = g.add_edge(NodeId::new("b"), NodeId::new("a"), "mentions").unwrap();
        assert_ne!(e1, e3);
    }

    #[test]
    fn add_edge_requires_endpoints() {
        let mut g = PropertyGraph::new();
        g.add_node(NodeId::new("a"), "user");
        let err = g.add_edge(NodeId::new("a"), NodeId::new("missing"), "x");
        assert!(matches!(err, Err(Error::UnknownNode(_))));
    }

    #[test]
    fn neighbors_isolated_node_is_empty() {
        let mut g = PropertyGraph::new();
        g.add_node(NodeId::new("a"), "user");
        assert!(g.neighbors(&NodeId::new("a"), None, Direction::Both).unwrap().is_empty());
    }

    #[test]
    fn neighbors_unknown_node_errors() {
        let g = PropertyGraph::new();
        assert!(matches!(
            g.neighbors(&NodeId::new("nope"), None, Direction::Out),
            Err(Error::UnknownNode(_))
        ));
    }

    #[test]
    fn neighbors_both_on_triangle() {
        let g = triangle();
        let ns = g.neighbors(&NodeId::new("a"), None, Direction::Both).unwrap();
        assert_eq!(ns, [NodeId::new("b"), NodeId::new("c")].into_iter().collect());
    }

    #[test]
    fn induced_subgraph_identity_and_single() {
        let g = triangle();
        let all: BTreeSet<_> = g.node_ids().cloned().collect();
        let same = g.induced_subgraph(&all).unwrap();
        assert_eq!(same.node_count(), 3);
        assert_eq!(same.edge_count(), 3);

        let single: BTreeSet<_> = [NodeId::new("a")].into_iter().collect();
        let sub = g.induced_subgraph(&single).unwrap();
        assert_eq!(sub.node_count(), 1);
        assert_eq!(sub.edge_count(), 0);
    }

    #[test]
    fn induced_subgraph_two_of_triangle() {
        let g = triangle();
        let ns: BTreeSet<_> = [NodeId::new("a"), NodeId::new("b")].into_iter().collect();
        let sub = g.induced_subgraph(&ns).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn induced_subgraph_unknown_id_errors() {
        let g = triangle();
        let ns: BTreeSet<_> = [NodeId::new("zz")].into_iter().collect();
        assert!(matches!(g.induced_subgraph(&ns), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn components_triangle_plus_isolated() {
        let mut g = triangle();
        g.add_node(NodeId::new("lonely"), "node");
        let comps = g.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 3);
        assert_eq!(comps[1].len(), 1);
    }

    #[test]
    fn components_empty_graph() {
        assert!(PropertyGraph::new().connected_components().is_empty());
    }

    #[test]
    fn components_path_of_five() {
        let mut g = PropertyGraph::new();
        for i in 0..5 {
            g.add_node(NodeId::new(format!("n{i}")), "node");
        }
        for i in 0..4 {
            g.add_edge(
                NodeId::new(format!("n{i}")),
                NodeId::new(format!("n{}", i + 1)),
                "link",
            )
            .unwrap();
        }
        let comps = g.connected_components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 5);
    }
}
