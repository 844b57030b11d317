//! The generate step: initial keyword query, soft node grouping, G1/G2/G3
//! candidate construction, and size/predicate filtering.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Direction, NodeId, PropValue, PropertyGraph};
use crate::ingest::{AUTHORS, CONTAINS, HASHTAG, MENTIONS, TWEET, USER, USES};
use crate::metrics::tokenize;
use crate::pattern::{GroupPattern, GroupSide};

/// Sentinel group value for nodes missing a grouping property.
const NULL_KEY: &str = "null";

/// One cell of the soft partition: grouping key values and member node ids.
/// A node may belong to several groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeGroup {
    pub key: BTreeMap<String, String>,
    pub members: BTreeSet<NodeId>,
}

impl NodeGroup {
    pub fn key_string(&self) -> String {
        self.key
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Candidate construction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionKind {
    G1,
    G2,
    G3,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionKind::G1 => f.write_str("G1"),
            ConstructionKind::G2 => f.write_str("G2"),
            ConstructionKind::G3 => f.write_str("G3"),
        }
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "G1" => Ok(ConstructionKind::G1),
            "G2" => Ok(ConstructionKind::G2),
            "G3" => Ok(ConstructionKind::G3),
            other => Err(Error::UnknownRule(other.to_owned())),
        }
    }
}

/// A constructed candidate subgraph with its provenance and text corpus.
#[derive(Debug, Clone)]
pub struct CandidateSubgraph {
    pub id: String,
    pub graph: PropertyGraph,
    pub group_key: BTreeMap<String, String>,
    pub rule: ConstructionKind,
    pub corpus: Vec<String>,
}

/// Comparison operator for local-property predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "!=")]
    Ne,
}

impl Comparator {
    fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ne => lhs != rhs,
        }
    }
}

/// One local-property predicate: every node (or edge) with the given label
/// must carry the property and satisfy the comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub label: String,
    pub property: String,
    pub op: Comparator,
    pub value: PropValue,
}

impl Predicate {
    fn holds(&self, props: &BTreeMap<String, PropValue>) -> bool {
        match (props.get(&self.property), &self.value) {
            (Some(PropValue::Int(a)), PropValue::Int(b)) => self.op.holds(a, b),
            (Some(PropValue::Str(a)), PropValue::Str(b)) => self.op.holds(a, b),
            _ => false, // missing property or mismatched type fails the check
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSpec {
    #[serde(default)]
    pub nodes: Vec<Predicate>,
    #[serde(default)]
    pub edges: Vec<Predicate>,
}

impl PredicateSpec {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }
}

/// Normalized keyword list: lowercased, leading `#` stripped.
fn normalize_keywords(keywords: &[String]) -> Vec<String> {
    keywords
        .iter()
        .map(|k| k.strip_prefix('#').unwrap_or(k).to_lowercase())
        .filter(|k| !k.is_empty())
        .collect()
}

fn text_matches(text: &str, keywords: &[String]) -> bool {
    tokenize(text).any(|token| keywords.iter().any(|k| k == &token))
}

fn hashtag_matches(tag: &str, keywords: &[String]) -> bool {
    let tag = tag.to_lowercase();
    keywords.iter().any(|k| tag.contains(k))
}

/// Count keyword occurrences in a corpus: one per matching text token plus
/// one per hashtag-style token containing the keyword.
pub fn keyword_frequency(corpus: &[String], keyword: &str) -> usize {
    let k = keyword.strip_prefix('#').unwrap_or(keyword).to_lowercase();
    if k.is_empty() {
        return 0;
    }
    corpus
        .iter()
        .flat_map(|text| tokenize(text))
        .filter(|token| *token == k)
        .count()
}

/// Build the background graph: tweets whose text matches a keyword as a
/// whole token, or whose hashtags contain a keyword as a substring, passing
/// the optional date floor -- plus all their directly associated nodes.
pub fn initial_query(
    g: &PropertyGraph,
    keywords: &[String],
    date_from: Option<&str>,
) -> Result<PropertyGraph> {
    let keywords = normalize_keywords(keywords);
    if keywords.is_empty() {
        return Err(Error::Invalid("keyword list is empty".into()));
    }
    let mut selected: BTreeSet<NodeId> = BTreeSet::new();
    for id in g.nodes_with_label(TWEET) {
        let node = g.node(id).expect("iterated node");
        if let Some(floor) = date_from {
            let date = node.props.get("date").and_then(PropValue::as_str);
            if date.is_none_or(|d| d < floor) {
                continue;
            }
        }
        let text_hit = node
            .props
            .get("text")
            .and_then(PropValue::as_str)
            .is_some_and(|t| text_matches(t, &keywords));
        let tag_hit = !text_hit
            && g.neighbors(id, Some(USES), Direction::Out)?
                .iter()
                .filter_map(|h| g.node(h))
                .filter_map(|n| n.props.get("text").and_then(PropValue::as_str))
                .any(|t| hashtag_matches(t, &keywords));
        if text_hit || tag_hit {
            selected.insert(id.clone());
        }
    }
    if selected.is_empty() {
        return Err(Error::EmptyBackgroundGraph);
    }
    let mut nodes = selected.clone();
    for tweet in &selected {
        nodes.extend(associated_nodes(g, tweet)?);
    }
    g.induced_subgraph(&nodes)
}

/// Author, mentioned users, hashtags, and urls directly associated with a
/// tweet node.
fn associated_nodes(g: &PropertyGraph, tweet: &NodeId) -> Result<BTreeSet<NodeId>> {
    let mut out = g.neighbors(tweet, Some(AUTHORS), Direction::In)?;
    out.extend(g.neighbors(tweet, Some(MENTIONS), Direction::Out)?);
    out.extend(g.neighbors(tweet, Some(USES), Direction::Out)?);
    out.extend(g.neighbors(tweet, Some(CONTAINS), Direction::Out)?);
    Ok(out)
}

fn side_key(
    g: &PropertyGraph,
    id: &NodeId,
    side: &GroupSide,
    key: &mut BTreeMap<String, String>,
) {
    let node = g.node(id).expect("matched node");
    for prop in &side.keys {
        let value = node
            .props
            .get(prop)
            .map(PropValue::render)
            .unwrap_or_else(|| NULL_KEY.to_owned());
        let mut name = format!("{}.{}", side.label, prop);
        if key.contains_key(&name) {
            name.push_str(".2"); // both pattern sides share label and key
        }
        key.insert(name, value);
    }
}

/// Soft grouping: one group per distinct combination of grouping-key values
/// over all matches of the pattern. Nodes missing a grouping property
/// contribute the sentinel value `null` instead of being dropped.
pub fn group_nodes(g: &PropertyGraph, pattern: &GroupPattern) -> Vec<NodeGroup> {
    let mut groups: BTreeMap<BTreeMap<String, String>, BTreeSet<NodeId>> = BTreeMap::new();
    match (&pattern.edge, &pattern.right) {
        (Some(edge_label), Some(right)) => {
            for (_, edge) in g.edges() {
                if edge.label != *edge_label {
                    continue;
                }
                let src_ok = g.node(&edge.source).is_some_and(|n| n.label == pattern.left.label);
                let dst_ok = g.node(&edge.target).is_some_and(|n| n.label == right.label);
                if !src_ok || !dst_ok {
                    continue;
                }
                let mut key = BTreeMap::new();
                side_key(g, &edge.source, &pattern.left, &mut key);
                side_key(g, &edge.target, right, &mut key);
                let members = groups.entry(key).or_default();
                members.insert(edge.source.clone());
                members.insert(edge.target.clone());
            }
        }
        _ => {
            for id in g.nodes_with_label(&pattern.left.label) {
                let mut key = BTreeMap::new();
                side_key(g, id, &pattern.left, &mut key);
                groups.entry(key).or_default().insert(id.clone());
            }
        }
    }
    groups
        .into_iter()
        .map(|(key, members)| NodeGroup { key, members })
        .collect()
}

/// Build one candidate subgraph from a node group.
pub fn construct_candidate(
    g: &PropertyGraph,
    group: &NodeGroup,
    rule: ConstructionKind,
    hop_budget: usize,
) -> Result<CandidateSubgraph> {
    for m in &group.members {
        if !g.contains_node(m) {
            return Err(Error::UnknownNode(m.clone()));
        }
    }
    let tweets: BTreeSet<NodeId> = group
        .members
        .iter()
        .filter(|m| g.node(m).is_some_and(|n| n.label == TWEET))
        .cloned()
        .collect();

    let graph = match rule {
        ConstructionKind::G1 => build_g1(g, &tweets)?,
        ConstructionKind::G2 => build_g2(g, &tweets)?,
        ConstructionKind::G3 => build_g3(g, &tweets, hop_budget)?,
    };
    let corpus = graph
        .nodes_with_label(TWEET)
        .filter_map(|id| graph.node(id))
        .filter_map(|n| n.props.get("text").and_then(PropValue::as_str))
        .map(str::to_owned)
        .collect();
    Ok(CandidateSubgraph {
        id: format!("{rule}|{}", NodeGroup { key: group.key.clone(), members: BTreeSet::new() }.key_string()),
        graph,
        group_key: group.key.clone(),
        rule,
        corpus,
    })
}

/// G1: relaxed induced subgraph -- the group's tweets plus every directly
/// associated node, with all edges among them.
fn build_g1(g: &PropertyGraph, tweets: &BTreeSet<NodeId>) -> Result<PropertyGraph> {
    let mut nodes = tweets.clone();
    for t in tweets {
        nodes.extend(associated_nodes(g, t)?);
    }
    g.induced_subgraph(&nodes)
}

/// G2: the mention network over the group's tweets and users (mentions and
/// authors edges only), relaxed by re-attaching the tweets' hashtags and
/// urls. Its node set is always a subset of G1's.
fn build_g2(g: &PropertyGraph, tweets: &BTreeSet<NodeId>) -> Result<PropertyGraph> {
    let mut nodes = tweets.clone();
    for t in tweets {
        nodes.extend(g.neighbors(t, Some(AUTHORS), Direction::In)?);
        nodes.extend(g.neighbors(t, Some(MENTIONS), Direction::Out)?);
    }
    for t in tweets {
        nodes.extend(g.neighbors(t, Some(USES), Direction::Out)?);
        nodes.extend(g.neighbors(t, Some(CONTAINS), Direction::Out)?);
    }
    g.filtered_subgraph(&nodes, |_, edge| match edge.label.as_str() {
        MENTIONS | AUTHORS => true,
        USES | CONTAINS => tweets.contains(&edge.source),
        _ => false,
    })
}

/// G3: the G1 graph expanded by the 1-hop neighborhood (within the
/// background graph) of its mentioned users and hashtags, repeated up to
/// `hop_budget` rounds.
fn build_g3(g: &PropertyGraph, tweets: &BTreeSet<NodeId>, hop_budget: usize) -> Result<PropertyGraph> {
    let base = build_g1(g, tweets)?;
    let mut nodes: BTreeSet<NodeId> = base.node_ids().cloned().collect();
    let mut expanded: BTreeSet<NodeId> = BTreeSet::new();
    for _ in 0..hop_budget {
        let mut frontier = BTreeSet::new();
        for id in &nodes {
            if expanded.contains(id) {
                continue;
            }
            match g.node(id).map(|n| n.label.as_str()) {
                Some(HASHTAG) => {
                    frontier.insert(id.clone());
                }
                Some(USER) => {
                    // only users mentioned by a tweet inside the candidate
                    let mentioned_by = g.neighbors(id, Some(MENTIONS), Direction::In)?;
                    if mentioned_by.iter().any(|t| nodes.contains(t)) {
                        frontier.insert(id.clone());
                    }
                }
                _ => {}
            }
        }
        if frontier.is_empty() {
            break;
        }
        for f in &frontier {
            nodes.extend(g.neighbors(f, None, Direction::Both)?);
            expanded.insert(f.clone());
        }
    }
    g.induced_subgraph(&nodes)
}

/// Why a candidate was dropped during filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DropReason {
    #[serde(rename = "size")]
    TooSmall { nodes: usize, theta: usize },
    #[serde(rename = "node predicate")]
    NodePredicate { property: String },
    #[serde(rename = "edge predicate")]
    EdgePredicate { property: String },
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DropReason::TooSmall { nodes, theta } => {
                write!(f, "size {nodes} below threshold {theta}")
            }
            DropReason::NodePredicate { property } => write!(f, "node predicate on {property}"),
            DropReason::EdgePredicate { property } => write!(f, "edge predicate on {property}"),
        }
    }
}

/// C1/C2 filtering with drop reasons: each candidate is reduced to its
/// largest connected component, then checked against the size threshold and
/// the node/edge predicates.
pub fn filter_candidates_detailed(
    candidates: Vec<CandidateSubgraph>,
    theta_n: usize,
    predicates: &PredicateSpec,
) -> (Vec<CandidateSubgraph>, Vec<(String, DropReason)>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    'next: for mut candidate in candidates {
        if !candidate.graph.is_connected() {
            candidate.graph = candidate.graph.largest_component();
            candidate.corpus = candidate
                .graph
                .nodes_with_label(TWEET)
                .filter_map(|id| candidate.graph.node(id))
                .filter_map(|n| n.props.get("text").and_then(PropValue::as_str))
                .map(str::to_owned)
                .collect();
        }
        let nodes = candidate.graph.node_count();
        if nodes < theta_n {
            dropped.push((
                candidate.id.clone(),
                DropReason::TooSmall {
                    nodes,
                    theta: theta_n,
                },
            ));
            continue;
        }
        for pred in &predicates.nodes {
            for (_, node) in candidate.graph.nodes() {
                if node.label == pred.label && !pred.holds(&node.props) {
                    dropped.push((
                        candidate.id.clone(),
                        DropReason::NodePredicate {
                            property: pred.property.clone(),
                        },
                    ));
                    continue 'next;
                }
            }
        }
        for pred in &predicates.edges {
            for (_, edge) in candidate.graph.edges() {
                if edge.label == pred.label && !pred.holds(&edge.props) {
                    dropped.push((
                        candidate.id.clone(),
                        DropReason::EdgePredicate {
                            property: pred.property.clone(),
                        },
                    ));
                    continue 'next;
                }
            }
        }
        kept.push(candidate);
    }
    for (id, reason) in &dropped {
        log::info!("dropped candidate {id}: {reason}");
    }
    (kept, dropped)
}

/// C1/C2 filtering; drop reasons go to the log.
pub fn filter_candidates(
    candidates: Vec<CandidateSubgraph>,
    theta_n: usize,
    predicates: &PredicateSpec,
) -> Vec<CandidateSubgraph> {
    filter_candidates_detailed(candidates, theta_n, predicates).0
}
