//! The two small textual languages used by the pipeline: grouping patterns
//! (`(:tweet{date})-[:uses]->(:hashtag{text})`) and edge-construction rules
//! (`(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)`).
//!
//! Parsing is total: any input yields a structure or a positioned error.
//! Offsets in errors are character indices into the original string.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Direction, NodeId, PropertyGraph};

/// One side of a grouping pattern: node label plus grouping property keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSide {
    pub label: String,
    pub keys: Vec<String>,
}

/// Grouping pattern: single node, or two nodes joined by one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPattern {
    pub left: GroupSide,
    pub edge: Option<String>,
    pub right: Option<GroupSide>,
}

impl GroupPattern {
    /// All grouping keys, left side first.
    pub fn key_count(&self) -> usize {
        self.left.keys.len() + self.right.as_ref().map_or(0, |r| r.keys.len())
    }
}

impl fmt::Display for GroupPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &GroupSide| {
            if s.keys.is_empty() {
                format!("(:{})", s.label)
            } else {
                format!("(:{}{{{}}})", s.label, s.keys.join(","))
            }
        };
        write!(f, "{}", side(&self.left))?;
        if let (Some(edge), Some(right)) = (&self.edge, &self.right) {
            write!(f, "-[:{}]->{}", edge, side(right))?;
        }
        Ok(())
    }
}

/// Node occurrence in a construction rule: optional variable, optional label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePattern {
    pub var: Option<String>,
    pub label: Option<String>,
}

impl fmt::Display for NodePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if let Some(v) = &self.var {
            write!(f, "{v}")?;
        }
        if let Some(l) = &self.label {
            write!(f, ":{l}")?;
        }
        write!(f, ")")
    }
}

/// One hop of a body path: the edge traversed and the node reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub edge: String,
    /// `true` when the edge is traversed against its direction (`<-[..]-`).
    pub reversed: bool,
    pub node: NodePattern,
}

/// Edge-construction rule: the head edge is derived for every binding of the
/// linear body path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionRule {
    pub head_source: NodePattern,
    pub head_edge: String,
    pub head_target: NodePattern,
    pub body_start: NodePattern,
    pub body_steps: Vec<PathStep>,
}

impl fmt::Display for ConstructionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-[:{}]->{} if {}",
            self.head_source, self.head_edge, self.head_target, self.body_start
        )?;
        for step in &self.body_steps {
            if step.reversed {
                write!(f, "<-[:{}]-{}", step.edge, step.node)?;
            } else {
                write!(f, "-[:{}]->{}", step.edge, step.node)?;
            }
        }
        Ok(())
    }
}

/// A derived edge produced by rule application; parallel bindings collapse
/// into `weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub label: String,
    pub weight: u64,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            text,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, expected: char) -> Result<()> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(&c) if c == expected => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected '{expected}'"))),
        }
    }

    fn eat_if(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Consume a literal word like `if` at a word boundary.
    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let end = self.pos + word.len();
        if end <= self.chars.len()
            && self.chars[self.pos..end].iter().collect::<String>() == word
            && self.chars.get(end).is_none_or(|c| !is_ident(*c))
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident(self.chars[self.pos]) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn err(&self, reason: String) -> Error {
        Error::PatternSyntax {
            offset: self.pos.min(self.chars.len()),
            reason: format!("{reason} in {:?}", self.text),
        }
    }
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Parse `(:label{key,key})`; the brace section is optional.
fn parse_group_side(cur: &mut Cursor) -> Result<GroupSide> {
    cur.eat('(')?;
    cur.eat(':')?;
    let label = cur.ident("node label")?;
    let mut keys = Vec::new();
    if cur.eat_if('{') {
        loop {
            keys.push(cur.ident("property key")?);
            if !cur.eat_if(',') {
                break;
            }
        }
        cur.eat('}')?;
    }
    cur.eat(')')?;
    Ok(GroupSide { label, keys })
}

/// Parse `-[:label]->` or `<-[:label]-`; returns (label, reversed).
fn parse_edge(cur: &mut Cursor) -> Result<(String, bool)> {
    let reversed = cur.eat_if('<');
    cur.eat('-')?;
    cur.eat('[')?;
    cur.eat_if(':'); // tolerate `[label]`
    let label = cur.ident("edge label")?;
    cur.eat(']')?;
    cur.eat('-')?;
    if !reversed {
        cur.eat('>')?;
    }
    Ok((label, reversed))
}

pub fn parse_group_pattern(text: &str) -> Result<GroupPattern> {
    let mut cur = Cursor::new(text);
    let left = parse_group_side(&mut cur)?;
    let mut pattern = GroupPattern {
        left,
        edge: None,
        right: None,
    };
    if !cur.at_end() {
        let (label, reversed) = parse_edge(&mut cur)?;
        let other = parse_group_side(&mut cur)?;
        if reversed {
            // canonicalize so `left -edge-> right` always holds
            pattern.right = Some(std::mem::replace(&mut pattern.left, other));
        } else {
            pattern.right = Some(other);
        }
        pattern.edge = Some(label);
        if !cur.at_end() {
            return Err(cur.err("trailing input after pattern".into()));
        }
    }
    if pattern.key_count() == 0 {
        return Err(cur.err("pattern needs at least one grouping key".into()));
    }
    Ok(pattern)
}

/// Parse `(var:label)` where both parts are optional.
fn parse_node_pattern(cur: &mut Cursor) -> Result<NodePattern> {
    cur.eat('(')?;
    let mut var = None;
    let mut label = None;
    if cur.peek().is_some_and(is_ident) {
        var = Some(cur.ident("variable")?);
    }
    if cur.eat_if(':') {
        label = Some(cur.ident("node label")?);
    }
    cur.eat(')')?;
    Ok(NodePattern { var, label })
}

pub fn parse_construction_rule(text: &str) -> Result<ConstructionRule> {
    let mut cur = Cursor::new(text);
    let head_source = parse_node_pattern(&mut cur)?;
    let (head_edge, head_rev) = parse_edge(&mut cur)?;
    let head_target = parse_node_pattern(&mut cur)?;
    let (head_source, head_target) = if head_rev {
        (head_target, head_source)
    } else {
        (head_source, head_target)
    };
    if !cur.eat_word("if") {
        return Err(cur.err("expected 'if'".into()));
    }
    let body_start = parse_node_pattern(&mut cur)?;
    let mut body_steps = Vec::new();
    loop {
        let (edge, reversed) = parse_edge(&mut cur)?;
        let node = parse_node_pattern(&mut cur)?;
        body_steps.push(PathStep {
            edge,
            reversed,
            node,
        });
        if cur.at_end() {
            break;
        }
    }
    let rule = ConstructionRule {
        head_source,
        head_edge,
        head_target,
        body_start,
        body_steps,
    };
    for var in [&rule.head_source.var, &rule.head_target.var] {
        let var = var
            .as_ref()
            .ok_or_else(|| cur.err("head endpoints need variables".into()))?;
        let bound = std::iter::once(&rule.body_start)
            .chain(rule.body_steps.iter().map(|s| &s.node))
            .any(|n| n.var.as_deref() == Some(var.as_str()));
        if !bound {
            return Err(Error::UnboundVariable(var.clone()));
        }
    }
    Ok(rule)
}

/// Parse a rule file: one rule per line, `#` starts a comment.
pub fn parse_rule_file(text: &str) -> Result<Vec<ConstructionRule>> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let rule = parse_construction_rule(line).map_err(|e| Error::MalformedRecord {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        rules.push(rule);
    }
    Ok(rules)
}

fn node_matches(g: &PropertyGraph, id: &NodeId, pattern: &NodePattern) -> bool {
    match &pattern.label {
        Some(label) => g.node(id).is_some_and(|n| &n.label == label),
        None => true,
    }
}

/// Evaluate a construction rule over the graph: one derived head edge per
/// homomorphic binding of the body path, with duplicate (source, target)
/// pairs collapsed into a multiplicity weight. Head endpoints must bind
/// distinct nodes.
pub fn apply_rule(g: &PropertyGraph, rule: &ConstructionRule) -> Vec<DerivedEdge> {
    for node in std::iter::once(&rule.body_start).chain(rule.body_steps.iter().map(|s| &s.node)) {
        if let Some(label) = &node.label {
            if !g.has_node_label(label) {
                log::warn!("rule references node label {label:?} absent from graph");
                return Vec::new();
            }
        }
    }
    for step in &rule.body_steps {
        if !g.has_edge_label(&step.edge) {
            log::warn!("rule references edge label {:?} absent from graph", step.edge);
            return Vec::new();
        }
    }

    let mut derived: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    let src_var = rule.head_source.var.as_deref().expect("validated head var");
    let dst_var = rule.head_target.var.as_deref().expect("validated head var");

    let starts: Vec<NodeId> = g
        .node_ids()
        .filter(|id| node_matches(g, id, &rule.body_start))
        .cloned()
        .collect();
    for start in starts {
        let mut binding: Vec<NodeId> = vec![start];
        walk(g, rule, &mut binding, 0, src_var, dst_var, &mut derived);
    }

    derived
        .into_iter()
        .map(|((source, target), weight)| DerivedEdge {
            source,
            target,
            label: rule.head_edge.clone(),
            weight,
        })
        .collect()
}

fn var_of(rule: &ConstructionRule, position: usize) -> Option<&str> {
    if position == 0 {
        rule.body_start.var.as_deref()
    } else {
        rule.body_steps[position - 1].node.var.as_deref()
    }
}

fn lookup_var(rule: &ConstructionRule, binding: &[NodeId], var: &str) -> Option<NodeId> {
    (0..binding.len())
        .find(|&i| var_of(rule, i) == Some(var))
        .map(|i| binding[i].clone())
}

fn walk(
    g: &PropertyGraph,
    rule: &ConstructionRule,
    binding: &mut Vec<NodeId>,
    step_idx: usize,
    src_var: &str,
    dst_var: &str,
    derived: &mut BTreeMap<(NodeId, NodeId), u64>,
) {
    if step_idx == rule.body_steps.len() {
        let (Some(source), Some(target)) = (
            lookup_var(rule, binding, src_var),
            lookup_var(rule, binding, dst_var),
        ) else {
            return;
        };
        if source != target {
            *derived.entry((source, target)).or_insert(0) += 1;
        }
        return;
    }
    let step = &rule.body_steps[step_idx];
    let here = binding.last().expect("non-empty binding").clone();
    let direction = if step.reversed { Direction::In } else { Direction::Out };
    let nexts = g
        .neighbors(&here, Some(&step.edge), direction)
        .expect("bound node exists");
    for next in nexts {
        if !node_matches(g, &next, &step.node) {
            continue;
        }
        // homomorphic semantics, but a repeated variable must rebind the
        // same node
        if let Some(var) = step.node.var.as_deref() {
            if let Some(prev) = lookup_var(rule, binding, var) {
                if prev != next {
                    continue;
                }
            }
        }
        binding.push(next);
        walk(g, rule, binding, step_idx + 1, src_var, dst_var, derived);
        binding.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PropertyGraph;
    use crate::ingest::{ingest_tweets, TweetRecord};

    fn tweet(id: &str, author: &str, mentions: &[&str]) -> TweetRecord {
        TweetRecord {
            id: id.into(),
            author: author.into(),
            text: String::new(),
            created_at: "2026-02-01".into(),
            hashtags: vec![],
            mentions: mentions.iter().map(|m| m.to_string()).collect(),
            urls: vec![],
            popularity: 0,
            author_followers: 0,
        }
    }

    #[test]
    fn parses_two_node_pattern() {
        let p = parse_group_pattern("(:tweet{date})-[:uses]->(:hashtag{text})").unwrap();
        assert_eq!(p.left.label, "tweet");
        assert_eq!(p.left.keys, vec!["date"]);
        assert_eq!(p.edge.as_deref(), Some("uses"));
        let right = p.right.unwrap();
        assert_eq!(right.label, "hashtag");
        assert_eq!(right.keys, vec!["text"]);
    }

    #[test]
    fn parses_single_node_pattern() {
        let p = parse_group_pattern("(:tweet{popularity})").unwrap();
        assert_eq!(p.left.label, "tweet");
        assert_eq!(p.left.keys, vec!["popularity"]);
        assert!(p.edge.is_none());
        assert!(p.right.is_none());
        // round-trip through the printer
        let again = parse_group_pattern(&p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn syntax_error_carries_offset() {
        let err = parse_group_pattern("(:tweet{)").unwrap_err();
        match err {
            Error::PatternSyntax { offset, .. } => assert_eq!(offset, 8),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn pattern_whitespace_insensitive() {
        let a = parse_group_pattern("(:tweet{date})-[:uses]->(:hashtag{text})").unwrap();
        let b = parse_group_pattern(" ( :tweet { date } ) - [ :uses ] -> ( :hashtag { text } ) ")
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_mention_view_rule() {
        let r = parse_construction_rule(
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)",
        )
        .unwrap();
        assert_eq!(r.head_source.var.as_deref(), Some("a"));
        assert_eq!(r.head_edge, "mentions");
        assert_eq!(r.head_target.var.as_deref(), Some("b"));
        assert_eq!(r.body_steps.len(), 2);
        assert_eq!(r.body_steps[0].edge, "authors");
    }

    #[test]
    fn unbound_head_variable_rejected() {
        let err = parse_construction_rule(
            "(a:user)-[:knows]->(c:user) if (a)-[:authors]->(t:tweet)",
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnboundVariable(v) if v == "c"));
    }

    #[test]
    fn rule_round_trip() {
        let text =
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)";
        let r1 = parse_construction_rule(text).unwrap();
        let r2 = parse_construction_rule(&r1.to_string()).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn apply_rule_on_empty_graph_is_empty() {
        let rule = parse_construction_rule(
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)",
        )
        .unwrap();
        assert!(apply_rule(&PropertyGraph::new(), &rule).is_empty());
    }

    #[test]
    fn apply_rule_enumerates_bindings() {
        let g = ingest_tweets(&[tweet("1", "a", &["b", "c"])]).unwrap();
        let rule = parse_construction_rule(
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)",
        )
        .unwrap();
        let edges = apply_rule(&g, &rule);
        assert_eq!(edges.len(), 2);
        let targets: Vec<_> = edges.iter().map(|e| e.target.as_str()).collect();
        assert_eq!(targets, vec!["user:b", "user:c"]);
        assert!(edges.iter().all(|e| e.source.as_str() == "user:a" && e.weight == 1));
    }

    #[test]
    fn apply_rule_collapses_multiplicity() {
        let g = ingest_tweets(&[tweet("1", "a", &["b"]), tweet("2", "a", &["b"])]).unwrap();
        let rule = parse_construction_rule(
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)",
        )
        .unwrap();
        let edges = apply_rule(&g, &rule);
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].weight, 2);
    }

    #[test]
    fn apply_rule_skips_self_mentions() {
        // author mentions themselves: head endpoints must be distinct
        let g = ingest_tweets(&[tweet("1", "a", &["a"])]).unwrap();
        let rule = parse_construction_rule(
            "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)",
        )
        .unwrap();
        assert!(apply_rule(&g, &rule).is_empty());
    }

    #[test]
    fn rule_file_skips_comments() {
        let rules = parse_rule_file(
            "# mention view\n(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)\n\n",
        )
        .unwrap();
        assert_eq!(rules.len(), 1);
    }
}
