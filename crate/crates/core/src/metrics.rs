//! Per-node and per-edge network metrics plus the vocabulary-diversity
//! measure.
//!
//! All structural metrics run on the undirected projection of the stored
//! directed graph: reciprocal and parallel edges collapse to one undirected
//! edge, self-loops are dropped, and edges count as unit length.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::candidate::CandidateSubgraph;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, PropertyGraph};
use crate::linalg::symmetric_eigen;
use crate::scalar::{cast, cast_usize, Real};

/// Above this node count subgraph centrality falls back to the truncated
/// matrix-power series instead of a dense eigendecomposition.
const DENSE_EIGEN_MAX: usize = 2000;
/// Truncation order of the fallback series.
const SERIES_ORDER: usize = 30;

const POWER_ITER_MAX: usize = 1000;
/// Diagonal shift damping bipartite oscillation in power iteration.
const POWER_SHIFT: f64 = 0.1;

/// The six structural metrics of a bundle, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Eigenvector centrality (node).
    Ev,
    /// Edge betweenness (edge).
    Ec,
    /// Node betweenness (node).
    Nc,
    /// Subgraph centrality (node).
    Sc,
    /// Average neighbor degree (node).
    Z,
    /// Core number (node).
    Mu,
}

impl MetricKind {
    pub const ALL: [MetricKind; 6] = [
        MetricKind::Ev,
        MetricKind::Ec,
        MetricKind::Nc,
        MetricKind::Sc,
        MetricKind::Z,
        MetricKind::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Ev => "ev",
            MetricKind::Ec => "ec",
            MetricKind::Nc => "nc",
            MetricKind::Sc => "sc",
            MetricKind::Z => "z",
            MetricKind::Mu => "mu",
        }
    }
}

/// All metric values for one graph, keyed by node (or edge) id.
#[derive(Debug, Clone, Serialize)]
pub struct MetricBundle<T> {
    pub ev: BTreeMap<NodeId, T>,
    pub ec: BTreeMap<EdgeId, T>,
    pub nc: BTreeMap<NodeId, T>,
    pub sc: BTreeMap<NodeId, T>,
    pub z: BTreeMap<NodeId, T>,
    pub mu: BTreeMap<NodeId, u32>,
    pub diversity: T,
}

impl<T: Real> MetricBundle<T> {
    /// The metric's raw value vector, in id order. Core numbers are lifted
    /// into the scalar type so every metric can be histogrammed uniformly.
    pub fn values(&self, kind: MetricKind) -> Vec<T> {
        match kind {
            MetricKind::Ev => self.ev.values().copied().collect(),
            MetricKind::Ec => self.ec.values().copied().collect(),
            MetricKind::Nc => self.nc.values().copied().collect(),
            MetricKind::Sc => self.sc.values().copied().collect(),
            MetricKind::Z => self.z.values().copied().collect(),
            MetricKind::Mu => self.mu.values().map(|&m| cast_usize(m as usize)).collect(),
        }
    }
}

/// Undirected, simple projection of a property graph with dense indices.
pub struct UndirectedView {
    ids: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    pairs: Vec<(usize, usize)>,
}

impl UndirectedView {
    pub fn new(g: &PropertyGraph) -> Self {
        let ids: Vec<NodeId> = g.node_ids().cloned().collect();
        let index: BTreeMap<&NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let mut pair_set = std::collections::BTreeSet::new();
        for (_, edge) in g.edges() {
            let a = index[&edge.source];
            let b = index[&edge.target];
            if a != b {
                pair_set.insert((a.min(b), a.max(b)));
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in &pair_set {
            adj[a].push(b);
            adj[b].push(a);
        }
        UndirectedView {
            ids,
            adj,
            pairs: pair_set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn id(&self, i: usize) -> &NodeId {
        &self.ids[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    fn is_connected(&self) -> bool {
        if self.ids.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.len()
    }
}

/// Principal eigenvector of the undirected adjacency matrix, Euclidean norm
/// one, via shifted power iteration. A single node maps to 1.0 by
/// convention; a disconnected graph is an error.
pub fn eigenvector_centrality<T: Real>(g: &PropertyGraph) -> Result<BTreeMap<NodeId, T>> {
    let view = UndirectedView::new(g);
    eigenvector_on_view(&view)
}

fn eigenvector_on_view<T: Real>(view: &UndirectedView) -> Result<BTreeMap<NodeId, T>> {
    let n = view.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !view.is_connected() {
        return Err(Error::Disconnected);
    }
    if n == 1 {
        return Ok([(view.id(0).clone(), T::one())].into_iter().collect());
    }
    let shift = cast::<T>(POWER_SHIFT);
    let tol = cast::<T>(1e-10).max(T::epsilon() * cast(4.0));
    let mut x = vec![T::one() / cast_usize::<T>(n).sqrt(); n];
    let mut y = vec![T::zero(); n];
    for _ in 0..POWER_ITER_MAX {
        for i in 0..n {
            let mut acc = shift * x[i];
            for &j in view.neighbors(i) {
                acc += x[j];
            }
            y[i] = acc;
        }
        let norm = y.iter().map(|v| *v * *v).sum::<T>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
        let delta = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum::<T>()
            .sqrt();
        std::mem::swap(&mut x, &mut y);
        if delta <= tol {
            break;
        }
    }
    Ok(view
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), x[i]))
        .collect())
}

/// Shared Brandes pass producing node and edge betweenness over unordered
/// pairs: node scores exclude endpoints, edge scores include them.
fn brandes<T: Real>(view: &UndirectedView) -> (Vec<T>, BTreeMap<(usize, usize), T>) {
    let n = view.len();
    let mut node_score = vec![T::zero(); n];
    let mut edge_score: BTreeMap<(usize, usize), T> = view
        .edge_pairs()
        .iter()
        .map(|&p| (p, T::zero()))
        .collect();

    let mut dist = vec![-1i64; n];
    let mut sigma = vec![T::zero(); n];
    let mut delta = vec![T::zero(); n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in 0..n {
        for v in 0..n {
            dist[v] = -1;
            sigma[v] = T::zero();
            delta[v] = T::zero();
            preds[v].clear();
        }
        order.clear();
        dist[s] = 0;
        sigma[s] = T::one();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in view.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    let sv = sigma[v];
                    sigma[w] += sv;
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                let c = sigma[v] / sigma[w] * (T::one() + delta[w]);
                *edge_score
                    .get_mut(&(v.min(w), v.max(w)))
                    .expect("projected edge") += c;
                delta[v] += c;
            }
            if w != s {
                node_score[w] += delta[w];
            }
        }
    }

    let half = cast::<T>(0.5);
    for v in node_score.iter_mut() {
        *v *= half;
    }
    for v in edge_score.values_mut() {
        *v *= half;
    }
    (node_score, edge_score)
}

fn check_connected(view: &UndirectedView) -> Result<()> {
    if view.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !view.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Fraction of all-pairs shortest paths passing through each edge, summed
/// over unordered node pairs.
pub fn edge_betweenness<T: Real>(g: &PropertyGraph) -> Result<BTreeMap<EdgeId, T>> {
    let view = UndirectedView::new(g);
    check_connected(&view)?;
    let (_, edge_score) = brandes::<T>(&view);
    Ok(edge_scores_by_id(g, &view, &edge_score))
}

/// Assign each stored directed edge the score of its undirected projection.
fn edge_scores_by_id<T: Real>(
    g: &PropertyGraph,
    view: &UndirectedView,
    pair_scores: &BTreeMap<(usize, usize), T>,
) -> BTreeMap<EdgeId, T> {
    let index: BTreeMap<&NodeId, usize> = view
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();
    g.edges()
        .filter_map(|(eid, edge)| {
            let a = index[&edge.source];
            let b = index[&edge.target];
            pair_scores
                .get(&(a.min(b), a.max(b)))
                .map(|&s| (eid, s))
        })
        .collect()
}

/// Fraction of all-pairs shortest paths passing through each node, endpoints
/// excluded, summed over unordered pairs.
pub fn node_betweenness<T: Real>(g: &PropertyGraph) -> Result<BTreeMap<NodeId, T>> {
    let view = UndirectedView::new(g);
    check_connected(&view)?;
    let (node_score, _) = brandes::<T>(&view);
    Ok(view
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), node_score[i]))
        .collect())
}

/// Subgraph centrality: the closed-walk series `sum_k (A^k)_ii / k!`, via
/// the spectral closed form on small graphs and the truncated series above
/// [`DENSE_EIGEN_MAX`] nodes.
pub fn subgraph_centrality<T: Real>(g: &PropertyGraph) -> Result<BTreeMap<NodeId, T>> {
    let view = UndirectedView::new(g);
    if view.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let values = if view.len() <= DENSE_EIGEN_MAX {
        subgraph_centrality_dense(&view)?
    } else {
        subgraph_centrality_series(&view)
    };
    Ok(view
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), values[i]))
        .collect())
}

fn subgraph_centrality_dense<T: Real>(view: &UndirectedView) -> Result<Vec<T>> {
    let n = view.len();
    let mut m = vec![T::zero(); n * n];
    for &(a, b) in view.edge_pairs() {
        m[a * n + b] = T::one();
        m[b * n + a] = T::one();
    }
    let eig = symmetric_eigen(&m, n)?;
    let exps: Vec<T> = eig.values.iter().map(|l| l.exp()).collect();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = eig.component(i, j);
                    c * c * exps[j]
                })
                .sum()
        })
        .collect())
}

fn subgraph_centrality_series<T: Real>(view: &UndirectedView) -> Vec<T> {
    let n = view.len();
    let mut result = vec![T::one(); n]; // k = 0 term
    let mut basis = vec![T::zero(); n];
    let mut next = vec![T::zero(); n];
    for i in 0..n {
        for v in basis.iter_mut() {
            *v = T::zero();
        }
        basis[i] = T::one();
        let mut factorial = T::one();
        for k in 1..=SERIES_ORDER {
            factorial *= cast_usize::<T>(k);
            for (w, slot) in next.iter_mut().enumerate() {
                let mut acc = T::zero();
                for &u in view.neighbors(w) {
                    acc += basis[u];
                }
                *slot = acc;
            }
            std::mem::swap(&mut basis, &mut next);
            result[i] += basis[i] / factorial;
        }
    }
    result
}

/// Mean degree of each node's neighborhood; isolated nodes map to 0.
pub fn average_neighbor_degree<T: Real>(g: &PropertyGraph) -> BTreeMap<NodeId, T> {
    let view = UndirectedView::new(g);
    view.ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let d = view.degree(i);
            let value = if d == 0 {
                T::zero()
            } else {
                view.neighbors(i)
                    .iter()
                    .map(|&j| cast_usize::<T>(view.degree(j)))
                    .sum::<T>()
                    / cast_usize(d)
            };
            (id.clone(), value)
        })
        .collect()
}

/// Core numbers via minimum-degree peeling.
pub fn core_number(g: &PropertyGraph) -> BTreeMap<NodeId, u32> {
    let view = UndirectedView::new(g);
    let n = view.len();
    let mut deg: Vec<usize> = (0..n).map(|i| view.degree(i)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for (i, &d) in deg.iter().enumerate() {
        buckets[d].push(i);
    }
    let mut core = vec![0u32; n];
    let mut removed = vec![false; n];
    let mut level = 0;
    let mut remaining = n;
    while remaining > 0 {
        while level <= max_deg && buckets[level].is_empty() {
            level += 1;
        }
        let Some(v) = buckets[level].pop() else { continue };
        if removed[v] || deg[v] != level {
            continue; // stale bucket entry
        }
        removed[v] = true;
        remaining -= 1;
        core[v] = level as u32;
        for &w in view.neighbors(v) {
            if !removed[w] && deg[w] > level {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
            }
        }
    }
    view.ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), core[i]))
        .collect()
}

/// Type-token ratio of the corpus after lowercasing, splitting on
/// non-alphanumeric boundaries, and dropping stopwords and one-character
/// tokens. Empty or all-stopword corpora map to 0.
pub fn vocabulary_diversity<T: Real>(corpus: &[String], stopwords: &HashSet<String>) -> T {
    let mut total = 0usize;
    let mut distinct = std::collections::BTreeSet::new();
    for text in corpus {
        for token in tokenize(text) {
            if stopwords.contains(&token) {
                continue;
            }
            total += 1;
            distinct.insert(token);
        }
    }
    if total == 0 {
        T::zero()
    } else {
        cast_usize::<T>(distinct.len()) / cast_usize(total)
    }
}

/// Lowercased alphanumeric tokens of length >= 2.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(|t| t.to_lowercase())
}

/// Structural metrics of one graph, with diversity left at zero. Requires a
/// connected, non-empty graph.
pub fn network_bundle<T: Real>(g: &PropertyGraph) -> Result<MetricBundle<T>> {
    let view = UndirectedView::new(g);
    check_connected(&view)?;
    let ev = eigenvector_on_view(&view)?;
    let (node_score, edge_pairs) = brandes::<T>(&view);
    let ec = edge_scores_by_id(g, &view, &edge_pairs);
    let nc = view
        .ids
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), node_score[i]))
        .collect();
    let sc = subgraph_centrality(g)?;
    let z = average_neighbor_degree(g);
    let mu = core_number(g);
    Ok(MetricBundle {
        ev,
        ec,
        nc,
        sc,
        z,
        mu,
        diversity: T::zero(),
    })
}

/// Full bundle for a candidate: the six structural metrics plus the
/// vocabulary diversity of its text corpus.
pub fn compute_metrics<T: Real>(
    c: &CandidateSubgraph,
    stopwords: &HashSet<String>,
) -> Result<MetricBundle<T>> {
    let mut bundle = network_bundle(&c.graph)?;
    bundle.diversity = vocabulary_diversity(&c.corpus, stopwords);
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    fn graph(n: usize, edges: &[(usize, usize)]) -> PropertyGraph {
        let mut g = PropertyGraph::new();
        for i in 0..n {
            g.add_node(NodeId::new(format!("n{i}")), "node");
        }
        for &(a, b) in edges {
            g.add_edge(
                NodeId::new(format!("n{a}")),
                NodeId::new(format!("n{b}")),
                "link",
            )
            .unwrap();
        }
        g
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn eigenvector_triangle_uniform() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let ev = eigenvector_centrality::<f64>(&g).unwrap();
        let want = 1.0 / 3.0f64.sqrt();
        for v in ev.values() {
            assert!(close(*v, want, 1e-9), "{v}");
        }
    }

    #[test]
    fn eigenvector_single_node_convention() {
        let g = graph(1, &[]);
        let ev = eigenvector_centrality::<f64>(&g).unwrap();
        assert_eq!(ev[&NodeId::new("n0")], 1.0);
    }

    #[test]
    fn eigenvector_path3() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let ev = eigenvector_centrality::<f64>(&g).unwrap();
        assert!(close(ev[&NodeId::new("n0")], 0.5, 1e-8));
        assert!(close(ev[&NodeId::new("n1")], 1.0 / 2.0f64.sqrt(), 1e-8));
        assert!(close(ev[&NodeId::new("n2")], 0.5, 1e-8));
    }

    #[test]
    fn eigenvector_disconnected_errors() {
        let g = graph(4, &[(0, 1)]);
        assert!(matches!(
            eigenvector_centrality::<f64>(&g),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn edge_betweenness_k2_and_path() {
        let g = graph(2, &[(0, 1)]);
        let eb = edge_betweenness::<f64>(&g).unwrap();
        assert!(close(*eb.values().next().unwrap(), 1.0, 1e-12));

        let g = graph(3, &[(0, 1), (1, 2)]);
        let eb = edge_betweenness::<f64>(&g).unwrap();
        for v in eb.values() {
            assert!(close(*v, 2.0, 1e-12));
        }
    }

    #[test]
    fn edge_betweenness_triangle() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let eb = edge_betweenness::<f64>(&g).unwrap();
        for v in eb.values() {
            assert!(close(*v, 1.0, 1e-12));
        }
    }

    #[test]
    fn node_betweenness_examples() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        for v in node_betweenness::<f64>(&g).unwrap().values() {
            assert!(close(*v, 0.0, 1e-12));
        }

        let g = graph(3, &[(0, 1), (1, 2)]);
        let nb = node_betweenness::<f64>(&g).unwrap();
        assert!(close(nb[&NodeId::new("n1")], 1.0, 1e-12));
        assert!(close(nb[&NodeId::new("n0")], 0.0, 1e-12));

        // star with 3 leaves
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let nb = node_betweenness::<f64>(&g).unwrap();
        assert!(close(nb[&NodeId::new("n0")], 3.0, 1e-12));
    }

    #[test]
    fn subgraph_centrality_known_values() {
        let g = graph(1, &[]);
        let sc = subgraph_centrality::<f64>(&g).unwrap();
        assert!(close(sc[&NodeId::new("n0")], 1.0, 1e-12));

        let g = graph(2, &[(0, 1)]);
        let sc = subgraph_centrality::<f64>(&g).unwrap();
        let want = 1.0f64.cosh(); // (e + 1/e) / 2
        for v in sc.values() {
            assert!(close(*v, want, 1e-9), "{v}");
        }

        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let sc = subgraph_centrality::<f64>(&g).unwrap();
        let want = (2.0f64.exp() + 2.0 * (-1.0f64).exp()) / 3.0;
        for v in sc.values() {
            assert!(close(*v, want, 1e-9), "{v}");
        }
    }

    #[test]
    fn subgraph_centrality_series_matches_dense() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]);
        let view = UndirectedView::new(&g);
        let dense = subgraph_centrality_dense::<f64>(&view).unwrap();
        let series = subgraph_centrality_series::<f64>(&view);
        for (a, b) in dense.iter().zip(&series) {
            assert!(close(*a, *b, 1e-9), "{a} vs {b}");
        }
    }

    #[test]
    fn average_neighbor_degree_examples() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        for v in average_neighbor_degree::<f64>(&g).values() {
            assert!(close(*v, 2.0, 1e-12));
        }

        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let z = average_neighbor_degree::<f64>(&g);
        assert!(close(z[&NodeId::new("n0")], 1.0, 1e-12));
        assert!(close(z[&NodeId::new("n1")], 3.0, 1e-12));

        let g = graph(3, &[(0, 1), (1, 2)]);
        let z = average_neighbor_degree::<f64>(&g);
        assert!(close(z[&NodeId::new("n0")], 2.0, 1e-12));
        assert!(close(z[&NodeId::new("n1")], 1.0, 1e-12));
        assert!(close(z[&NodeId::new("n2")], 2.0, 1e-12));
    }

    #[test]
    fn core_number_examples() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(core_number(&g).values().all(|&c| c == 2));

        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert!(core_number(&g).values().all(|&c| c == 1));

        // K4 plus pendant
        let g = graph(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
        );
        let mu = core_number(&g);
        for i in 0..4 {
            assert_eq!(mu[&NodeId::new(format!("n{i}"))], 3);
        }
        assert_eq!(mu[&NodeId::new("n4")], 1);
    }

    #[test]
    fn diversity_examples() {
        let stop = HashSet::new();
        let corpus = vec!["alpha beta".to_string(), "gamma delta".to_string()];
        assert_eq!(vocabulary_diversity::<f64>(&corpus, &stop), 1.0);

        let corpus = vec!["alpha alpha alpha alpha".to_string()];
        assert_eq!(vocabulary_diversity::<f64>(&corpus, &stop), 0.25);

        assert_eq!(vocabulary_diversity::<f64>(&[], &stop), 0.0);
    }

    #[test]
    fn diversity_drops_stopwords_and_short_tokens() {
        let stop: HashSet<String> = ["the".to_string()].into_iter().collect();
        let corpus = vec!["the a quick quick fox".to_string()];
        // tokens kept: quick, quick, fox
        assert!(close(
            vocabulary_diversity::<f64>(&corpus, &stop),
            2.0 / 3.0,
            1e-12
        ));
    }

    #[test]
    fn compute_metrics_composes_components() {
        use crate::candidate::{CandidateSubgraph, ConstructionKind};
        let candidate = |g: PropertyGraph, corpus: Vec<String>| CandidateSubgraph {
            id: "c".into(),
            graph: g,
            group_key: Default::default(),
            rule: ConstructionKind::G1,
            corpus,
        };
        let stop = HashSet::new();

        let k3 = candidate(graph(3, &[(0, 1), (1, 2), (2, 0)]), vec![]);
        let bundle = compute_metrics::<f64>(&k3, &stop).unwrap();
        let want = 1.0 / 3.0f64.sqrt();
        assert!(bundle.ev.values().all(|v| close(*v, want, 1e-9)));
        assert!(bundle.nc.values().all(|v| close(*v, 0.0, 1e-12)));
        assert!(bundle.mu.values().all(|&m| m == 2));
        assert_eq!(bundle.diversity, 0.0);

        let k2 = candidate(graph(2, &[(0, 1)]), vec!["alpha beta".into()]);
        let bundle = compute_metrics::<f64>(&k2, &stop).unwrap();
        assert!(bundle.sc.values().all(|v| close(*v, 1.0f64.cosh(), 1e-9)));
        assert_eq!(bundle.diversity, 1.0);

        let split = candidate(graph(4, &[(0, 1)]), vec![]);
        assert!(matches!(
            compute_metrics::<f64>(&split, &stop),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5)]);
        let view = UndirectedView::new(&g);
        let total: usize = (0..view.len()).map(|i| view.degree(i)).sum();
        assert_eq!(total, 2 * view.edge_pairs().len());
    }

    #[test]
    fn reciprocal_edges_project_once() {
        let mut g = graph(2, &[(0, 1)]);
        g.add_edge(NodeId::new("n1"), NodeId::new("n0"), "link").unwrap();
        assert_eq!(g.edge_count(), 2);
        let view = UndirectedView::new(&g);
        assert_eq!(view.edge_pairs().len(), 1);
        // both directed edges carry the projected betweenness value
        let eb = edge_betweenness::<f64>(&g).unwrap();
        assert_eq!(eb.len(), 2);
        assert!(eb.values().all(|&v| close(v, 1.0, 1e-12)));
    }
}
