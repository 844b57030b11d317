//! Shared test support: independent brute-force oracles and random graph
//! generators. The oracles deliberately avoid the library's algorithm paths:
//! betweenness is counted path-by-path in exact rational arithmetic and
//! subgraph centrality comes from explicit matrix powers.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;

use sgmine::graph::{NodeId, PropertyGraph};

pub type Adjacency = Vec<Vec<usize>>;

/// Random connected simple graph on `n` nodes: a random spanning tree plus
/// extra edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, extra_edge_prob: f64) -> Adjacency {
    let mut adj = vec![Vec::new(); n];
    let connect = |adj: &mut Adjacency, a: usize, b: usize| {
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    };
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        connect(&mut adj, i, parent);
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen::<f64>() < extra_edge_prob {
                connect(&mut adj, a, b);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// Node ids `n0..` sorted lexicographically, so the library's id order
/// matches the adjacency index order (single-digit safe up to n = 10).
pub fn graph_from_adjacency(adj: &Adjacency) -> PropertyGraph {
    assert!(adj.len() <= 10, "id ordering assumes single digits");
    let mut g = PropertyGraph::new();
    for i in 0..adj.len() {
        g.add_node(NodeId::new(format!("n{i}")), "node");
    }
    for (a, list) in adj.iter().enumerate() {
        for &b in list {
            if a < b {
                g.add_edge(
                    NodeId::new(format!("n{a}")),
                    NodeId::new(format!("n{b}")),
                    "link",
                )
                .unwrap();
            }
        }
    }
    g
}

/// All shortest paths between one pair, as node sequences.
fn shortest_paths(adj: &Adjacency, s: usize, t: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist[t] == usize::MAX {
        return Vec::new();
    }
    // walk backwards from t along strictly decreasing distances
    let mut paths = Vec::new();
    let mut stack = vec![vec![t]];
    while let Some(partial) = stack.pop() {
        let head = *partial.last().unwrap();
        if head == s {
            let mut path = partial.clone();
            path.reverse();
            paths.push(path);
            continue;
        }
        for &p in &adj[head] {
            if dist[p] + 1 == dist[head] {
                let mut next = partial.clone();
                next.push(p);
                stack.push(next);
            }
        }
    }
    paths
}

/// Exact betweenness by complete path enumeration over unordered pairs.
/// Returns per-node scores (endpoints excluded) and per-edge scores.
pub fn brute_betweenness(
    adj: &Adjacency,
) -> (Vec<Ratio<i64>>, BTreeMap<(usize, usize), Ratio<i64>>) {
    let n = adj.len();
    let mut node: Vec<Ratio<i64>> = vec![Ratio::from_integer(0); n];
    let mut edge: BTreeMap<(usize, usize), Ratio<i64>> = BTreeMap::new();
    for (a, list) in adj.iter().enumerate() {
        for &b in list {
            if a < b {
                edge.insert((a, b), Ratio::from_integer(0));
            }
        }
    }
    for s in 0..n {
        for t in (s + 1)..n {
            let paths = shortest_paths(adj, s, t);
            if paths.is_empty() {
                continue;
            }
            let share = Ratio::new(1, paths.len() as i64);
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    node[v] += share;
                }
                for pair in path.windows(2) {
                    let key = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                    *edge.get_mut(&key).unwrap() += share;
                }
            }
        }
    }
    (node, edge)
}

/// Subgraph centrality via the truncated series of explicit matrix powers.
pub fn series_subgraph_centrality(adj: &Adjacency, order: usize) -> Vec<f64> {
    let n = adj.len();
    let mut a = vec![0.0f64; n * n];
    for (i, list) in adj.iter().enumerate() {
        for &j in list {
            a[i * n + j] = 1.0;
        }
    }
    let mut power: Vec<f64> = (0..n * n)
        .map(|idx| if idx % (n + 1) == 0 { 1.0 } else { 0.0 })
        .collect();
    let mut result = vec![1.0f64; n]; // k = 0 term
    let mut factorial = 1.0f64;
    for k in 1..=order {
        factorial *= k as f64;
        let mut next = vec![0.0f64; n * n];
        for i in 0..n {
            for l in 0..n {
                let p = power[i * n + l];
                if p != 0.0 {
                    for j in 0..n {
                        next[i * n + j] += p * a[l * n + j];
                    }
                }
            }
        }
        power = next;
        for i in 0..n {
            result[i] += power[i * n + i] / factorial;
        }
    }
    result
}

/// Dense adjacency row of a view-ordered graph, for residual checks.
pub fn adjacency_matrix(adj: &Adjacency) -> Vec<Vec<f64>> {
    let n = adj.len();
    let mut m = vec![vec![0.0; n]; n];
    for (i, list) in adj.iter().enumerate() {
        for &j in list {
            m[i][j] = 1.0;
        }
    }
    m
}
