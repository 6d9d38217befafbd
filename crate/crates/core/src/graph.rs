//! Simple undirected graphs, the BFS metric and rooted balls.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input_err, Error, Result};

/// Graph distance: finite hop count, or infinite across components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite simple undirected graph on the vertices `0..n`.
///
/// Adjacency lists are sorted strictly increasing, symmetric and free of
/// self-loops. The value is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an undirected edge list.
    ///
    /// Edges may be given in either orientation and in any order, but a
    /// self-loop, an out-of-range endpoint or a repeated edge is rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(input_err!("edge ({u}, {v}) has an endpoint outside 0..{n}"));
            }
            if u == v {
                return Err(input_err!("self-loop at vertex {u}"));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for (x, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(input_err!("repeated edge ({x}, {})", w[0]));
            }
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    /// Builds a graph from adjacency lists, checking every structural invariant.
    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Result<Self> {
        let n = adjacency.len();
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        let mut degree_sum = 0;
        for (x, list) in adjacency.iter().enumerate() {
            for (i, &y) in list.iter().enumerate() {
                if y >= n {
                    return Err(input_err!("vertex {x} lists out-of-range neighbor {y}"));
                }
                if y == x {
                    return Err(input_err!("vertex {x} lists itself"));
                }
                if i > 0 && list[i - 1] == y {
                    return Err(input_err!("vertex {x} lists neighbor {y} twice"));
                }
                if adjacency[y].binary_search(&x).is_err() {
                    return Err(input_err!("asymmetric adjacency: {x} -> {y} without {y} -> {x}"));
                }
            }
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.iter().map(Vec::len)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.vertex_count() && self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertex_count() {
            Ok(())
        } else {
            Err(input_err!(
                "vertex {x} out of range for a graph with {} vertices",
                self.vertex_count()
            ))
        }
    }

    /// Rejects graphs with an isolated vertex, on which the lazy walk is undefined.
    pub fn check_no_isolated(&self) -> Result<()> {
        match self.adjacency.iter().position(Vec::is_empty) {
            Some(x) => Err(input_err!("vertex {x} is isolated; the lazy walk is undefined there")),
            None => Ok(()),
        }
    }

    /// BFS distances from `source`, `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        self.bfs_bounded(source, usize::MAX)
    }

    /// BFS distances from `source`, exploring no further than `limit` hops.
    pub fn bfs_bounded(&self, source: usize, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            if d >= limit {
                continue;
            }
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Shortest-path length between `x` and `y`.
    pub fn distance(&self, x: usize, y: usize) -> Result<Distance> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Ok(Distance::Finite(0));
        }
        Ok(match self.bfs_distances(x)[y] {
            Some(d) => Distance::Finite(d),
            None => Distance::Infinite,
        })
    }

    /// Connected component index of every vertex, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adjacency[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Induced subgraph on `vertices`, which become `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<usize>> = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self.adjacency[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                list.sort_unstable();
                edge_count += list.len();
                list
            })
            .collect();
        Graph {
            adjacency,
            edge_count: edge_count / 2,
        }
    }

    /// Applies a vertex relabeling `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.vertex_count();
        if perm.len() != n {
            return Err(input_err!("permutation has length {}, expected {n}", perm.len()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(input_err!("relabeling is not a permutation of 0..{n}"));
            }
        }
        Graph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Parses the `{"n": .., "edges": [[u, v], ..]}` format.
    pub fn from_json(text: &str) -> Result<Graph> {
        let raw: GraphJson =
            serde_json::from_str(text).map_err(|e| input_err!("malformed graph JSON: {e}"))?;
        Graph::from_edges(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v)))
    }

    /// Serializes to the graph JSON format: `u < v`, edges sorted.
    pub fn to_json(&self) -> String {
        let raw = GraphJson {
            n: self.vertex_count(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&raw).expect("graph JSON serialization cannot fail")
    }

    /// Parses a whitespace-separated edge list, one `u v` pair per line.
    ///
    /// Tokens are vertex names. Names are mapped to indices in sorted order:
    /// numerically when every name is a non-negative integer, lexicographically
    /// otherwise. Blank lines and lines starting with `#` are skipped.
    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => pairs.push((u, v)),
                _ => return Err(input_err!("line {}: expected exactly two tokens", lineno + 1)),
            }
        }
        let numeric = pairs
            .iter()
            .all(|(u, v)| u.parse::<u64>().is_ok() && v.parse::<u64>().is_ok());
        let mut names: Vec<&str> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        if numeric {
            names.sort_by_key(|s| s.parse::<u64>().unwrap());
        } else {
            names.sort_unstable();
        }
        names.dedup();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        if numeric {
            // "01" and "1" collapse to the same numeric label.
            let distinct: std::collections::BTreeSet<u64> =
                names.iter().map(|s| s.parse().unwrap()).collect();
            if distinct.len() != names.len() {
                return Err(input_err!("edge list uses two spellings of the same numeric label"));
            }
        }
        Graph::from_edges(names.len(), pairs.iter().map(|(u, v)| (index[u], index[v])))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Depth-`radius` neighborhood of a root, re-indexed in BFS discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    pub subgraph: Graph,
    pub radius: usize,
    /// Distance of every ball vertex from the root (vertex 0).
    pub layer_of: Vec<usize>,
    /// Original index of every ball vertex in the host graph.
    pub origin: Vec<usize>,
}

impl RootedBall {
    pub const ROOT: usize = 0;

    pub fn vertex_count(&self) -> usize {
        self.subgraph.vertex_count()
    }

    pub fn root_degree(&self) -> usize {
        self.subgraph.degree(Self::ROOT)
    }
}

/// Induced subgraph on all vertices within distance `radius` of `root`.
pub fn ball(g: &Graph, root: usize, radius: usize) -> Result<RootedBall> {
    g.check_vertex(root)?;
    let mut order = vec![root];
    let mut layer_of = vec![0];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let (x, d) = (order[head], layer_of[head]);
        head += 1;
        if d == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                order.push(y);
                layer_of.push(d + 1);
            }
        }
    }
    Ok(RootedBall {
        subgraph: g.induced(&order),
        radius,
        layer_of,
        origin: order,
    })
}

/// Average of `deg(x) * ln deg(x)` over all vertices.
pub fn sparsity_functional(g: &Graph) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::Input("sparsity functional of the empty graph".into()));
    }
    Ok(degree_log_sum(&degree_histogram(g)) / g.vertex_count() as f64)
}

pub(crate) fn degree_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for d in g.degrees() {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    histogram
}

/// `sum_d count_d d ln d`, summed in increasing degree order so that every
/// caller holding the same histogram gets the same float.
pub(crate) fn degree_log_sum(histogram: &BTreeMap<usize, usize>) -> f64 {
    histogram.iter().map(|(&d, &c)| c as f64 * deg_log_deg(d)).sum()
}

pub(crate) fn deg_log_deg(d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        d as f64 * (d as f64).ln()
    }
}
