//! Deterministic and seeded constructors for standard graph families.
//!
//! Randomness comes from SplitMix64 (64-bit state, counter-based: the state
//! advances by the golden-ratio increment `0x9E3779B97F4A7C15` and each output
//! is the Stafford "mix13" finalizer of the new state). Attempt `k` of a
//! seeded construction uses the stream seeded with `derive_seed(seed, k)`.
//! Uniform draws on `0..m` use rejection of the top partial block of `u64`,
//! and shuffles are the descending Fisher-Yates variant, so every stream is
//! reproducible from this description alone.

use std::fmt;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{input_err, Error, Result};
use crate::graph::Graph;

/// A graph family together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    /// `n` leaves around one center.
    Star { n: usize },
    /// Cycle `C_n` times an edge.
    Prism { n: usize },
    /// A `2n`-cycle with its `n` antipodal chords.
    MobiusLadder { n: usize },
    Hypercube { d: usize },
    /// Periodic `n x n` grid.
    Torus2d { n: usize },
    /// Non-periodic `n x n` grid.
    Grid2d { n: usize },
    /// Ball of radius `depth` in the `d`-regular tree.
    RegularTreeTruncation { d: usize, depth: usize },
    RandomRegular { n: usize, d: usize, seed: u64 },
    /// Cayley graph of `Z_{orders[0]} x ... ` with the given generators;
    /// the set is closed under negation before use.
    CayleyAbelian { orders: Vec<usize>, generators: Vec<Vec<i64>> },
    Petersen,
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Cycle { .. } => "cycle",
            FamilySpec::Path { .. } => "path",
            FamilySpec::Complete { .. } => "complete",
            FamilySpec::CompleteBipartite { .. } => "complete_bipartite",
            FamilySpec::Star { .. } => "star",
            FamilySpec::Prism { .. } => "prism",
            FamilySpec::MobiusLadder { .. } => "mobius_ladder",
            FamilySpec::Hypercube { .. } => "hypercube",
            FamilySpec::Torus2d { .. } => "torus2d",
            FamilySpec::Grid2d { .. } => "grid2d",
            FamilySpec::RegularTreeTruncation { .. } => "regular_tree_truncation",
            FamilySpec::RandomRegular { .. } => "random_regular",
            FamilySpec::CayleyAbelian { .. } => "cayley_abelian",
            FamilySpec::Petersen => "petersen",
        }
    }

    /// Parameters rendered as `key=value` pairs separated by `;`.
    pub fn params(&self) -> String {
        match self {
            FamilySpec::Cycle { n }
            | FamilySpec::Path { n }
            | FamilySpec::Complete { n }
            | FamilySpec::Star { n }
            | FamilySpec::Prism { n }
            | FamilySpec::MobiusLadder { n }
            | FamilySpec::Torus2d { n }
            | FamilySpec::Grid2d { n } => format!("n={n}"),
            FamilySpec::CompleteBipartite { a, b } => format!("a={a};b={b}"),
            FamilySpec::Hypercube { d } => format!("d={d}"),
            FamilySpec::RegularTreeTruncation { d, depth } => format!("d={d};depth={depth}"),
            FamilySpec::RandomRegular { n, d, seed } => format!("n={n};d={d};seed={seed}"),
            FamilySpec::CayleyAbelian { orders, generators } => {
                format!("orders={orders:?};generators={generators:?}")
            }
            FamilySpec::Petersen => String::new(),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, FamilySpec::RandomRegular { .. })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}({})", self.name(), params)
        }
    }
}

/// Maximum number of configuration-model attempts before giving up.
pub const RANDOM_REGULAR_ATTEMPTS: u64 = 10_000;

/// Builds the graph described by `spec`. Same spec, same graph, bit for bit.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    match *spec {
        FamilySpec::Cycle { n } => {
            require(n >= 3, "cycle needs n >= 3")?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        FamilySpec::Path { n } => {
            require(n >= 1, "path needs n >= 1")?;
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        FamilySpec::Complete { n } => {
            require(n >= 1, "complete graph needs n >= 1")?;
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        FamilySpec::CompleteBipartite { a, b } => {
            require(a >= 1 && b >= 1, "complete bipartite graph needs a, b >= 1")?;
            Graph::from_edges(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))))
        }
        FamilySpec::Star { n } => {
            require(n >= 1, "star needs at least one leaf")?;
            Graph::from_edges(n + 1, (1..=n).map(|i| (0, i)))
        }
        FamilySpec::Prism { n } => {
            require(n >= 3, "prism needs n >= 3")?;
            let ring = (0..n).flat_map(|i| [(i, (i + 1) % n), (n + i, n + (i + 1) % n)]);
            Graph::from_edges(2 * n, ring.chain((0..n).map(|i| (i, n + i))))
        }
        FamilySpec::MobiusLadder { n } => {
            require(n >= 2, "Mobius ladder needs n >= 2")?;
            let m = 2 * n;
            let ring = (0..m).map(|i| (i, (i + 1) % m));
            Graph::from_edges(m, ring.chain((0..n).map(|i| (i, i + n))))
        }
        FamilySpec::Hypercube { d } => {
            require((1..=24).contains(&d), "hypercube needs 1 <= d <= 24")?;
            let n = 1usize << d;
            Graph::from_edges(
                n,
                (0..n).flat_map(|x| (0..d).map(move |k| (x, x ^ (1 << k))).filter(|&(x, y)| x < y)),
            )
        }
        FamilySpec::Torus2d { n } => {
            require(n >= 3, "torus2d needs n >= 3")?;
            cayley_abelian(&[n, n], &[vec![1, 0], vec![0, 1]])
        }
        FamilySpec::Grid2d { n } => {
            require(n >= 1, "grid2d needs n >= 1")?;
            let id = |i: usize, j: usize| i * n + j;
            let horizontal = (0..n).flat_map(move |i| (1..n).map(move |j| (id(i, j - 1), id(i, j))));
            let vertical = (1..n).flat_map(move |i| (0..n).map(move |j| (id(i - 1, j), id(i, j))));
            Graph::from_edges(n * n, horizontal.chain(vertical))
        }
        FamilySpec::RegularTreeTruncation { d, depth } => regular_tree(d, depth),
        FamilySpec::RandomRegular { n, d, seed } => random_regular(n, d, seed),
        FamilySpec::CayleyAbelian { ref orders, ref generators } => cayley_abelian(orders, generators),
        FamilySpec::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
    }
}

fn require(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Input(msg.to_string()))
    }
}

/// Vertex count of the radius-`depth` ball in the `d`-regular tree.
pub fn regular_tree_size(d: usize, depth: usize) -> Option<usize> {
    let mut total: usize = 1;
    let mut layer: usize = 1;
    for k in 0..depth {
        layer = layer.checked_mul(if k == 0 { d } else { d - 1 })?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

const TREE_VERTEX_LIMIT: usize = 1 << 24;

fn regular_tree(d: usize, depth: usize) -> Result<Graph> {
    require(d >= 2, "regular tree needs d >= 2")?;
    let size = regular_tree_size(d, depth).filter(|&s| s <= TREE_VERTEX_LIMIT);
    let Some(size) = size else {
        return Err(Error::Capability(format!(
            "regular tree (d={d}, depth={depth}) exceeds {TREE_VERTEX_LIMIT} vertices"
        )));
    };
    // Vertices in BFS order: the children of vertex v are contiguous.
    let mut edges = Vec::with_capacity(size.saturating_sub(1));
    let mut next = 1;
    let mut frontier = 0..1;
    for level in 0..depth {
        let start = next;
        for v in frontier.clone() {
            let children = if level == 0 { d } else { d - 1 };
            for _ in 0..children {
                edges.push((v, next));
                next += 1;
            }
        }
        frontier = start..next;
    }
    Graph::from_edges(size, edges)
}

fn cayley_abelian(orders: &[usize], generators: &[Vec<i64>]) -> Result<Graph> {
    require(!orders.is_empty(), "cayley_abelian needs at least one cyclic factor")?;
    require(orders.iter().all(|&m| m >= 1), "cyclic orders must be positive")?;
    let n = orders
        .iter()
        .try_fold(1usize, |acc, &m| acc.checked_mul(m))
        .filter(|&n| n <= TREE_VERTEX_LIMIT)
        .ok_or_else(|| Error::Capability("group too large".into()))?;
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for g in generators {
        if g.len() != orders.len() {
            return Err(input_err!(
                "generator {g:?} has {} coordinates, group has {}",
                g.len(),
                orders.len()
            ));
        }
        let reduce = |sign: i64| -> Vec<usize> {
            g.iter()
                .zip(orders)
                .map(|(&c, &m)| (sign * c).rem_euclid(m as i64) as usize)
                .collect()
        };
        let (plus, minus) = (reduce(1), reduce(-1));
        if plus.iter().all(|&c| c == 0) {
            return Err(input_err!("generator {g:?} is the identity"));
        }
        gens.push(plus);
        gens.push(minus);
    }
    gens.sort();
    gens.dedup();
    let mut edges = Vec::new();
    let mut coords = vec![0usize; orders.len()];
    for x in 0..n {
        let mut rem = x;
        for k in (0..orders.len()).rev() {
            coords[k] = rem % orders[k];
            rem /= orders[k];
        }
        for s in &gens {
            let y = coords
                .iter()
                .zip(s)
                .zip(orders)
                .fold(0, |acc, ((&c, &sc), &m)| acc * m + (c + sc) % m);
            if x < y {
                edges.push((x, y));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, edges)
}

/// Mixes `(seed, attempt)` into an independent sub-seed.
pub fn derive_seed(seed: u64, attempt: u64) -> u64 {
    let mut rng = SplitMix64::seed_from_u64(seed ^ attempt.wrapping_mul(0xD1B5_4A32_D192_ED03));
    rng.next_u64()
}

/// Seeded stream for attempt/trial `index` of a run with master `seed`.
pub fn stream(seed: u64, index: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(derive_seed(seed, index))
}

/// Uniform integer in `0..bound` (`bound > 0`), rejection sampled.
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let r = rng.next_u64();
        if r <= zone {
            return r % bound;
        }
    }
}

/// Uniform real in `[0, 1)` from the top 53 bits.
pub fn uniform_unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn shuffle<T>(rng: &mut impl RngCore, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    require(d < n, "random_regular needs d < n")?;
    require((n * d) % 2 == 0, "random_regular needs n * d even")?;
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    'attempt: for attempt in 0..RANDOM_REGULAR_ATTEMPTS {
        let mut rng = stream(seed, attempt);
        stubs.sort_unstable();
        shuffle(&mut rng, &mut stubs);
        let mut adjacency = vec![Vec::with_capacity(d); n];
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || adjacency[u].contains(&v) {
                continue 'attempt;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        return Graph::from_adjacency(adjacency);
    }
    Err(Error::Generation(format!(
        "configuration model found no simple {d}-regular graph on {n} vertices in {RANDOM_REGULAR_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_isomorphic(a: &Graph, b: &Graph) -> bool {
        let n = a.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        fn go(k: usize, perm: &mut Vec<usize>, a: &Graph, b: &Graph) -> bool {
            if k == perm.len() {
                return a.edge_count() == b.edge_count()
                    && a.edges().all(|(u, v)| b.has_edge(perm[u], perm[v]));
            }
            for i in k..perm.len() {
                perm.swap(k, i);
                if go(k + 1, perm, a, b) {
                    return true;
                }
                perm.swap(k, i);
            }
            false
        }
        n == b.vertex_count() && go(0, &mut perm, a, b)
    }

    #[test]
    fn prism_three() {
        let g = generate(&FamilySpec::Prism { n: 3 }).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 9));
        assert!(g.degrees().all(|d| d == 3));
    }

    #[test]
    fn mobius_two_is_k4() {
        let m = generate(&FamilySpec::MobiusLadder { n: 2 }).unwrap();
        let k4 = generate(&FamilySpec::Complete { n: 4 }).unwrap();
        assert!(brute_force_isomorphic(&m, &k4));
    }

    #[test]
    fn random_regular_is_simple_and_regular() {
        let spec = FamilySpec::RandomRegular { n: 100, d: 3, seed: 7 };
        let g = generate(&spec).unwrap();
        assert_eq!(g.vertex_count(), 100);
        assert!(g.degrees().all(|d| d == 3));
        assert_eq!(generate(&spec).unwrap(), g);
        assert_ne!(generate(&FamilySpec::RandomRegular { n: 100, d: 3, seed: 8 }).unwrap(), g);
    }

    #[test]
    fn torus_is_a_cayley_graph() {
        let t = generate(&FamilySpec::Torus2d { n: 5 }).unwrap();
        let c = generate(&FamilySpec::CayleyAbelian {
            orders: vec![5, 5],
            generators: vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
        })
        .unwrap();
        assert_eq!(t, c);
        assert!(t.degrees().all(|d| d == 4));
    }

    #[test]
    fn hypercube_and_tree_sizes() {
        let q = generate(&FamilySpec::Hypercube { d: 4 }).unwrap();
        assert_eq!(q.vertex_count(), 16);
        assert!(q.degrees().all(|d| d == 4));
        for (d, depth) in [(3, 1), (3, 4), (4, 3)] {
            let t = generate(&FamilySpec::RegularTreeTruncation { d, depth }).unwrap();
            assert_eq!(t.vertex_count(), 1 + d * ((d - 1).pow(depth as u32) - 1) / (d - 2));
            assert_eq!(t.degree(0), d);
            assert!(t.is_connected() && t.edge_count() == t.vertex_count() - 1);
            let leaves = t.degrees().filter(|&x| x == 1).count();
            assert_eq!(leaves, d * (d - 1).pow(depth as u32 - 1));
            assert!(t.degrees().all(|x| x == 1 || x == d));
        }
    }

    #[test]
    fn petersen_is_cubic_girth_five() {
        let p = generate(&FamilySpec::Petersen).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.degrees().all(|d| d == 3));
        for (u, v) in p.edges() {
            assert!(p.neighbors(u).iter().all(|w| !p.has_edge(*w, v)));
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(generate(&FamilySpec::RandomRegular { n: 5, d: 3, seed: 1 }).is_err());
        assert!(generate(&FamilySpec::RandomRegular { n: 3, d: 3, seed: 1 }).is_err());
        assert!(generate(&FamilySpec::Prism { n: 2 }).is_err());
        assert!(generate(&FamilySpec::CayleyAbelian { orders: vec![4], generators: vec![vec![4]] }).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let spec: FamilySpec = serde_json::from_str(r#"{"family":"prism","n":4}"#).unwrap();
        assert_eq!(spec, FamilySpec::Prism { n: 4 });
        assert_eq!(spec.to_string(), "prism(n=4)");
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = stream(3, 0);
        let mut hits = [0usize; 7];
        for _ in 0..7000 {
            hits[uniform_below(&mut rng, 7) as usize] += 1;
        }
        assert!(hits.iter().all(|&h| h > 800 && h < 1200));
    }
}
