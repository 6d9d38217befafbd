//! Canonical codes for rooted balls.
//!
//! Individualization-refinement: partitions start from the BFS layers (so the
//! root is always a singleton), are refined to an equitable partition, and
//! ties are broken by backtracking. The code is the lexicographically least
//! adjacency serialization over all leaves of the search tree. Automorphisms
//! discovered at equal leaves prune sibling branches in the same orbit.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::RootedBall;

/// Isomorphism-class fingerprint of a rooted ball.
///
/// Two balls get equal codes iff there is a root-preserving isomorphism
/// between them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    pub bytes: Vec<u8>,
}

impl CanonicalCode {
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        if hex.len() % 2 != 0 {
            return Err(Error::Input("odd-length hex code".into()));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Input(format!("bad hex code: {e}")))?;
        Ok(CanonicalCode { bytes })
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Upper bound on search-tree leaves before giving up.
const LEAF_BUDGET: usize = 1 << 20;

pub fn canonical_code(ball: &RootedBall) -> Result<CanonicalCode> {
    let n = ball.vertex_count();
    if ball.layer_of.len() != n || n == 0 || ball.layer_of[0] != 0 {
        return Err(Error::Input("malformed rooted ball".into()));
    }
    if ball.layer_of.iter().skip(1).any(|&l| l == 0 || l > ball.radius) {
        return Err(Error::Input("rooted ball layer map out of range".into()));
    }
    let adj: Vec<&[usize]> = (0..n).map(|v| ball.subgraph.neighbors(v)).collect();
    let depth = ball.layer_of.iter().copied().max().unwrap_or(0);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for (v, &l) in ball.layer_of.iter().enumerate() {
        cells[l].push(v);
    }
    cells.retain(|c| !c.is_empty());

    let mut search = Search {
        adj,
        layer_of: &ball.layer_of,
        radius: ball.radius,
        best: None,
        automorphisms: Vec::new(),
        leaves: 0,
    };
    search.explore(cells, &mut Vec::new())?;
    let (words, _) = search.best.expect("search visits at least one leaf");
    let bytes = words.iter().flat_map(|w| w.to_be_bytes()).collect();
    Ok(CanonicalCode { bytes })
}

struct Search<'a> {
    adj: Vec<&'a [usize]>,
    layer_of: &'a [usize],
    radius: usize,
    /// Least serialization so far and the vertex order that produced it.
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
    leaves: usize,
}

impl Search<'_> {
    fn explore(&mut self, cells: Vec<Vec<usize>>, fixed: &mut Vec<usize>) -> Result<()> {
        let cells = refine(&self.adj, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            return self.leaf(&cells);
        };
        let mut candidates = cells[target].clone();
        candidates.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored.is_empty() {
                let mut orbits = UnionFind::new(self.adj.len());
                for gamma in &self.automorphisms {
                    if fixed.iter().all(|&f| gamma[f] == f) {
                        for (a, &b) in gamma.iter().enumerate() {
                            orbits.union(a, b);
                        }
                    }
                }
                if explored.iter().any(|&u| orbits.find(u) == orbits.find(v)) {
                    continue;
                }
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            fixed.push(v);
            self.explore(next, fixed)?;
            fixed.pop();
            explored.push(v);
        }
        Ok(())
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) -> Result<()> {
        self.leaves += 1;
        if self.leaves > LEAF_BUDGET {
            return Err(Error::Capability(format!(
                "canonical labeling exceeded {LEAF_BUDGET} search leaves"
            )));
        }
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let words = self.serialize(&order, &pos);
        match &self.best {
            None => self.best = Some((words, order)),
            Some((best_words, best_order)) => match words.cmp(best_words) {
                std::cmp::Ordering::Less => self.best = Some((words, order)),
                std::cmp::Ordering::Equal => {
                    let gamma: Vec<usize> = (0..order.len()).map(|v| best_order[pos[v]]).collect();
                    self.automorphisms.push(gamma);
                }
                std::cmp::Ordering::Greater => {}
            },
        }
        Ok(())
    }

    fn serialize(&self, order: &[usize], pos: &[usize]) -> Vec<u32> {
        let mut words = vec![order.len() as u32, self.radius as u32];
        for &v in order {
            words.push(self.layer_of[v] as u32);
            words.push(self.adj[v].len() as u32);
            let mut nbrs: Vec<u32> = self.adj[v].iter().map(|&w| pos[w] as u32).collect();
            nbrs.sort_unstable();
            words.extend(nbrs);
        }
        words
    }
}

/// Refines an ordered partition until it is equitable.
///
/// Each cell splits by the sorted list of its members' neighbor cell
/// indices; the pieces keep the order of those signatures, so the result
/// only depends on the isomorphism type of (graph, partition).
pub(crate) fn refine(adj: &[&[usize]], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut cell_of = vec![0; adj.len()];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        let before = cells.len();
        let mut next = Vec::with_capacity(before);
        for cell in cells {
            if cell.len() == 1 {
                next.push(cell);
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .into_iter()
                .map(|v| {
                    let mut sig: Vec<usize> = adj[v].iter().map(|&w| cell_of[w]).collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        cells = next;
        if cells.len() == before {
            return cells;
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
