//! The lazy walk from a root, lumped over an equitable partition.
//!
//! If the root is a singleton cell and every vertex of a cell has the same
//! number of neighbors in each cell, the walk started at the root is
//! lumpable and `P^t(o, .)` is constant on cells (by reversibility,
//! `P^t(x, o)` only depends on the cell of `x`). The walk can then be run on
//! the cell chain, which for spherically symmetric graphs such as regular
//! trees is exponentially smaller than the graph.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::canon::refine;
use crate::error::{input_err, Error, Result};
use crate::generators::regular_tree_size;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Cell {
    size: u64,
    degree: usize,
    /// `(target cell, neighbors of one member inside it)`.
    moves: Vec<(usize, usize)>,
}

/// A root-centered cell chain for the lazy random walk. The root is cell 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumpedChain {
    cells: Vec<Cell>,
    /// Cell of every vertex, when built from an explicit graph.
    cell_of: Option<Vec<usize>>,
}

impl LumpedChain {
    /// Coarsest equitable refinement of `{root} | rest`.
    pub fn from_graph(g: &Graph, root: usize) -> Result<Self> {
        g.check_vertex(root)?;
        if g.degree(root) == 0 {
            return Err(input_err!("vertex {root} is isolated; the lazy walk is undefined there"));
        }
        let n = g.vertex_count();
        let adj: Vec<&[usize]> = (0..n).map(|v| g.neighbors(v)).collect();
        let mut start = vec![vec![root]];
        let rest: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        if !rest.is_empty() {
            start.push(rest);
        }
        let partition = refine(&adj, start);
        let mut cell_of = vec![0; n];
        for (i, c) in partition.iter().enumerate() {
            for &v in c {
                cell_of[v] = i;
            }
        }
        debug_assert_eq!(partition[0], vec![root]);
        let cells = partition
            .iter()
            .map(|members| {
                let rep = members[0];
                let mut moves: Vec<(usize, usize)> = Vec::new();
                for &w in g.neighbors(rep) {
                    let c = cell_of[w];
                    match moves.iter_mut().find(|m| m.0 == c) {
                        Some(m) => m.1 += 1,
                        None => moves.push((c, 1)),
                    }
                }
                moves.sort_unstable();
                Cell {
                    size: members.len() as u64,
                    degree: g.degree(rep),
                    moves,
                }
            })
            .collect();
        Ok(LumpedChain {
            cells,
            cell_of: Some(cell_of),
        })
    }

    /// Depth layers of the radius-`depth` ball in the `d`-regular tree,
    /// rooted at its center, without building the tree.
    pub fn regular_tree(d: usize, depth: usize) -> Result<Self> {
        if d < 2 {
            return Err(input_err!("regular tree needs d >= 2"));
        }
        if depth == 0 {
            return Err(input_err!("a depth-0 tree is a single isolated vertex"));
        }
        if regular_tree_size(d, depth).map_or(true, |s| s > u64::MAX as usize) {
            return Err(Error::Capability(format!("tree (d={d}, depth={depth}) too large to count")));
        }
        let mut cells = Vec::with_capacity(depth + 1);
        let mut size: u64 = 1;
        for k in 0..=depth {
            let cell = match k {
                0 => Cell { size, degree: d, moves: vec![(1, d)] },
                _ if k == depth => Cell { size, degree: 1, moves: vec![(k - 1, 1)] },
                _ => Cell { size, degree: d, moves: vec![(k - 1, 1), (k + 1, d - 1)] },
            };
            cells.push(cell);
            size = size.saturating_mul(if k == 0 { d as u64 } else { d as u64 - 1 });
        }
        Ok(LumpedChain { cells, cell_of: None })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_size(&self, c: usize) -> u64 {
        self.cells[c].size
    }

    pub fn cell_degree(&self, c: usize) -> usize {
        self.cells[c].degree
    }

    pub fn cell_of(&self) -> Option<&[usize]> {
        self.cell_of.as_deref()
    }

    /// Total number of vertices represented.
    pub fn vertex_count(&self) -> u128 {
        self.cells.iter().map(|c| c.size as u128).sum()
    }

    /// Float cell masses `P^t(root, cell)` for `t = 0, 1, ...`, passed to `visit`.
    pub fn run_float(&self, steps: usize, mut visit: impl FnMut(usize, &[f64])) {
        let k = self.cells.len();
        let mut mass = vec![0.0; k];
        mass[0] = 1.0;
        let mut next = vec![0.0; k];
        visit(0, &mass);
        for t in 1..=steps {
            next.iter_mut().for_each(|m| *m = 0.0);
            for (a, cell) in self.cells.iter().enumerate() {
                let p = mass[a];
                if p == 0.0 {
                    continue;
                }
                next[a] += p * 0.5;
                let share = p * 0.5 / cell.degree as f64;
                for &(b, count) in &cell.moves {
                    next[b] += share * count as f64;
                }
            }
            std::mem::swap(&mut mass, &mut next);
            visit(t, &mass);
        }
    }

    /// Exact cell masses after `t` steps as numerators over `denominator^t`.
    pub fn run_exact(&self, t: usize) -> (Vec<BigUint>, BigUint) {
        let denom = self
            .cells
            .iter()
            .filter(|c| c.degree > 0)
            .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(2 * c.degree)));
        let half = &denom / 2u32;
        let k = self.cells.len();
        let mut num = vec![BigUint::zero(); k];
        num[0] = BigUint::one();
        for _ in 0..t {
            let mut next = vec![BigUint::zero(); k];
            for (a, cell) in self.cells.iter().enumerate() {
                if num[a].is_zero() {
                    continue;
                }
                next[a] += &num[a] * &half;
                let per_neighbor = &denom / BigUint::from(2 * cell.degree);
                for &(b, count) in &cell.moves {
                    next[b] += &num[a] * &per_neighbor * count;
                }
            }
            num = next;
        }
        (num, denom)
    }

    /// Shannon entropy of the per-vertex law given cell masses.
    pub fn entropy(&self, mass: &[f64]) -> f64 {
        mass.iter()
            .zip(&self.cells)
            .filter(|(&p, _)| p > 0.0)
            .map(|(&p, c)| p * ((c.size as f64).ln() - p.ln()))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    #[test]
    fn tree_chain_matches_refined_tree() {
        let g = generate(&FamilySpec::RegularTreeTruncation { d: 3, depth: 4 }).unwrap();
        let refined = LumpedChain::from_graph(&g, 0).unwrap();
        let direct = LumpedChain::regular_tree(3, 4).unwrap();
        assert_eq!(refined.cell_count(), 5);
        let mut a: Vec<(u64, usize)> = refined.cells.iter().map(|c| (c.size, c.degree)).collect();
        let mut b: Vec<(u64, usize)> = direct.cells.iter().map(|c| (c.size, c.degree)).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
        let (mut ra, mut rb) = (Vec::new(), Vec::new());
        refined.run_float(12, |_, m| ra.push((m[0], refined.entropy(m))));
        direct.run_float(12, |_, m| rb.push((m[0], direct.entropy(m))));
        for (x, y) in ra.iter().zip(&rb) {
            assert!((x.0 - y.0).abs() < 1e-15 && (x.1 - y.1).abs() < 1e-12);
        }
        assert_eq!(direct.vertex_count(), g.vertex_count() as u128);
    }

    #[test]
    fn cycle_lumps_by_distance() {
        let c = generate(&FamilySpec::Cycle { n: 10 }).unwrap();
        let chain = LumpedChain::from_graph(&c, 3).unwrap();
        assert_eq!(chain.cell_count(), 6);
        assert_eq!((0..6).map(|i| chain.cell_size(i)).sum::<u64>(), 10);
    }
}
