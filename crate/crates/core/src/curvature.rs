//! Ollivier-Ricci curvature of edges and graphs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{input_err, Result};
use crate::graph::Graph;
use crate::rational::{int, Rational};
use crate::transport::{idle_kernel_row, lazy_kernel_row, wasserstein1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCurvature {
    pub edge: (usize, usize),
    pub kappa: Rational,
}

/// Per-edge curvatures in edge order, with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub per_edge: Vec<EdgeCurvature>,
    pub min_kappa: Rational,
    /// Fraction of edges with curvature below `-eps`, for each requested `eps`.
    pub negative_fraction_at: BTreeMap<Rational, Rational>,
}

impl CurvatureProfile {
    /// Edge count per distinct curvature value.
    pub fn histogram(&self) -> BTreeMap<Rational, usize> {
        let mut h = BTreeMap::new();
        for e in &self.per_edge {
            *h.entry(e.kappa.clone()).or_insert(0) += 1;
        }
        h
    }
}

fn check_edge(g: &Graph, x: usize, y: usize) -> Result<()> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if !g.has_edge(x, y) {
        return Err(input_err!("({x}, {y}) is not an edge"));
    }
    Ok(())
}

/// `1 - W1(P(x, .), P(y, .))` for the lazy kernel.
pub fn kappa_edge(g: &Graph, x: usize, y: usize) -> Result<Rational> {
    check_edge(g, x, y)?;
    let (mu, nu) = (lazy_kernel_row(g, x)?, lazy_kernel_row(g, y)?);
    Ok(Rational::one() - wasserstein1(g, &mu, &nu)?)
}

/// Curvature of the edge under the `alpha`-idle kernel; `alpha = 1/2` is [`kappa_edge`].
pub fn kappa_alpha_edge(g: &Graph, x: usize, y: usize, alpha: &Rational) -> Result<Rational> {
    check_edge(g, x, y)?;
    let (mu, nu) = (idle_kernel_row(g, x, alpha)?, idle_kernel_row(g, y, alpha)?);
    Ok(Rational::one() - wasserstein1(g, &mu, &nu)?)
}

/// Curvature of every edge, computed in parallel, returned in edge order.
pub fn edge_curvatures(g: &Graph) -> Result<Vec<EdgeCurvature>> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    edges
        .par_iter()
        .map(|&(x, y)| {
            Ok(EdgeCurvature {
                edge: (x, y),
                kappa: kappa_edge(g, x, y)?,
            })
        })
        .collect()
}

fn require_edges(g: &Graph) -> Result<()> {
    if g.edge_count() == 0 {
        Err(input_err!("curvature of an edgeless graph is undefined"))
    } else {
        Ok(())
    }
}

/// Minimum edge curvature.
pub fn kappa_graph(g: &Graph) -> Result<Rational> {
    require_edges(g)?;
    Ok(edge_curvatures(g)?.into_iter().map(|e| e.kappa).min().unwrap())
}

/// Fraction of edges with curvature strictly below `-eps`.
pub fn negative_fraction(g: &Graph, eps: &Rational) -> Result<Rational> {
    require_edges(g)?;
    if eps < &Rational::zero() {
        return Err(input_err!("epsilon {eps} is negative"));
    }
    Ok(negative_fraction_of(&edge_curvatures(g)?, eps))
}

/// [`negative_fraction`] over precomputed curvatures.
pub fn negative_fraction_of(per_edge: &[EdgeCurvature], eps: &Rational) -> Rational {
    if per_edge.is_empty() {
        return Rational::zero();
    }
    let threshold = -eps.clone();
    let count = per_edge.iter().filter(|e| e.kappa < threshold).count();
    int(count as i64) / int(per_edge.len() as i64)
}

pub fn curvature_profile(g: &Graph, eps_list: &[Rational]) -> Result<CurvatureProfile> {
    require_edges(g)?;
    if let Some(e) = eps_list.iter().find(|e| *e < &Rational::zero()) {
        return Err(input_err!("epsilon {e} is negative"));
    }
    let per_edge = edge_curvatures(g)?;
    let min_kappa = per_edge.iter().map(|e| e.kappa.clone()).min().unwrap();
    let negative_fraction_at = eps_list
        .iter()
        .map(|e| (e.clone(), negative_fraction_of(&per_edge, e)))
        .collect();
    Ok(CurvatureProfile {
        per_edge,
        min_kappa,
        negative_fraction_at,
    })
}
