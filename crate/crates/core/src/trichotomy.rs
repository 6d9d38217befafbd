//! Evaluation of the three alternatives every finite graph must satisfy for
//! fixed `(delta, rho)` and small enough `eps`: heavy degrees, many
//! eigenvalues near one, or many negatively curved edges.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{edge_curvatures, EdgeCurvature};
use crate::error::{input_err, Result};
use crate::generators::{generate, FamilySpec};
use crate::graph::{deg_log_deg, degree_histogram, degree_log_sum, Graph};
use crate::rational::{int, Rational};
use crate::spectral::{spectrum, Spectrum};

/// How eigenvalues equal to `rho` are counted by the expansion clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoConvention {
    /// `lambda > rho`.
    #[default]
    Strict,
    /// `lambda >= rho`.
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Sparsity,
    Expansion,
    Curvature,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Sparsity => "sparsity",
            Clause::Expansion => "expansion",
            Clause::Curvature => "curvature",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityClause {
    pub fired: bool,
    /// `sum_x deg(x) ln deg(x)`.
    pub lhs: f64,
    /// `delta ln(delta) |V|`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountClause {
    pub fired: bool,
    pub count: usize,
    /// `eps` times the population size, as `num/den`.
    pub threshold: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrichotomyReport {
    pub delta: usize,
    pub rho: f64,
    pub eps: String,
    pub convention: RhoConvention,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub sparsity_clause: SparsityClause,
    pub expansion_clause: CountClause,
    pub curvature_clause: CountClause,
    pub any_clause: bool,
}

impl TrichotomyReport {
    pub fn fired(&self) -> Vec<Clause> {
        let mut out = Vec::new();
        if self.sparsity_clause.fired {
            out.push(Clause::Sparsity);
        }
        if self.expansion_clause.fired {
            out.push(Clause::Expansion);
        }
        if self.curvature_clause.fired {
            out.push(Clause::Curvature);
        }
        out
    }
}

/// Everything the clauses need, computed once per graph.
#[derive(Debug, Clone)]
pub struct GraphStats {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub degree_log_sum: f64,
    pub spectrum: Spectrum,
    pub curvatures: Vec<EdgeCurvature>,
}

impl GraphStats {
    pub fn compute(g: &Graph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(input_err!("trichotomy needs a graph with at least one edge"));
        }
        let (spectrum, curvatures) = rayon::join(|| spectrum(g), || edge_curvatures(g));
        Ok(GraphStats {
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            degree_log_sum: degree_log_sum(&degree_histogram(g)),
            spectrum: spectrum?,
            curvatures: curvatures?,
        })
    }

    pub fn report(&self, delta: usize, rho: f64, eps: &Rational, convention: RhoConvention) -> Result<TrichotomyReport> {
        check_params(delta, rho, eps)?;
        let rhs = self.vertex_count as f64 * deg_log_deg(delta);
        let sparsity_clause = SparsityClause {
            fired: self.degree_log_sum > rhs,
            lhs: self.degree_log_sum,
            rhs,
        };
        let high = match convention {
            RhoConvention::Strict => self.spectrum.count_above(rho),
            RhoConvention::AtLeast => self.spectrum.count_at_least(rho),
        };
        let vertex_threshold = eps * int(self.vertex_count as i64);
        let expansion_clause = CountClause {
            fired: int(high as i64) >= vertex_threshold,
            count: high,
            threshold: vertex_threshold.to_string(),
        };
        let minus_eps = -eps.clone();
        let negative = self.curvatures.iter().filter(|e| e.kappa < minus_eps).count();
        let edge_threshold = eps * int(self.edge_count as i64);
        let curvature_clause = CountClause {
            fired: int(negative as i64) >= edge_threshold,
            count: negative,
            threshold: edge_threshold.to_string(),
        };
        let any_clause = sparsity_clause.fired || expansion_clause.fired || curvature_clause.fired;
        Ok(TrichotomyReport {
            delta,
            rho,
            eps: eps.to_string(),
            convention,
            vertex_count: self.vertex_count,
            edge_count: self.edge_count,
            sparsity_clause,
            expansion_clause,
            curvature_clause,
            any_clause,
        })
    }
}

fn check_params(delta: usize, rho: f64, eps: &Rational) -> Result<()> {
    if delta < 1 {
        return Err(input_err!("delta must be at least 1"));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(input_err!("rho must lie in (0, 1), got {rho}"));
    }
    if !eps.is_positive() {
        return Err(input_err!("eps must be positive, got {eps}"));
    }
    Ok(())
}

pub fn evaluate(
    g: &Graph,
    delta: usize,
    rho: f64,
    eps: &Rational,
    convention: RhoConvention,
) -> Result<TrichotomyReport> {
    check_params(delta, rho, eps)?;
    GraphStats::compute(g)?.report(delta, rho, eps, convention)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub params: String,
    pub vertex_count: usize,
    pub eps: String,
    pub fired: Vec<Clause>,
}

impl SweepRow {
    /// Fired clause names joined by `+`, or `none`.
    pub fn fired_label(&self) -> String {
        if self.fired.is_empty() {
            "none".into()
        } else {
            self.fired.iter().map(|c| c.name()).collect::<Vec<_>>().join("+")
        }
    }
}

/// Evaluates every spec at every `eps`, largest `eps` first, in spec order.
pub fn sweep(
    specs: &[FamilySpec],
    delta: usize,
    rho: f64,
    eps_grid: &[Rational],
    convention: RhoConvention,
) -> Result<Vec<SweepRow>> {
    if eps_grid.is_empty() {
        return Err(input_err!("epsilon grid is empty"));
    }
    for eps in eps_grid {
        check_params(delta, rho, eps)?;
    }
    let mut grid = eps_grid.to_vec();
    grid.sort_by(|a, b| b.cmp(a));
    grid.dedup();
    let per_spec: Vec<Vec<SweepRow>> = specs
        .par_iter()
        .map(|spec| {
            let stats = GraphStats::compute(&generate(spec)?)?;
            grid.iter()
                .map(|eps| {
                    let report = stats.report(delta, rho, eps, convention)?;
                    Ok(SweepRow {
                        family: spec.name().to_string(),
                        params: spec.params(),
                        vertex_count: stats.vertex_count,
                        eps: eps.to_string(),
                        fired: report.fired(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_spec.into_iter().flatten().collect())
}

/// `(family, params, first firing)` for one family instance.
pub type FirstFiring = (String, String, Option<(String, Vec<Clause>)>);

/// For each family instance in `rows`, the first `(eps, clauses)` at which
/// something fires as `eps` decreases.
pub fn first_firing(rows: &[SweepRow]) -> Vec<FirstFiring> {
    let mut out: Vec<FirstFiring> = Vec::new();
    for row in rows {
        let same = out.last().is_some_and(|l| l.0 == row.family && l.1 == row.params);
        if !same {
            out.push((row.family.clone(), row.params.clone(), None));
        }
        let last = out.last_mut().unwrap();
        if last.2.is_none() && !row.fired.is_empty() {
            last.2 = Some((row.eps.clone(), row.fired.clone()));
        }
    }
    out
}
