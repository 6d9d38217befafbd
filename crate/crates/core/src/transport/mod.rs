//! Exact Wasserstein-1 transport over the graph metric.
//!
//! Masses are scaled by the least common denominator to integers, the
//! transportation problem is solved as an integer min-cost flow, and the
//! result is scaled back. Every quantity is an exact rational.

mod flow;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input_err, Error, Result};
use crate::graph::Graph;
use crate::rational::{common_denominator, int, scaled_units, Rational};
use flow::MinCostFlow;

/// Finitely supported probability distribution on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDistribution {
    support: Vec<(usize, Rational)>,
}

impl VertexDistribution {
    /// Validates positivity, distinct support and exact total mass one.
    /// The support is stored sorted by vertex.
    pub fn new(mut support: Vec<(usize, Rational)>) -> Result<Self> {
        support.sort_by_key(|(v, _)| *v);
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(input_err!("distribution lists a vertex twice"));
        }
        if let Some((v, m)) = support.iter().find(|(_, m)| !m.is_positive()) {
            return Err(input_err!("mass {m} at vertex {v} is not positive"));
        }
        let total: Rational = support.iter().map(|(_, m)| m).sum();
        if !total.is_one() {
            return Err(input_err!("distribution has total mass {total}, expected 1"));
        }
        Ok(VertexDistribution { support })
    }

    pub fn dirac(v: usize) -> Self {
        VertexDistribution {
            support: vec![(v, Rational::one())],
        }
    }

    pub fn support(&self) -> &[(usize, Rational)] {
        &self.support
    }

    pub fn mass(&self, v: usize) -> Rational {
        self.support
            .binary_search_by_key(&v, |(u, _)| *u)
            .map(|i| self.support[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    fn check_in(&self, g: &Graph) -> Result<()> {
        self.support.iter().try_for_each(|(v, _)| g.check_vertex(*v))
    }
}

/// Row `x` of the lazy simple random walk: 1/2 at `x`, `1/(2 deg x)` at each neighbor.
pub fn lazy_kernel_row(g: &Graph, x: usize) -> Result<VertexDistribution> {
    idle_kernel_row(g, x, &Rational::new(BigInt::one(), BigInt::from(2)))
}

/// Row `x` of the `alpha`-idle kernel `(2 - 2 alpha) P + (2 alpha - 1) Id`:
/// mass `alpha` at `x` and `(1 - alpha)/deg x` at each neighbor.
pub fn idle_kernel_row(g: &Graph, x: usize, alpha: &Rational) -> Result<VertexDistribution> {
    g.check_vertex(x)?;
    if alpha.is_negative() || *alpha >= Rational::one() {
        return Err(input_err!("idleness {alpha} outside [0, 1)"));
    }
    let deg = g.degree(x);
    if deg == 0 {
        return Err(input_err!("vertex {x} is isolated; its walk row is undefined"));
    }
    let step = (Rational::one() - alpha) / int(deg as i64);
    let mut support: Vec<(usize, Rational)> = g.neighbors(x).iter().map(|&y| (y, step.clone())).collect();
    if alpha.is_positive() {
        support.push((x, alpha.clone()));
    }
    support.sort_by_key(|(v, _)| *v);
    Ok(VertexDistribution { support })
}

/// One cell of a transport plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    pub mass: Rational,
    pub distance: usize,
}

/// A coupling of two vertex distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    /// `sum mass * d(source, target)`.
    pub cost: Rational,
    /// Mass on pairs strictly closer than the reference pair; zero without one.
    pub gamma_mass: Rational,
    pub reference: Option<(usize, usize)>,
    /// Entry masses times `scale` are the integers in `units`.
    pub(crate) units: Vec<u64>,
    pub(crate) scale: u64,
}

impl TransportPlan {
    /// First marginal, aggregated per source vertex.
    pub fn source_marginal(&self) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.source).or_insert_with(Rational::zero) += &e.mass;
        }
        out
    }

    pub fn target_marginal(&self) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.target).or_insert_with(Rational::zero) += &e.mass;
        }
        out
    }

    /// True when both marginals reproduce `mu` and `nu` exactly.
    pub fn has_marginals(&self, mu: &VertexDistribution, nu: &VertexDistribution) -> bool {
        let same = |m: BTreeMap<usize, Rational>, d: &VertexDistribution| {
            m.len() == d.support().len() && d.support().iter().all(|(v, w)| m.get(v) == Some(w))
        };
        same(self.source_marginal(), mu) && same(self.target_marginal(), nu)
    }
}

/// Exact W1 distance between `mu` and `nu` under the graph metric.
pub fn wasserstein1(g: &Graph, mu: &VertexDistribution, nu: &VertexDistribution) -> Result<Rational> {
    Ok(solve(g, mu, nu, None)?.cost)
}

/// A cost-optimal coupling of `mu` and `nu`.
pub fn optimal_coupling(
    g: &Graph,
    mu: &VertexDistribution,
    nu: &VertexDistribution,
) -> Result<TransportPlan> {
    solve(g, mu, nu, None)
}

/// Among cost-optimal couplings of `mu` and `nu`, one with the most mass on
/// pairs at distance `< d(x, y)`.
pub fn good_coupling_of(
    g: &Graph,
    mu: &VertexDistribution,
    nu: &VertexDistribution,
    x: usize,
    y: usize,
) -> Result<TransportPlan> {
    solve(g, mu, nu, Some((x, y)))
}

/// The optimal coupling of the lazy rows at `x` and `y` that puts the most
/// mass on pairs strictly closer than `(x, y)`.
pub fn good_optimal_coupling(g: &Graph, x: usize, y: usize) -> Result<TransportPlan> {
    if x == y {
        return Err(input_err!("good coupling needs two distinct vertices, got {x} twice"));
    }
    let (mu, nu) = (lazy_kernel_row(g, x)?, lazy_kernel_row(g, y)?);
    good_coupling_of(g, &mu, &nu, x, y)
}

/// BFS from `source`, stopping once every vertex in `targets` is reached.
fn distances_to(g: &Graph, source: usize, targets: &[usize]) -> Vec<Option<usize>> {
    let mut dist: Vec<Option<usize>> = vec![None; targets.len()];
    let mut seen = std::collections::HashMap::new();
    seen.insert(source, 0usize);
    let mut queue = std::collections::VecDeque::from([source]);
    let mut found = 0;
    let record = |v: usize, d: usize, dist: &mut Vec<Option<usize>>, found: &mut usize| {
        for (i, &t) in targets.iter().enumerate() {
            if t == v && dist[i].is_none() {
                dist[i] = Some(d);
                *found += 1;
            }
        }
    };
    record(source, 0, &mut dist, &mut found);
    while let Some(u) = queue.pop_front() {
        if found == targets.len() {
            break;
        }
        let d = seen[&u];
        for &w in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(w) {
                slot.insert(d + 1);
                record(w, d + 1, &mut dist, &mut found);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn solve(
    g: &Graph,
    mu: &VertexDistribution,
    nu: &VertexDistribution,
    reference: Option<(usize, usize)>,
) -> Result<TransportPlan> {
    mu.check_in(g)?;
    nu.check_in(g)?;
    let reference_distance = match reference {
        Some((x, y)) => Some(
            g.distance(x, y)?
                .finite()
                .ok_or_else(|| Error::MetricInfinite(format!("{x} and {y} are in different components")))?,
        ),
        None => None,
    };
    let targets: Vec<usize> = nu.support().iter().map(|(v, _)| *v).collect();
    let mut dist = Vec::with_capacity(mu.support().len());
    for (u, _) in mu.support() {
        let row = distances_to(g, *u, &targets);
        if let Some(i) = row.iter().position(Option::is_none) {
            return Err(Error::MetricInfinite(format!(
                "vertices {u} and {} are in different components",
                targets[i]
            )));
        }
        dist.push(row.into_iter().map(Option::unwrap).collect::<Vec<usize>>());
    }

    let lcm = common_denominator(mu.support().iter().chain(nu.support()).map(|(_, m)| m));
    let scale = lcm
        .to_i64()
        .filter(|&s| s < i64::MAX / 4)
        .ok_or_else(|| Error::Capability("common denominator too large for exact transport".into()))?;
    let supply: Vec<i64> = mu.support().iter().map(|(_, m)| scaled_units(m, &lcm)).collect::<Result<_>>()?;
    let demand: Vec<i64> = nu.support().iter().map(|(_, m)| scaled_units(m, &lcm)).collect::<Result<_>>()?;

    // Lexicographic objective: the distance term dominates because the
    // Gamma tie-breaker changes the total by less than `weight`.
    let weight = if reference.is_some() { scale + 1 } else { 1 };
    let max_distance = dist.iter().flatten().copied().max().unwrap_or(0) as i64;
    if max_distance.checked_mul(weight).and_then(|c| c.checked_add(1)).is_none() {
        return Err(Error::Capability("transport costs overflow".into()));
    }
    let arc_cost = |d: usize| -> i64 {
        let base = d as i64 * weight;
        match reference_distance {
            Some(rd) if d < rd => base,
            Some(_) => base + 1,
            None => base,
        }
    };

    let (m, k) = (supply.len(), demand.len());
    let (s, t) = (m + k, m + k + 1);
    let mut net = MinCostFlow::new(m + k + 2);
    for (i, &a) in supply.iter().enumerate() {
        net.add_arc(s, i, a, 0);
    }
    for (j, &b) in demand.iter().enumerate() {
        net.add_arc(m + j, t, b, 0);
    }
    let mut handles = Vec::with_capacity(m * k);
    for i in 0..m {
        for j in 0..k {
            handles.push((i, j, net.add_arc(i, m + j, scale, arc_cost(dist[i][j]))));
        }
    }
    let (flow, _) = net.run(s, t, scale);
    if flow != scale {
        return Err(Error::Invariant(format!("transport flow {flow} short of total {scale}")));
    }

    let denom = int(scale);
    let mut entries = Vec::new();
    let mut units = Vec::new();
    let mut cost_units: i128 = 0;
    let mut gamma_units: i128 = 0;
    for (i, j, h) in handles {
        let f = net.flow(h);
        if f == 0 {
            continue;
        }
        let d = dist[i][j];
        cost_units += i128::from(f) * d as i128;
        if reference_distance.is_some_and(|rd| d < rd) {
            gamma_units += i128::from(f);
        }
        entries.push(PlanEntry {
            source: mu.support()[i].0,
            target: nu.support()[j].0,
            mass: int(f) / &denom,
            distance: d,
        });
        units.push(f as u64);
    }
    let to_rational = |u: i128| Rational::new(BigInt::from(u), BigInt::from(scale));
    let plan = TransportPlan {
        entries,
        cost: to_rational(cost_units),
        gamma_mass: to_rational(gamma_units),
        reference,
        units,
        scale: scale as u64,
    };
    if !plan.has_marginals(mu, nu) {
        return Err(Error::Invariant("transport plan marginals do not match".into()));
    }
    Ok(plan)
}
