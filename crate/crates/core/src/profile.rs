//! Local profiles of finite graphs: the law of the depth-`t` ball around a
//! uniformly chosen root, distances between such laws, and exact checks of
//! mass transport and stationarity.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::canon::{canonical_code, CanonicalCode};
use crate::error::{input_err, Error, Result};
use crate::graph::{ball, degree_log_sum, Graph, RootedBall};
use crate::rational::{int, to_f64, Rational};

/// Balls larger than this are refused by the census.
pub const BALL_VERTEX_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct CensusClass {
    pub count: usize,
    pub frequency: Rational,
    pub representative: RootedBall,
}

/// Isomorphism classes of depth-`depth` balls with their exact frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCensus {
    pub depth: usize,
    pub vertex_count: usize,
    pub classes: BTreeMap<CanonicalCode, CensusClass>,
}

impl BallCensus {
    pub fn frequency(&self, code: &CanonicalCode) -> Rational {
        self.classes
            .get(code)
            .map_or_else(Rational::zero, |c| c.frequency.clone())
    }

    /// Average of `deg(root) ln deg(root)` under the census. Equal to the
    /// sparsity functional of the graph whenever `depth >= 1`.
    /// Root degrees are only visible from depth one on; at depth zero this is 0.
    pub fn sparsity_functional(&self) -> f64 {
        let mut histogram = BTreeMap::new();
        for c in self.classes.values() {
            *histogram.entry(c.representative.root_degree()).or_insert(0usize) += c.count;
        }
        degree_log_sum(&histogram) / self.vertex_count as f64
    }

    /// Code (hex) to frequency.
    pub fn frequencies(&self) -> BTreeMap<String, Rational> {
        self.classes
            .iter()
            .map(|(code, c)| (code.to_hex(), c.frequency.clone()))
            .collect()
    }
}

pub fn ball_census(g: &Graph, depth: usize) -> Result<BallCensus> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(input_err!("census of the empty graph"));
    }
    let coded: Vec<(CanonicalCode, RootedBall)> = (0..n)
        .into_par_iter()
        .map(|o| {
            let b = ball(g, o, depth)?;
            if b.vertex_count() > BALL_VERTEX_LIMIT {
                return Err(Error::Capability(format!(
                    "depth-{depth} ball at vertex {o} has {} vertices (limit {BALL_VERTEX_LIMIT})",
                    b.vertex_count()
                )));
            }
            Ok((canonical_code(&b)?, b))
        })
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<CanonicalCode, CensusClass> = BTreeMap::new();
    for (code, b) in coded {
        classes
            .entry(code)
            .or_insert_with(|| CensusClass {
                count: 0,
                frequency: Rational::zero(),
                representative: b,
            })
            .count += 1;
    }
    for c in classes.values_mut() {
        c.frequency = int(c.count as i64) / int(n as i64);
    }
    Ok(BallCensus { depth, vertex_count: n, classes })
}

/// Total-variation distance between two censuses of the same depth.
pub fn census_tv(a: &BallCensus, b: &BallCensus) -> Result<Rational> {
    if a.depth != b.depth {
        return Err(input_err!("censuses at depths {} and {} are not comparable", a.depth, b.depth));
    }
    let codes: BTreeSet<&CanonicalCode> = a.classes.keys().chain(b.classes.keys()).collect();
    let sum: Rational = codes
        .into_iter()
        .map(|c| (a.frequency(c) - b.frequency(c)).abs())
        .sum();
    Ok(sum / int(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDistance {
    /// `(t, TV distance of the depth-t censuses)` for `t = 0..=t_max`.
    pub per_depth_tv: Vec<(usize, Rational)>,
    /// `sum_t 2^-t tv_t`.
    pub aggregate: f64,
}

pub fn profile_distance(g: &Graph, h: &Graph, t_max: usize) -> Result<ProfileDistance> {
    let mut per_depth_tv = Vec::with_capacity(t_max + 1);
    let mut aggregate = 0.0;
    for t in 0..=t_max {
        let tv = census_tv(&ball_census(g, t)?, &ball_census(h, t)?)?;
        aggregate += to_f64(&tv) * 0.5f64.powi(t as i32);
        per_depth_tv.push((t, tv));
    }
    Ok(ProfileDistance { per_depth_tv, aggregate })
}

/// Induced neighborhood of two marked roots: every vertex within `radius`
/// of either root.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyRootedBall {
    pub subgraph: Graph,
    /// Index of the first root (the sender) in `subgraph`.
    pub first: usize,
    /// Index of the second root (the receiver) in `subgraph`.
    pub second: usize,
    pub radius: usize,
    /// Host-graph index of every vertex.
    pub origin: Vec<usize>,
    /// Distance between the roots in the host graph.
    pub root_distance: usize,
}

impl DoublyRootedBall {
    pub fn first_degree(&self) -> usize {
        self.subgraph.degree(self.first)
    }

    pub fn second_degree(&self) -> usize {
        self.subgraph.degree(self.second)
    }
}

fn doubly_rooted(
    g: &Graph,
    o: usize,
    x: usize,
    radius: usize,
    dist: &[Vec<Option<usize>>],
) -> DoublyRootedBall {
    let mut members: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| {
            dist[o][v].is_some_and(|d| d <= radius) || dist[x][v].is_some_and(|d| d <= radius)
        })
        .collect();
    // roots first, then the rest in index order
    members.retain(|&v| v != o && v != x);
    let mut order = vec![o];
    if x != o {
        order.push(x);
    }
    order.extend(members);
    DoublyRootedBall {
        subgraph: g.induced(&order),
        first: 0,
        second: if x == o { 0 } else { 1 },
        radius,
        root_distance: dist[o][x].expect("pairs are taken within the radius"),
        origin: order,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MtpCheck<T> {
    /// Average mass sent by the root.
    pub sent: T,
    /// Average mass received by the root.
    pub received: T,
    pub equal: bool,
}

/// Evaluates `f` on every ordered pair at distance at most `radius`.
///
/// `f` must only look at the doubly rooted ball it receives and must vanish
/// when the roots are farther apart than `radius`; violations of this
/// locality contract are not detected.
fn mtp_sums<T, F>(g: &Graph, radius: usize, f: F) -> Result<(Vec<T>, Vec<T>)>
where
    T: Send,
    F: Fn(&DoublyRootedBall) -> T + Sync,
{
    let n = g.vertex_count();
    if n == 0 {
        return Err(input_err!("mass transport check on the empty graph"));
    }
    let dist: Vec<Vec<Option<usize>>> = (0..n).into_par_iter().map(|o| g.bfs_bounded(o, 2 * radius + 1)).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|o| (0..n).map(move |x| (o, x)))
        .filter(|&(o, x)| dist[o][x].is_some_and(|d| d <= radius))
        .collect();
    let sent = pairs.par_iter().map(|&(o, x)| f(&doubly_rooted(g, o, x, radius, &dist))).collect();
    let received = pairs.par_iter().map(|&(o, x)| f(&doubly_rooted(g, x, o, radius, &dist))).collect();
    Ok((sent, received))
}

/// Exact mass transport check with a rational-valued transport function.
pub fn verify_mtp<F>(g: &Graph, radius: usize, f: F) -> Result<MtpCheck<Rational>>
where
    F: Fn(&DoublyRootedBall) -> Rational + Sync,
{
    let (sent, received) = mtp_sums(g, radius, f)?;
    let n = int(g.vertex_count() as i64);
    let sent: Rational = sent.into_iter().sum::<Rational>() / n.clone();
    let received: Rational = received.into_iter().sum::<Rational>() / n;
    if sent.is_negative() || received.is_negative() {
        return Err(input_err!("transport function took negative values"));
    }
    let equal = sent == received;
    Ok(MtpCheck { sent, received, equal })
}

/// Floating-point mass transport check; equality within `1e-12` (relative to
/// the larger side when that exceeds one).
pub fn verify_mtp_f64<F>(g: &Graph, radius: usize, f: F) -> Result<MtpCheck<f64>>
where
    F: Fn(&DoublyRootedBall) -> f64 + Sync,
{
    let (sent, received) = mtp_sums(g, radius, f)?;
    let n = g.vertex_count() as f64;
    let sent = sent.iter().sum::<f64>() / n;
    let received = received.iter().sum::<f64>() / n;
    let scale = sent.abs().max(received.abs()).max(1.0);
    let equal = (sent - received).abs() <= 1e-12 * scale;
    Ok(MtpCheck { sent, received, equal })
}

/// `max_y |sum_x pi(x) P(x, y) - pi(y)|` for `pi(x) = deg(x) / sum deg`, exactly.
pub fn verify_stationarity(g: &Graph) -> Result<Rational> {
    if g.is_empty() {
        return Err(input_err!("stationarity of the empty graph"));
    }
    g.check_no_isolated()?;
    let total = int(2 * g.edge_count() as i64);
    let pi = |x: usize| int(g.degree(x) as i64) / total.clone();
    let half = Rational::new(1.into(), 2.into());
    let residuals: Vec<Rational> = (0..g.vertex_count())
        .into_par_iter()
        .map(|y| {
            let mut mass = pi(y) * half.clone();
            for &x in g.neighbors(y) {
                mass += pi(x) * half.clone() / int(g.degree(x) as i64);
            }
            (mass - pi(y)).abs()
        })
        .collect();
    Ok(residuals.into_iter().max().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};
    use crate::rational::ratio;

    fn g(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    #[test]
    fn census_examples() {
        let c = ball_census(&g(FamilySpec::Torus2d { n: 6 }), 2).unwrap();
        assert_eq!(c.classes.len(), 1);
        let star = ball_census(&g(FamilySpec::Star { n: 3 }), 1).unwrap();
        let mut f: Vec<Rational> = star.classes.values().map(|c| c.frequency.clone()).collect();
        f.sort();
        assert_eq!(f, vec![ratio(1, 4), ratio(3, 4)]);
        let path = ball_census(&g(FamilySpec::Path { n: 4 }), 1).unwrap();
        assert!(path.classes.values().all(|c| c.frequency == ratio(1, 2)));
    }

    #[test]
    fn census_sparsity_matches_graph() {
        let h = g(FamilySpec::RegularTreeTruncation { d: 3, depth: 3 });
        let c = ball_census(&h, 1).unwrap();
        let direct = crate::graph::sparsity_functional(&h).unwrap();
        assert!((c.sparsity_functional() - direct).abs() < 1e-12);
    }

    #[test]
    fn cycles_locally_agree() {
        let d = profile_distance(&g(FamilySpec::Cycle { n: 100 }), &g(FamilySpec::Cycle { n: 101 }), 10).unwrap();
        assert!(d.per_depth_tv.iter().all(|(_, tv)| tv.is_zero()));
        assert_eq!(d.aggregate, 0.0);
        let d = profile_distance(&g(FamilySpec::Cycle { n: 6 }), &g(FamilySpec::Cycle { n: 100 }), 3).unwrap();
        assert_eq!(d.per_depth_tv[3].1, ratio(1, 1));
        assert!(d.per_depth_tv[2].1.is_zero());
    }

    #[test]
    fn mtp_examples() {
        let star = g(FamilySpec::Star { n: 3 });
        let adjacent = |b: &DoublyRootedBall| int((b.root_distance == 1) as i64);
        let r = verify_mtp(&star, 1, adjacent).unwrap();
        assert_eq!((r.sent.clone(), r.equal), (ratio(3, 2), true));
        let degree_weighted = |b: &DoublyRootedBall| {
            int(((b.root_distance == 1) as usize * b.first_degree()) as i64)
        };
        let r = verify_mtp(&star, 1, degree_weighted).unwrap();
        // (1/|V|) sum deg^2 = (9 + 3) / 4
        assert_eq!(r.sent, ratio(3, 1));
        assert!(r.equal);
        let hub_sends = |b: &DoublyRootedBall| int((b.root_distance == 1 && b.first_degree() == 3) as i64);
        let r = verify_mtp(&star, 1, hub_sends).unwrap();
        assert_eq!((r.sent, r.received, r.equal), (ratio(3, 4), ratio(3, 4), true));
    }

    #[test]
    fn stationarity() {
        assert!(verify_stationarity(&g(FamilySpec::Petersen)).unwrap().is_zero());
        assert!(verify_stationarity(&g(FamilySpec::Star { n: 3 })).unwrap().is_zero());
        assert!(verify_stationarity(&Graph::empty(3)).is_err());
    }
}
