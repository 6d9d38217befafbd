mod oracles;

use num_traits::{One, Zero};
use proptest::prelude::*;
use ricci_gap::generators::{generate, stream, uniform_below, FamilySpec};
use ricci_gap::graph::{sparsity_functional, Graph};
use ricci_gap::profile::{
    ball_census, census_tv, profile_distance, verify_mtp, verify_mtp_f64, verify_stationarity, DoublyRootedBall,
};
use ricci_gap::rational::{int, ratio, Rational};

fn family(spec: FamilySpec) -> Graph {
    generate(&spec).unwrap()
}

fn mixed_graphs() -> Vec<Graph> {
    (0..20u64)
        .map(|i| match i % 5 {
            0 => family(FamilySpec::RandomRegular { n: 20 + 2 * i as usize, d: 3, seed: i }),
            1 => family(FamilySpec::Grid2d { n: 3 + i as usize / 5 }),
            _ => oracles::random_connected(10 + i as usize, 3 + i as usize / 2, 200 + i),
        })
        .collect()
}

#[test]
fn census_examples() {
    for spec in [FamilySpec::Petersen, FamilySpec::Torus2d { n: 6 }, FamilySpec::Cycle { n: 9 }] {
        let c = ball_census(&family(spec), 2).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes.values().next().unwrap().frequency, int(1));
    }
    let star = ball_census(&family(FamilySpec::Star { n: 3 }), 1).unwrap();
    let mut freqs: Vec<Rational> = star.classes.values().map(|c| c.frequency.clone()).collect();
    freqs.sort();
    assert_eq!(freqs, vec![ratio(1, 4), ratio(3, 4)]);
    let path = ball_census(&family(FamilySpec::Path { n: 4 }), 1).unwrap();
    assert!(path.classes.values().all(|c| c.frequency == ratio(1, 2)));
    assert_eq!(path.classes.len(), 2);
}

#[test]
fn census_invariants() {
    for g in mixed_graphs() {
        let mut prev = 0;
        for t in 0..4 {
            let c = ball_census(&g, t).unwrap();
            let total: Rational = c.classes.values().map(|k| k.frequency.clone()).sum();
            assert_eq!(total, Rational::one());
            assert_eq!(c.classes.values().map(|k| k.count).sum::<usize>(), g.vertex_count());
            assert!(c.classes.len() >= prev);
            prev = c.classes.len();
            for cls in c.classes.values() {
                assert_eq!(cls.frequency, int(cls.count as i64) / int(g.vertex_count() as i64));
            }
        }
        let c1 = ball_census(&g, 1).unwrap();
        assert_eq!(c1.sparsity_functional(), sparsity_functional(&g).unwrap());
    }
}

#[test]
fn distance_examples() {
    let g = oracles::random_connected(30, 10, 5);
    assert!(profile_distance(&g, &g, 3).unwrap().per_depth_tv.iter().all(|(_, tv)| tv.is_zero()));
    let c100 = family(FamilySpec::Cycle { n: 100 });
    let c101 = family(FamilySpec::Cycle { n: 101 });
    let d = profile_distance(&c100, &c101, 10).unwrap();
    assert!(d.per_depth_tv.iter().all(|(_, tv)| tv.is_zero()));
    assert_eq!(d.aggregate, 0.0);
    let c6 = family(FamilySpec::Cycle { n: 6 });
    let d = profile_distance(&c6, &c100, 3).unwrap();
    assert_eq!(d.per_depth_tv[3], (3, int(1)));
    assert_eq!(d.per_depth_tv[2], (2, int(0)));
    assert_eq!(d.aggregate, 0.125);
}

#[test]
fn tv_weakly_increases_with_depth() {
    let graphs = mixed_graphs();
    for pair in graphs.windows(2) {
        let d = profile_distance(&pair[0], &pair[1], 3).unwrap();
        assert!(d.per_depth_tv.windows(2).all(|w| w[0].1 <= w[1].1));
        assert!(d.per_depth_tv.iter().all(|(_, tv)| tv >= &Rational::zero() && tv <= &Rational::one()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tv_is_a_pseudometric(a in 0u64..500, b in 0u64..500, c in 0u64..500, t in 0usize..3) {
        let cs: Vec<_> = [a, b, c]
            .iter()
            .map(|&s| ball_census(&oracles::random_connected(8 + (s % 5) as usize, (s % 4) as usize, s), t).unwrap())
            .collect();
        let d = |i: usize, j: usize| census_tv(&cs[i], &cs[j]).unwrap();
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2));
        prop_assert!(d(0, 0).is_zero());
    }
}

#[test]
fn mtp_examples() {
    let g = oracles::random_connected(25, 9, 1);
    let adjacent = |b: &DoublyRootedBall| if b.root_distance == 1 { int(1) } else { int(0) };
    let r = verify_mtp(&g, 1, adjacent).unwrap();
    assert!(r.equal);
    assert_eq!(r.sent, int(2 * g.edge_count() as i64) / int(25));

    let weighted = |b: &DoublyRootedBall| {
        if b.root_distance == 1 {
            int(b.first_degree() as i64)
        } else {
            int(0)
        }
    };
    let r = verify_mtp(&g, 1, weighted).unwrap();
    let squares: usize = g.degrees().map(|d| d * d).sum();
    assert!(r.equal);
    assert_eq!(r.sent, int(squares as i64) / int(25));

    let star = family(FamilySpec::Star { n: 3 });
    let hub = |b: &DoublyRootedBall| {
        if b.root_distance == 1 && b.first_degree() == 3 {
            int(1)
        } else {
            int(0)
        }
    };
    let r = verify_mtp(&star, 1, hub).unwrap();
    assert_eq!((r.sent.clone(), r.received.clone()), (ratio(3, 4), ratio(3, 4)));
    assert!(r.equal);
}

/// A transport function drawn at random from isomorphism-invariant features
/// of the doubly rooted ball.
fn random_callback(seed: u64) -> (usize, impl Fn(&DoublyRootedBall) -> Rational + Sync) {
    let mut rng = stream(seed, 1);
    let radius = 1 + uniform_below(&mut rng, 2) as usize;
    let c: Vec<i64> = (0..6).map(|_| uniform_below(&mut rng, 7) as i64).collect();
    let target = uniform_below(&mut rng, radius as u64 + 1) as usize;
    let den = 1 + uniform_below(&mut rng, 5) as i64;
    let f = move |b: &DoublyRootedBall| {
        let (d1, d2) = (b.first_degree() as i64, b.second_degree() as i64);
        let common = (0..b.subgraph.vertex_count())
            .filter(|&v| b.subgraph.has_edge(v, b.first) && b.subgraph.has_edge(v, b.second))
            .count() as i64;
        let mut v = c[0] * d1 + c[1] * d2 * d2 + c[2] * common + c[3] * b.subgraph.edge_count() as i64;
        if b.root_distance == target {
            v += c[4] * (d1 * d2 + 1);
        }
        if d1 > d2 {
            v += c[5];
        }
        Rational::new(v.into(), den.into())
    };
    (radius, f)
}

#[test]
fn mtp_holds_for_random_local_callbacks() {
    let graphs = mixed_graphs();
    for (gi, g) in graphs.iter().enumerate() {
        for k in 0..100u64 {
            let (radius, f) = random_callback(1000 * gi as u64 + k);
            let r = verify_mtp(g, radius, f).unwrap();
            assert!(r.equal, "graph {gi} callback {k}: {} vs {}", r.sent, r.received);
        }
    }
}

#[test]
fn float_mtp() {
    let g = oracles::random_connected(30, 12, 2);
    let r = verify_mtp_f64(&g, 2, |b| (b.first_degree() as f64).ln() + b.root_distance as f64 / 3.0).unwrap();
    assert!(r.equal);
}

#[test]
fn stationarity_is_exact() {
    let star = family(FamilySpec::Star { n: 3 });
    assert!(verify_stationarity(&star).unwrap().is_zero());
    for g in mixed_graphs() {
        assert!(verify_stationarity(&g).unwrap().is_zero());
    }
    let isolated = Graph::from_edges(3, [(0, 1)]).unwrap();
    assert!(verify_stationarity(&isolated).is_err());
}
