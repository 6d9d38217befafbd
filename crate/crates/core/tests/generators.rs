mod oracles;

use ricci_gap::error::Error;
use ricci_gap::generators::{generate, regular_tree_size, FamilySpec};
use ricci_gap::graph::Graph;

fn family(spec: FamilySpec) -> Graph {
    generate(&spec).unwrap()
}

fn degrees(g: &Graph) -> Vec<usize> {
    g.degrees().collect()
}

#[test]
fn prism3() {
    let g = family(FamilySpec::Prism { n: 3 });
    assert_eq!((g.vertex_count(), g.edge_count()), (6, 9));
    assert!(g.degrees().all(|d| d == 3));
}

#[test]
fn smallest_mobius_ladder_is_k4() {
    let m = family(FamilySpec::MobiusLadder { n: 2 });
    let k4 = family(FamilySpec::Complete { n: 4 });
    assert!(oracles::rooted_isomorphic(&m, &k4));
}

#[test]
fn ladders_are_cubic_and_distinct_from_prisms() {
    for n in 3..9 {
        let m = family(FamilySpec::MobiusLadder { n });
        let p = family(FamilySpec::Prism { n });
        assert_eq!((m.vertex_count(), m.edge_count()), (2 * n, 3 * n));
        assert!(m.degrees().chain(p.degrees()).all(|d| d == 3));
        assert!(m.is_connected() && p.is_connected());
    }
    // the ladder on six vertices is K_{3,3}
    let k33 = family(FamilySpec::CompleteBipartite { a: 3, b: 3 });
    let m3 = family(FamilySpec::MobiusLadder { n: 3 });
    assert!(oracles::rooted_isomorphic(&m3, &k33));
}

#[test]
fn random_regular_is_simple_and_regular() {
    let g = family(FamilySpec::RandomRegular { n: 100, d: 3, seed: 7 });
    assert_eq!(g.vertex_count(), 100);
    assert!(g.degrees().all(|d| d == 3));
    assert_eq!(Graph::from_edges(100, g.edges()).unwrap(), g);
}

#[test]
fn same_spec_same_graph() {
    for spec in [
        FamilySpec::RandomRegular { n: 60, d: 4, seed: 3 },
        FamilySpec::RandomRegular { n: 50, d: 3, seed: 0 },
        FamilySpec::Hypercube { d: 5 },
    ] {
        assert_eq!(family(spec.clone()), family(spec));
    }
    assert_ne!(
        family(FamilySpec::RandomRegular { n: 60, d: 4, seed: 3 }),
        family(FamilySpec::RandomRegular { n: 60, d: 4, seed: 4 })
    );
}

#[test]
fn torus_is_the_abelian_cayley_graph() {
    let t = family(FamilySpec::Torus2d { n: 5 });
    let c = family(FamilySpec::CayleyAbelian {
        orders: vec![5, 5],
        generators: vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
    });
    assert_eq!(t.edges().collect::<Vec<_>>(), c.edges().collect::<Vec<_>>());
    let half = family(FamilySpec::CayleyAbelian { orders: vec![5, 5], generators: vec![vec![1, 0], vec![0, 1]] });
    assert_eq!(half, c);
}

#[test]
fn tree_shape() {
    for (d, depth) in [(3, 1), (3, 5), (4, 4), (5, 3)] {
        let g = family(FamilySpec::RegularTreeTruncation { d, depth });
        let expected = 1 + d * ((d - 1).pow(depth as u32) - 1) / (d - 2);
        assert_eq!(g.vertex_count(), expected);
        assert_eq!(regular_tree_size(d, depth), Some(expected));
        assert_eq!(g.degree(0), d);
        assert_eq!(g.edge_count(), expected - 1);
        let dist = g.bfs_distances(0);
        for v in 1..expected {
            let want = if dist[v] == Some(depth) { 1 } else { d };
            assert_eq!(g.degree(v), want);
        }
    }
    assert!(matches!(
        generate(&FamilySpec::RegularTreeTruncation { d: 3, depth: 40 }),
        Err(Error::Capability(_))
    ));
}

#[test]
fn cube_and_torus_shapes() {
    for d in 1..8 {
        let g = family(FamilySpec::Hypercube { d });
        assert_eq!(g.vertex_count(), 1 << d);
        assert!(g.degrees().all(|x| x == d));
    }
    for n in 3..9 {
        let g = family(FamilySpec::Torus2d { n });
        assert_eq!(g.vertex_count(), n * n);
        assert!(g.degrees().all(|x| x == 4));
    }
    let grid = family(FamilySpec::Grid2d { n: 4 });
    assert_eq!(grid.edge_count(), 24);
    assert_eq!(degrees(&grid).iter().filter(|&&d| d == 2).count(), 4);
}

#[test]
fn parameter_validation() {
    let bad = [
        FamilySpec::Prism { n: 2 },
        FamilySpec::Cycle { n: 2 },
        FamilySpec::RandomRegular { n: 7, d: 3, seed: 1 },
        FamilySpec::RandomRegular { n: 4, d: 4, seed: 1 },
        FamilySpec::CayleyAbelian { orders: vec![4], generators: vec![vec![0]] },
        FamilySpec::CayleyAbelian { orders: vec![4], generators: vec![vec![1, 0]] },
        FamilySpec::Torus2d { n: 2 },
    ];
    for spec in bad {
        assert!(matches!(generate(&spec), Err(Error::Input(_))), "{spec}");
    }
}

#[test]
fn spec_json_shape() {
    let spec: FamilySpec = serde_json::from_str(r#"{"family": "random_regular", "n": 10, "d": 3, "seed": 2}"#).unwrap();
    assert_eq!(spec, FamilySpec::RandomRegular { n: 10, d: 3, seed: 2 });
    assert_eq!(spec.to_string(), "random_regular(n=10;d=3;seed=2)");
    let petersen: FamilySpec = serde_json::from_str(r#"{"family": "petersen"}"#).unwrap();
    let g = family(petersen);
    assert_eq!((g.vertex_count(), g.edge_count()), (10, 15));
}
