//! Independent reference computations used to freeze expected values.
//!
//! Nothing in here calls into the transport, spectral or walk code it
//! checks; they only share the graph representation.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;
use ricci_gap::graph::Graph;
use ricci_gap::rational::{int, Rational};

/// Distribution as `(vertex, mass)` pairs.
pub type Dist = Vec<(usize, Rational)>;

pub fn lazy_row(g: &Graph, x: usize, alpha: Rational) -> Dist {
    let deg = g.degree(x) as i64;
    let step = (int(1) - alpha.clone()) / int(deg);
    let mut row: Dist = g.neighbors(x).iter().map(|&y| (y, step.clone())).collect();
    if !alpha.is_zero() {
        row.push((x, alpha));
    }
    row
}

fn mass(d: &Dist, v: usize) -> Rational {
    d.iter().filter(|(u, _)| *u == v).map(|(_, m)| m.clone()).sum()
}

/// W1 by Kantorovich-Rubinstein duality: the maximum of
/// `sum f (mu - nu)` over integer-valued 1-Lipschitz `f` on the joint
/// support (integral optima exist because the constraint matrix is a
/// network matrix and distances are integers).
pub fn w1_dual(g: &Graph, mu: &Dist, nu: &Dist) -> Rational {
    let mut support: Vec<usize> = mu.iter().chain(nu).map(|(v, _)| *v).collect();
    support.sort_unstable();
    support.dedup();
    let dist: Vec<Vec<i64>> = support
        .iter()
        .map(|&u| {
            let row = g.bfs_distances(u);
            support.iter().map(|&v| row[v].expect("connected") as i64).collect()
        })
        .collect();
    let diam = dist.iter().flatten().copied().max().unwrap_or(0);
    let signed: Vec<Rational> = support.iter().map(|&v| mass(mu, v) - mass(nu, v)).collect();
    let mut f = vec![0i64; support.len()];
    let mut best: Option<Rational> = None;
    fn go(
        k: usize,
        f: &mut Vec<i64>,
        dist: &[Vec<i64>],
        diam: i64,
        signed: &[Rational],
        best: &mut Option<Rational>,
    ) {
        if k == f.len() {
            let value: Rational = f.iter().zip(signed).map(|(&fv, s)| int(fv) * s).sum();
            if best.as_ref().map_or(true, |b| value > *b) {
                *best = Some(value);
            }
            return;
        }
        for val in -diam..=diam {
            if (0..k).all(|j| (val - f[j]).abs() <= dist[k][j]) {
                f[k] = val;
                go(k + 1, f, dist, diam, signed, best);
            }
        }
    }
    // f(first) = 0 fixes the additive constant.
    go(1, &mut f, &dist, diam, &signed, &mut best);
    best.unwrap()
}

/// Enumerates every integer coupling at the common-denominator scale and
/// returns `(min cost, max Gamma-mass among min-cost plans)`, where Gamma is
/// the set of pairs strictly closer than `(x, y)`.
pub fn good_plan_brute_force(g: &Graph, mu: &Dist, nu: &Dist, x: usize, y: usize) -> (Rational, Rational) {
    let scale: BigInt = mu
        .iter()
        .chain(nu)
        .fold(BigInt::from(1), |acc, (_, m)| num_integer::Integer::lcm(&acc, m.denom()));
    let units = |d: &Dist| -> Vec<i64> {
        d.iter()
            .map(|(_, m)| {
                let s = m * Rational::from_integer(scale.clone());
                s.to_integer().try_into().unwrap()
            })
            .collect()
    };
    let (rows, cols) = (units(mu), units(nu));
    let dxy = g.bfs_distances(x)[y].unwrap() as i64;
    let dist: Vec<Vec<i64>> = mu
        .iter()
        .map(|(u, _)| {
            let row = g.bfs_distances(*u);
            nu.iter().map(|(v, _)| row[*v].unwrap() as i64).collect()
        })
        .collect();
    let mut best: Option<(i64, i64)> = None;
    let mut col_left = cols.clone();
    fn fill_row(
        i: usize,
        j: usize,
        row_left: i64,
        rows: &[i64],
        col_left: &mut Vec<i64>,
        dist: &[Vec<i64>],
        dxy: i64,
        acc: (i64, i64),
        best: &mut Option<(i64, i64)>,
    ) {
        if i == rows.len() {
            if col_left.iter().all(|&c| c == 0) {
                // minimize cost, then maximize gamma
                let cand = (acc.0, -acc.1);
                if best.map_or(true, |b| cand < (b.0, -b.1)) {
                    *best = Some(acc);
                }
            }
            return;
        }
        if j + 1 == col_left.len() {
            if row_left <= col_left[j] {
                col_left[j] -= row_left;
                let gamma = if dist[i][j] < dxy { row_left } else { 0 };
                let next = (acc.0 + row_left * dist[i][j], acc.1 + gamma);
                let following = if i + 1 < rows.len() { rows[i + 1] } else { 0 };
                fill_row(i + 1, 0, following, rows, col_left, dist, dxy, next, best);
                col_left[j] += row_left;
            }
            return;
        }
        for amount in 0..=row_left.min(col_left[j]) {
            col_left[j] -= amount;
            let gamma = if dist[i][j] < dxy { amount } else { 0 };
            let next = (acc.0 + amount * dist[i][j], acc.1 + gamma);
            fill_row(i, j + 1, row_left - amount, rows, col_left, dist, dxy, next, best);
            col_left[j] += amount;
        }
    }
    fill_row(0, 0, rows[0], &rows, &mut col_left, &dist, dxy, (0, 0), &mut best);
    let (c, gm) = best.unwrap();
    let s = Rational::from_integer(scale);
    (int(c) / s.clone(), int(gm) / s)
}

/// Lazy-walk eigenvalues of the `n x n` torus, enumerated from the
/// character formula `1/2 + (cos(2 pi j/n) + cos(2 pi k/n))/4`.
pub fn torus_spectrum(n: usize) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let c = (tau * j as f64 / n as f64).cos() + (tau * k as f64 / n as f64).cos();
            out.push(0.5 + c / 4.0);
        }
    }
    out
}

/// Number of torus eigenvalues strictly above `rho`, decided in integer-safe
/// fashion: the cosine sum is compared with `4 rho - 2`.
pub fn torus_count_above(n: usize, rho: f64) -> usize {
    torus_spectrum(n).into_iter().filter(|&l| l > rho).count()
}

pub fn cycle_spectrum(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 + (std::f64::consts::TAU * k as f64 / n as f64).cos() / 2.0)
        .collect()
}

/// Law of the distance from the root for the lazy walk on the infinite
/// `d`-regular tree, by layer recursion. `law[t][k] = P(|X_t| = k)`.
pub fn tree_distance_law(d: usize, t_max: usize) -> Vec<Vec<f64>> {
    let df = d as f64;
    let mut law = vec![vec![1.0]];
    for _ in 0..t_max {
        let prev = law.last().unwrap();
        let mut next = vec![0.0; prev.len() + 1];
        for (k, &p) in prev.iter().enumerate() {
            next[k] += p / 2.0;
            if k == 0 {
                next[1] += p / 2.0;
            } else {
                next[k + 1] += p / 2.0 * (df - 1.0) / df;
                next[k - 1] += p / 2.0 / df;
            }
        }
        law.push(next);
    }
    law
}

/// Entropy of the lazy walk on the `d`-regular tree after `t` steps. Mass at
/// distance `k` is spread uniformly over the `d (d-1)^(k-1)` vertices there.
pub fn tree_entropy(d: usize, t: usize) -> f64 {
    let law = tree_distance_law(d, t);
    law[t]
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(k, &p)| {
            let layer = if k == 0 {
                0.0
            } else {
                (d as f64).ln() + (k as f64 - 1.0) * ((d - 1) as f64).ln()
            };
            -p * (p.ln() - layer)
        })
        .sum()
}

pub fn tree_return_probability(d: usize, t: usize) -> f64 {
    tree_distance_law(d, t)[t][0]
}

/// Row `o` of the `t`-th power of the lazy kernel, by exact dense matrix
/// products.
pub fn lazy_power_row(g: &Graph, o: usize, t: usize) -> Vec<Rational> {
    let n = g.vertex_count();
    let mut row: Vec<Rational> = (0..n).map(|v| if v == o { int(1) } else { int(0) }).collect();
    for _ in 0..t {
        let mut next = vec![int(0); n];
        for x in 0..n {
            if row[x].is_zero() {
                continue;
            }
            let half = &row[x] / int(2);
            next[x] += half.clone();
            let share = half / int(g.degree(x) as i64);
            for &y in g.neighbors(x) {
                next[y] += share.clone();
            }
        }
        row = next;
    }
    row
}

/// Lazy-walk eigenvalues of `K_n`: one, and `1/2 - 1/(2(n-1))` with
/// multiplicity `n - 1`.
pub fn complete_spectrum(n: usize) -> Vec<f64> {
    let mut out = vec![0.5 - 0.5 / (n as f64 - 1.0); n];
    out[0] = 1.0;
    out
}

/// Connected irregular test graph: a random recursive tree plus `extra`
/// random chords.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    use ricci_gap::generators::{stream, uniform_below};
    let mut rng = stream(seed, 0);
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = uniform_below(&mut rng, v as u64) as usize;
        edges.insert((u, v));
    }
    let mut tries = 0;
    while edges.len() < n - 1 + extra && tries < 100 * (extra + 1) {
        tries += 1;
        let a = uniform_below(&mut rng, n as u64) as usize;
        let b = uniform_below(&mut rng, n as u64) as usize;
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Root-preserving isomorphism of two small graphs (root = vertex 0) by
/// trying every permutation of the non-root vertices.
pub fn rooted_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() || a.degree(0) != b.degree(0) {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn go(k: usize, perm: &mut Vec<usize>, a: &Graph, b: &Graph) -> bool {
        let n = perm.len();
        if k == n {
            return a.edges().all(|(u, v)| b.has_edge(perm[u], perm[v]));
        }
        for i in k..n {
            perm.swap(k, i);
            let ok = (0..k).all(|j| a.has_edge(j, k) == b.has_edge(perm[j], perm[k]))
                && a.degree(k) == b.degree(perm[k]);
            if ok && go(k + 1, perm, a, b) {
                return true;
            }
            perm.swap(k, i);
        }
        false
    }
    go(1, &mut perm, a, b)
}
