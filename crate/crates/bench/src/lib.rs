//! Benchmark inputs shared by the criterion targets in `benches/`.

use ricci_gap::generators::generate;
use ricci_gap::{FamilySpec, Graph};

pub fn random_cubic(n: usize) -> Graph {
    generate(&FamilySpec::RandomRegular { n, d: 3, seed: 1 }).expect("cubic graph")
}

pub fn torus(side: usize) -> Graph {
    generate(&FamilySpec::Torus2d { n: side }).expect("torus")
}

pub fn hypercube(d: usize) -> Graph {
    generate(&FamilySpec::Hypercube { d }).expect("hypercube")
}
