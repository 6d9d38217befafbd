//! Spectrum of the lazy random walk and the spectral measures built from it.
//!
//! `P` is diagonalized through its symmetric conjugate
//! `S = D^{1/2} P D^{-1/2}`, whose entries are `1/2` on the diagonal and
//! `1 / (2 sqrt(deg x deg y))` on edges. If `psi_i` are orthonormal
//! eigenvectors of `S`, then `phi_i = D^{-1/2} psi_i` are eigenvectors of `P`,
//! orthonormal for `<f, g> = sum_o deg(o) f(o) g(o)`, and the local measure
//! at `o` puts weight `deg(o) phi_i(o)^2 = psi_i(o)^2` on `lambda_i`.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph accepted by the dense eigensolver.
pub const DENSE_VERTEX_LIMIT: usize = 5000;
/// Eigenvalues this far outside `[0, 1]` are clamped; farther is an error.
pub const CLAMP_TOLERANCE: f64 = 1e-9;
/// Eigenvalues closer than this are merged into one atom.
pub const MERGE_TOLERANCE: f64 = 1e-9;
/// Orthonormality and eigen-equation residual limit.
pub const BASIS_TOLERANCE: f64 = 1e-8;
/// Slack on spectral-measure weights (they sum to one within this).
pub const WEIGHT_TOLERANCE: f64 = 1e-10;

/// Lazy-walk eigenvalues in descending order, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenvalues strictly above `rho`. Eigenvalues within
    /// [`MERGE_TOLERANCE`] of `rho` count as equal to it.
    pub fn count_above(&self, rho: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > rho + MERGE_TOLERANCE).count()
    }

    /// Number of eigenvalues at or above `rho`, with the same tie rule.
    pub fn count_at_least(&self, rho: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l >= rho - MERGE_TOLERANCE).count()
    }

    /// Second largest eigenvalue, if there are at least two.
    pub fn lambda2(&self) -> Option<f64> {
        self.eigenvalues.get(1).copied()
    }

    /// Uniform measure on the eigenvalues, atoms merged.
    pub fn empirical_distribution(&self) -> SpectralMeasure {
        let w = 1.0 / self.len() as f64;
        SpectralMeasure::from_sorted(self.eigenvalues.iter().map(|&l| (l, w)))
    }
}

/// Finitely many weighted atoms on `[0, 1]`, sorted by descending location.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl SpectralMeasure {
    /// Merges consecutive atoms (input sorted descending) closer than
    /// [`MERGE_TOLERANCE`]; the merged location is the weight-free mean.
    fn from_sorted(atoms: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut groups: Vec<(f64, f64, usize, f64)> = Vec::new(); // (sum of lambdas, weight, count, last)
        for (l, w) in atoms {
            match groups.last_mut() {
                Some(g) if g.3 - l <= MERGE_TOLERANCE => {
                    g.0 += l;
                    g.1 += w;
                    g.2 += 1;
                    g.3 = l;
                }
                _ => groups.push((l, w, 1, l)),
            }
        }
        SpectralMeasure {
            atoms: groups.into_iter().map(|(s, w, c, _)| (s / c as f64, w)).collect(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `integral of lambda^t`.
    pub fn moment(&self, t: u32) -> f64 {
        self.atoms.iter().map(|&(l, w)| w * l.powi(t as i32)).sum()
    }

    /// Mass of the closed interval `[rho, 1]`, atoms within [`MERGE_TOLERANCE`] of `rho` included.
    pub fn mass_at_least(&self, rho: f64) -> f64 {
        self.atoms.iter().filter(|a| a.0 >= rho - MERGE_TOLERANCE).map(|a| a.1).sum()
    }

    /// Weight of the atom at `lambda` (within the merge tolerance), zero if absent.
    pub fn weight_at(&self, lambda: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| (a.0 - lambda).abs() <= MERGE_TOLERANCE)
            .map(|a| a.1)
            .sum()
    }
}

/// Orthonormal eigenbasis of `P` for the degree-weighted inner product.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors `phi_i` of `P`, in eigenvalue order.
    pub vectors: DMatrix<f64>,
    /// Orthonormal eigenvectors of the symmetric conjugate.
    symmetric_vectors: DMatrix<f64>,
    /// Index ranges of eigenvalues merged into one atom.
    groups: Vec<std::ops::Range<usize>>,
}

impl EigenBasis {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            eigenvalues: self.eigenvalues.clone(),
        }
    }

    /// Atoms `(lambda, deg(o) |phi(o)|^2)` aggregated per distinct eigenvalue,
    /// which makes the weights independent of the basis chosen inside an
    /// eigenspace.
    pub fn local_measure(&self, o: usize) -> SpectralMeasure {
        let atoms = self
            .groups
            .iter()
            .map(|r| {
                let location = r.clone().map(|i| self.eigenvalues[i]).sum::<f64>() / r.len() as f64;
                let weight = r.clone().map(|i| self.symmetric_vectors[(o, i)].powi(2)).sum();
                (location, weight)
            })
            .collect();
        SpectralMeasure { atoms }
    }

    pub fn delocalization_fraction(&self, rho: f64, eps: f64) -> f64 {
        let n = self.eigenvalues.len();
        let count = (0..n)
            .into_par_iter()
            .filter(|&o| self.local_measure(o).mass_at_least(rho) <= eps + WEIGHT_TOLERANCE)
            .count();
        count as f64 / n as f64
    }
}

fn check_dense(g: &Graph) -> Result<()> {
    if g.vertex_count() > DENSE_VERTEX_LIMIT {
        return Err(Error::Capability(format!(
            "dense eigensolve limited to {DENSE_VERTEX_LIMIT} vertices, graph has {}",
            g.vertex_count()
        )));
    }
    if g.is_empty() {
        return Err(Error::Input("spectrum of the empty graph".into()));
    }
    g.check_no_isolated()
}

/// The symmetric conjugate `D^{1/2} P D^{-1/2}` as a dense matrix.
pub fn symmetric_kernel(g: &Graph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let sqrt_deg: Vec<f64> = g.degrees().map(|d| (d as f64).sqrt()).collect();
    let mut s = DMatrix::zeros(n, n);
    for x in 0..n {
        s[(x, x)] = 0.5;
        for &y in g.neighbors(x) {
            s[(x, y)] = 0.5 / (sqrt_deg[x] * sqrt_deg[y]);
        }
    }
    s
}

fn clamp_checked(values: &mut [f64]) -> Result<()> {
    for l in values.iter_mut() {
        if *l < -CLAMP_TOLERANCE || *l > 1.0 + CLAMP_TOLERANCE {
            return Err(Error::Invariant(format!("lazy-walk eigenvalue {l} outside [0, 1]")));
        }
        *l = l.clamp(0.0, 1.0);
    }
    Ok(())
}

pub fn spectrum(g: &Graph) -> Result<Spectrum> {
    check_dense(g)?;
    let mut eigenvalues: Vec<f64> = symmetric_kernel(g).symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    clamp_checked(&mut eigenvalues)?;
    Ok(Spectrum { eigenvalues })
}

/// Full eigendecomposition, verified to [`BASIS_TOLERANCE`].
pub fn eigen_basis(g: &Graph) -> Result<EigenBasis> {
    check_dense(g)?;
    let n = g.vertex_count();
    let s = symmetric_kernel(g);
    let eig = SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let raw: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let psi = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let gram_err = (psi.transpose() * &psi - DMatrix::<f64>::identity(n, n)).amax();
    if gram_err > BASIS_TOLERANCE {
        return Err(Error::Invariant(format!("eigenvectors not orthonormal (error {gram_err:e})")));
    }
    let residual = (&s * &psi - &psi * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(raw.clone()))).amax();
    if residual > BASIS_TOLERANCE {
        return Err(Error::Invariant(format!("eigen-equation residual {residual:e}")));
    }

    let mut eigenvalues = raw;
    clamp_checked(&mut eigenvalues)?;
    let inv_sqrt_deg: Vec<f64> = g.degrees().map(|d| 1.0 / (d as f64).sqrt()).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| psi[(r, c)] * inv_sqrt_deg[r]);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || eigenvalues[i - 1] - eigenvalues[i] > MERGE_TOLERANCE {
            groups.push(start..i);
            start = i;
        }
    }
    Ok(EigenBasis {
        eigenvalues,
        vectors,
        symmetric_vectors: psi,
        groups,
    })
}

pub fn empirical_distribution(g: &Graph) -> Result<SpectralMeasure> {
    Ok(spectrum(g)?.empirical_distribution())
}

pub fn local_spectral_measure(g: &Graph, o: usize) -> Result<SpectralMeasure> {
    g.check_vertex(o)?;
    Ok(eigen_basis(g)?.local_measure(o))
}

pub fn count_above(g: &Graph, rho: f64) -> Result<usize> {
    Ok(spectrum(g)?.count_above(rho))
}

/// Fraction of vertices whose local measure gives `[rho, 1]` mass at most `eps`
/// (up to [`WEIGHT_TOLERANCE`]).
pub fn delocalization_fraction(g: &Graph, rho: f64, eps: f64) -> Result<f64> {
    Ok(eigen_basis(g)?.delocalization_fraction(rho, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    fn g(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-10)
    }

    #[test]
    fn small_spectra() {
        assert!(close(&spectrum(&g(FamilySpec::Complete { n: 2 })).unwrap().eigenvalues, &[1.0, 0.0]));
        assert!(close(
            &spectrum(&g(FamilySpec::Cycle { n: 4 })).unwrap().eigenvalues,
            &[1.0, 0.5, 0.5, 0.0]
        ));
        assert!(close(
            &spectrum(&g(FamilySpec::Complete { n: 5 })).unwrap().eigenvalues,
            &[1.0, 0.375, 0.375, 0.375, 0.375]
        ));
    }

    #[test]
    fn empirical_atoms() {
        let m = empirical_distribution(&g(FamilySpec::Cycle { n: 4 })).unwrap();
        assert_eq!(m.atoms.len(), 3);
        assert!((m.weight_at(1.0) - 0.25).abs() < 1e-12);
        assert!((m.weight_at(0.5) - 0.5).abs() < 1e-12);
        assert!((m.weight_at(0.0) - 0.25).abs() < 1e-12);
        let k2 = empirical_distribution(&g(FamilySpec::Complete { n: 2 })).unwrap();
        assert!((k2.total_weight() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_measures() {
        let k5 = g(FamilySpec::Complete { n: 5 });
        let mu = local_spectral_measure(&k5, 3).unwrap();
        assert!((mu.weight_at(1.0) - 0.2).abs() < 1e-10);
        assert!((mu.moment(1) - 0.5).abs() < 1e-10);
        let star = g(FamilySpec::Star { n: 3 });
        let basis = eigen_basis(&star).unwrap();
        for o in 0..4 {
            let m = basis.local_measure(o);
            assert!((m.total_weight() - 1.0).abs() < 1e-10);
            assert!((m.moment(1) - 0.5).abs() < 1e-10);
            // stationary weight deg(o) / 2|E|
            assert!((m.weight_at(1.0) - star.degree(o) as f64 / 6.0).abs() < 1e-10);
        }
    }

    #[test]
    fn counts_and_delocalization() {
        let k5 = g(FamilySpec::Complete { n: 5 });
        assert_eq!(count_above(&k5, 0.5).unwrap(), 1);
        assert_eq!(count_above(&k5, 1.0).unwrap(), 0);
        assert_eq!(count_above(&k5, -0.1).unwrap(), 5);
        assert_eq!(delocalization_fraction(&k5, 0.9, 0.2).unwrap(), 1.0);
        assert_eq!(delocalization_fraction(&k5, 0.9, 0.19).unwrap(), 0.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(spectrum(&Graph::empty(2)), Err(Error::Input(_))));
        assert!(matches!(spectrum(&Graph::empty(DENSE_VERTEX_LIMIT + 1)), Err(Error::Capability(_))));
    }

    #[test]
    fn disconnected_multiplicity() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let s = spectrum(&two).unwrap();
        assert_eq!(s.eigenvalues.iter().filter(|&&l| (l - 1.0).abs() < 1e-9).count(), 2);
    }
}
