//! Seeded random fixtures shared across the unit-test modules.

use crate::linalg::{gram_schmidt, ComplexMatrix, ComplexVector};
use crate::space::CompositeSpace;
use crate::state::DensityOperator;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Orthonormal basis obtained from seeded complex Gaussian-ish vectors.
pub fn random_basis(dim: usize, seed: u64) -> Vec<ComplexVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<ComplexVector> = (0..dim)
        .map(|_| {
            ComplexVector::new(
                (0..dim)
                    .map(|_| {
                        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    gram_schmidt(&raw).unwrap()
}

/// Full-rank random density operator on the given space: random eigenbasis
/// with random positive weights.
pub fn random_density_on(space: CompositeSpace, seed: u64) -> DensityOperator {
    let dim = space.total_dim();
    let basis = random_basis(dim, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut weights: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for (v, w) in basis.iter().zip(&weights) {
        matrix = matrix
            .add(&v.outer(v).scale(Complex::new(*w, 0.0)))
            .unwrap();
    }
    DensityOperator::new(matrix.hermitize(), space).unwrap()
}

/// Convenience wrapper for a single-factor space labeled `"A"`.
pub fn random_density(dim: usize, seed: u64) -> DensityOperator {
    random_density_on(CompositeSpace::single("A", dim).unwrap(), seed)
}
