//! System states and their unitary evolution.
//!
//! A [`DensityOperator`] pairs a validated trace-one positive matrix with the
//! labeled space it acts on. Evolution is either an explicit unitary or the
//! diagonal-phase model of a nondestructive measurement, where basis state
//! `n` picks up the phase `exp(-i E_n (t - t0))`.

use crate::error::{Error, Result};
use crate::linalg::{
    validate_density, Complex64, ComplexMatrix, ComplexVector, DEFAULT_TOL,
};
use crate::measure::ProjectiveMeasure;
use crate::space::CompositeSpace;
use num_complex::Complex;

/// Trace-one, hermitian, positive semi-definite operator on a labeled space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    space: CompositeSpace,
}

impl DensityOperator {
    /// Wraps a matrix after validating the density invariants at the default
    /// tolerance and checking it matches the space dimension.
    pub fn new(matrix: ComplexMatrix, space: CompositeSpace) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "density operator vs space",
                expected: space.total_dim(),
                actual: matrix.rows(),
            });
        }
        let report = validate_density(&matrix, DEFAULT_TOL)?;
        if !report.all_pass() {
            return Err(Error::NotDensity {
                reason: report.failures().join("; "),
            });
        }
        Ok(DensityOperator { matrix, space })
    }

    /// Pure state `|v><v| / ||v||^2`; the vector need not be normalized but
    /// must be nonzero.
    pub fn pure(v: &ComplexVector, space: CompositeSpace) -> Result<Self> {
        if v.dim() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "pure state vector vs space",
                expected: space.total_dim(),
                actual: v.dim(),
            });
        }
        let normalized = v.normalized()?;
        Self::new(normalized.outer(&normalized), space)
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        let matrix = ComplexMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0));
        DensityOperator { matrix, space }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    /// Reduced state with the named factors traced out.
    pub fn trace_out(&self, labels: &[&str]) -> Result<DensityOperator> {
        let reduced = crate::linalg::partial_trace(&self.matrix, &self.space, labels)?;
        let kept: Vec<usize> = self
            .space
            .factors()
            .iter()
            .filter(|f| !labels.contains(&f.label()))
            .map(|f| f.position())
            .collect();
        DensityOperator::new(reduced, self.space.keep_positions(&kept)?)
    }

    /// Convex combination `w * self + (1 - w) * other` of two states on the
    /// same space.
    pub fn mix(&self, other: &DensityOperator, weight: f64) -> Result<DensityOperator> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                context: "mixing states on different spaces",
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidParameter {
                reason: format!("mixing weight {weight} outside [0, 1]"),
            });
        }
        let matrix = self
            .matrix
            .scale(Complex::new(weight, 0.0))
            .add(&other.matrix.scale(Complex::new(1.0 - weight, 0.0)))?;
        DensityOperator::new(matrix, self.space.clone())
    }
}

/// Equal-amplitude superposition over `n` basis states, entries `1/sqrt(n)`.
pub fn uniform_superposition(n: usize) -> Result<ComplexVector> {
    if n == 0 {
        return Err(Error::EmptyInput("superposition needs at least one term"));
    }
    let amp = 1.0 / (n as f64).sqrt();
    ComplexVector::from_real(&vec![amp; n])
}

/// How a state changes between measurements.
#[derive(Debug, Clone, PartialEq)]
pub enum EvolutionModel {
    /// Conjugation by an arbitrary unitary.
    ExplicitUnitary(ComplexMatrix),
    /// Diagonal phases from constant energies (hbar = 1): basis state `n`
    /// acquires `exp(-i E_n (t - t0))`.
    DiagonalPhase {
        energies: Vec<f64>,
        t0: f64,
        t: f64,
    },
}

impl EvolutionModel {
    /// The trivial evolution, used when two measurements follow immediately.
    pub fn identity(dim: usize) -> Self {
        EvolutionModel::ExplicitUnitary(ComplexMatrix::identity(dim))
    }

    /// Materializes the evolution operator for the given dimension, checking
    /// unitarity (explicit case) or the energy count and time order.
    pub fn unitary(&self, dim: usize) -> Result<ComplexMatrix> {
        match self {
            EvolutionModel::ExplicitUnitary(u) => {
                if !u.is_square() || u.rows() != dim {
                    return Err(Error::DimensionMismatch {
                        context: "evolution unitary",
                        expected: dim,
                        actual: u.rows(),
                    });
                }
                let residual = u.unitarity_residual()?;
                if residual > DEFAULT_TOL {
                    return Err(Error::NotUnitary { residual });
                }
                Ok(u.clone())
            }
            EvolutionModel::DiagonalPhase { energies, t0, t } => {
                if energies.len() != dim {
                    return Err(Error::DimensionMismatch {
                        context: "diagonal-phase energies",
                        expected: dim,
                        actual: energies.len(),
                    });
                }
                diagonal_phase_unitary(energies, *t0, *t)
            }
        }
    }
}

/// Diagonal unitary with entries `exp(-i E_n (t - t0))`; the identity at
/// `t = t0`.
pub fn diagonal_phase_unitary(energies: &[f64], t0: f64, t: f64) -> Result<ComplexMatrix> {
    if t < t0 {
        return Err(Error::InvalidEvolution {
            reason: format!("t = {t} precedes t0 = {t0}"),
        });
    }
    let dt = t - t0;
    let diag: Vec<Complex64> = energies
        .iter()
        .map(|&e| Complex::from_polar(1.0, -e * dt))
        .collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// Conjugates the state by the evolution operator, `U rho U^+`.
pub fn evolve(rho: &DensityOperator, ev: &EvolutionModel) -> Result<DensityOperator> {
    let u = ev.unitary(rho.dim())?;
    let evolved = u.matmul(rho.matrix())?.matmul(&u.adjoint())?;
    DensityOperator::new(evolved, rho.space().clone())
}

/// A projective measure paired with one real eigenvalue per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    measure: ProjectiveMeasure,
    eigenvalues: Vec<f64>,
}

impl Observable {
    pub fn new(measure: ProjectiveMeasure, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != measure.outcome_count() {
            return Err(Error::DimensionMismatch {
                context: "observable eigenvalues",
                expected: measure.outcome_count(),
                actual: eigenvalues.len(),
            });
        }
        Ok(Observable {
            measure,
            eigenvalues,
        })
    }

    pub fn measure(&self) -> &ProjectiveMeasure {
        &self.measure
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Expectation value `sum_n A_n p(A_n)` of an observable in a state.
pub fn expectation(rho: &DensityOperator, obs: &Observable) -> Result<f64> {
    let probs = crate::measure::outcome_probabilities(rho, obs.measure())?;
    Ok(probs
        .iter()
        .zip(obs.eigenvalues())
        .map(|(p, a)| p * a)
        .sum())
}
