//! Projection-valued measures, state reduction, and temporal conditionals.
//!
//! A [`ProjectiveMeasure`] is a complete family of mutually orthogonal
//! projectors, one per outcome. Conditioning on an observed outcome replaces
//! the state by `P rho P / Tr(rho P)`; conditional probabilities for a second
//! measurement are read off the reduced (and possibly evolved) state.

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, ComplexMatrix, ComplexVector, DEFAULT_TOL};
use crate::state::{evolve, DensityOperator, EvolutionModel};

/// Conditioning on an outcome whose probability is at or below this threshold
/// is a hard error: the reduced state would be undefined.
pub const NULL_EVENT_TOL: f64 = 1e-12;

/// Orthogonal projector onto an outcome subspace, tagged with its label.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
    label: String,
}

impl Projector {
    /// Validates hermiticity, idempotency, and an integer trace, then infers
    /// the rank from the trace.
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotProjector {
                reason: format!("matrix is {}x{}, not square", matrix.rows(), matrix.cols()),
            });
        }
        let herm = matrix.hermiticity_residual();
        if herm > DEFAULT_TOL {
            return Err(Error::NotProjector {
                reason: format!("hermiticity residual {herm:.3e}"),
            });
        }
        let squared = matrix.matmul(&matrix)?;
        let idem = squared.max_abs_diff(&matrix);
        if idem > DEFAULT_TOL {
            return Err(Error::NotProjector {
                reason: format!("idempotency residual {idem:.3e}"),
            });
        }
        let trace = matrix.trace()?;
        let rank = trace.re.round();
        if (trace.re - rank).abs() > 1e-8 || trace.im.abs() > 1e-8 {
            return Err(Error::NotProjector {
                reason: format!("trace {trace} is not a nonnegative integer"),
            });
        }
        if rank < 1.0 {
            return Err(Error::NotProjector {
                reason: "zero projector carries no outcome".into(),
            });
        }
        Ok(Projector {
            matrix,
            rank: rank as usize,
            label: label.into(),
        })
    }

    /// Rank-1 projector `|v><v|` onto the ray of a nonzero vector.
    pub fn from_vector(v: &ComplexVector, label: impl Into<String>) -> Result<Self> {
        let unit = v.normalized()?;
        Projector::new(unit.outer(&unit), label)
    }

    /// Projector onto the span of the given vectors; they are orthonormalized
    /// internally, so any linearly independent spanning set works.
    pub fn from_span(vectors: &[ComplexVector], label: impl Into<String>) -> Result<Self> {
        let basis = gram_schmidt(vectors)?;
        let dim = basis[0].dim();
        let mut matrix = ComplexMatrix::zeros(dim, dim);
        for b in &basis {
            matrix = matrix.add(&b.outer(b))?;
        }
        Projector::new(matrix, label)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Complete family of mutually orthogonal projectors over one space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasure {
    projectors: Vec<Projector>,
    space_dim: usize,
}

impl ProjectiveMeasure {
    /// Validates outcome count (>= 2), matching dimensions, mutual
    /// orthogonality, and completeness.
    pub fn new(projectors: Vec<Projector>) -> Result<Self> {
        if projectors.len() < 2 {
            return Err(Error::TooFewOutcomes {
                count: projectors.len(),
            });
        }
        let space_dim = projectors[0].dim();
        for p in &projectors {
            if p.dim() != space_dim {
                return Err(Error::DimensionMismatch {
                    context: "projectors in one measure",
                    expected: space_dim,
                    actual: p.dim(),
                });
            }
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let prod = projectors[i].matrix().matmul(projectors[j].matrix())?;
                let residual = prod.max_abs();
                if residual > DEFAULT_TOL {
                    return Err(Error::InvalidMeasure {
                        reason: format!(
                            "outcomes '{}' and '{}' overlap (residual {residual:.3e})",
                            projectors[i].label(),
                            projectors[j].label()
                        ),
                    });
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(space_dim, space_dim);
        for p in &projectors {
            sum = sum.add(p.matrix())?;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(space_dim));
        if residual > DEFAULT_TOL {
            return Err(Error::InvalidMeasure {
                reason: format!("projectors do not resolve the identity (residual {residual:.3e})"),
            });
        }
        Ok(ProjectiveMeasure {
            projectors,
            space_dim,
        })
    }

    /// Standard-basis measure of the given dimension, labels `"0"`, `"1"`, ...
    pub fn computational(dim: usize) -> Result<Self> {
        let vectors: Vec<ComplexVector> = (0..dim).map(|i| ComplexVector::basis(dim, i)).collect();
        measure_from_basis(&vectors)
    }

    /// Replaces the outcome labels, preserving order.
    pub fn with_labels<S: Into<String>>(mut self, labels: Vec<S>) -> Result<Self> {
        if labels.len() != self.projectors.len() {
            return Err(Error::DimensionMismatch {
                context: "outcome labels",
                expected: self.projectors.len(),
                actual: labels.len(),
            });
        }
        for (p, l) in self.projectors.iter_mut().zip(labels) {
            p.label = l.into();
        }
        Ok(self)
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn projector(&self, n: usize) -> Result<&Projector> {
        self.projectors.get(n).ok_or(Error::OutcomeOutOfRange {
            index: n,
            count: self.projectors.len(),
        })
    }

    pub fn outcome_count(&self) -> usize {
        self.projectors.len()
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn labels(&self) -> Vec<&str> {
        self.projectors.iter().map(|p| p.label()).collect()
    }
}

/// One rank-1 projector per basis vector. The vectors must already be
/// orthonormal and form a complete basis; this constructor does not repair
/// near-orthogonal input.
pub fn measure_from_basis(vectors: &[ComplexVector]) -> Result<ProjectiveMeasure> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput("measurement basis"));
    }
    let dim = vectors[0].dim();
    if vectors.len() != dim {
        return Err(Error::InvalidMeasure {
            reason: format!("{} basis vectors cannot span dimension {dim}", vectors.len()),
        });
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            context: "measurement basis",
            expected: dim,
            actual: v.dim(),
        });
    }
    for (i, v) in vectors.iter().enumerate() {
        for (j, w) in vectors.iter().enumerate() {
            let overlap = v.inner(w);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (overlap - num_complex::Complex::new(expected, 0.0)).norm() > 1e-8 {
                return Err(Error::InvalidMeasure {
                    reason: format!("basis vectors {i} and {j} are not orthonormal"),
                });
            }
        }
    }
    let projectors = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| Projector::from_vector(v, i.to_string()))
        .collect::<Result<Vec<_>>>()?;
    ProjectiveMeasure::new(projectors)
}

/// One projector per group of vectors, each spanning a degenerate outcome
/// subspace. Groups are orthonormalized internally; the assembled family must
/// still be orthogonal and complete.
pub fn measure_from_subspaces(groups: &[Vec<ComplexVector>]) -> Result<ProjectiveMeasure> {
    if groups.is_empty() {
        return Err(Error::EmptyInput("subspace groups"));
    }
    let projectors = groups
        .iter()
        .enumerate()
        .map(|(i, g)| Projector::from_span(g, i.to_string()))
        .collect::<Result<Vec<_>>>()?;
    ProjectiveMeasure::new(projectors)
}

/// `p_n = Tr(rho P_n)` for every outcome, clamped to `[0, 1]`.
pub fn outcome_probabilities(rho: &DensityOperator, m: &ProjectiveMeasure) -> Result<Vec<f64>> {
    if m.space_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "measure vs state",
            expected: rho.dim(),
            actual: m.space_dim(),
        });
    }
    let mut probs = Vec::with_capacity(m.outcome_count());
    for p in m.projectors() {
        let value = rho.matrix().matmul(p.matrix())?.trace()?.re;
        if !(-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&value) {
            return Err(Error::InvalidDistribution {
                reason: format!("outcome '{}' has probability {value}", p.label()),
            });
        }
        probs.push(value.clamp(0.0, 1.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidDistribution {
            reason: format!("outcome probabilities sum to {total}"),
        });
    }
    Ok(probs)
}

/// Post-measurement state `P rho P / Tr(rho P)` once the outcome projected by
/// `p` has been observed. Conditioning on a (numerically) impossible outcome
/// is rejected.
pub fn luders_reduce(rho: &DensityOperator, p: &Projector) -> Result<DensityOperator> {
    if p.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "projector vs state",
            expected: rho.dim(),
            actual: p.dim(),
        });
    }
    let probability = rho.matrix().matmul(p.matrix())?.trace()?.re;
    if probability <= NULL_EVENT_TOL {
        return Err(Error::NullConditioning { probability });
    }
    let sandwiched = p.matrix().matmul(rho.matrix())?.matmul(p.matrix())?;
    let scaled = sandwiched.scale(num_complex::Complex::new(1.0 / probability, 0.0));
    DensityOperator::new(scaled.hermitize(), rho.space().clone())
}

/// `p(B_k, t0+0 | A_n, t0)`: reduce on the observed first outcome, then read
/// the second measure off the reduced state.
pub fn immediate_conditional(
    rho_before: &DensityOperator,
    first: &ProjectiveMeasure,
    n: usize,
    second: &ProjectiveMeasure,
) -> Result<Vec<f64>> {
    let reduced = luders_reduce(rho_before, first.projector(n)?)?;
    outcome_probabilities(&reduced, second)
}

/// `p(B_k, t | A_n, t0)`: reduce on the first outcome, evolve the reduced
/// state, then read the second measure. With the identity evolution this is
/// exactly [`immediate_conditional`].
pub fn conditional_after_evolution(
    rho_before: &DensityOperator,
    first: &ProjectiveMeasure,
    n: usize,
    ev: &EvolutionModel,
    second: &ProjectiveMeasure,
) -> Result<Vec<f64>> {
    let reduced = luders_reduce(rho_before, first.projector(n)?)?;
    let evolved = evolve(&reduced, ev)?;
    outcome_probabilities(&evolved, second)
}

/// Audit-trail entry for one observed outcome in a staged run.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome_label: String,
    pub time: f64,
    pub probability_at_observation: f64,
}

impl MeasurementRecord {
    pub fn new(
        outcome_label: impl Into<String>,
        time: f64,
        probability_at_observation: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability_at_observation) {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "recorded probability {probability_at_observation} outside [0, 1]"
                ),
            });
        }
        Ok(MeasurementRecord {
            outcome_label: outcome_label.into(),
            time,
            probability_at_observation,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Complex64, C_ONE, C_ZERO};
    use crate::space::CompositeSpace;
    use crate::state::uniform_superposition;
    use crate::testutil::{random_basis, random_density};
    use num_complex::Complex;

    fn space(dim: usize) -> CompositeSpace {
        CompositeSpace::single("A", dim).unwrap()
    }

    fn x_basis() -> Vec<ComplexVector> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![
            ComplexVector::from_real(&[s, s]).unwrap(),
            ComplexVector::from_real(&[s, -s]).unwrap(),
        ]
    }

    #[test]
    fn projector_validation() {
        let good = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p = Projector::new(good, "0").unwrap();
        assert_eq!(p.rank(), 1);

        let not_idem = ComplexMatrix::from_real(2, 2, &[0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            Projector::new(not_idem, "x"),
            Err(Error::NotProjector { .. })
        ));

        let not_herm =
            ComplexMatrix::new(2, 2, vec![C_ONE, C_ONE, C_ZERO, C_ZERO]).unwrap();
        assert!(matches!(
            Projector::new(not_herm, "x"),
            Err(Error::NotProjector { .. })
        ));

        let zero = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            Projector::new(zero, "x"),
            Err(Error::NotProjector { .. })
        ));
    }

    #[test]
    fn basis_measure_standard_dim2() {
        let m = ProjectiveMeasure::computational(2).unwrap();
        assert_eq!(m.outcome_count(), 2);
        let p0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p1 = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(m.projector(0).unwrap().matrix().max_abs_diff(&p0) < 1e-14);
        assert!(m.projector(1).unwrap().matrix().max_abs_diff(&p1) < 1e-14);
    }

    #[test]
    fn basis_measure_x_basis_projectors() {
        let m = measure_from_basis(&x_basis()).unwrap();
        // oracle: outer products computed by hand
        let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let minus = ComplexMatrix::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(m.projector(0).unwrap().matrix().max_abs_diff(&plus) < 1e-14);
        assert!(m.projector(1).unwrap().matrix().max_abs_diff(&minus) < 1e-14);
    }

    #[test]
    fn basis_measure_dim6_die() {
        let m = ProjectiveMeasure::computational(6).unwrap();
        assert_eq!(m.outcome_count(), 6);
        for p in m.projectors() {
            assert_eq!(p.rank(), 1);
        }
    }

    #[test]
    fn basis_measure_rejects_bad_input() {
        // not orthonormal
        let skew = vec![
            ComplexVector::from_real(&[1.0, 0.0]).unwrap(),
            ComplexVector::from_real(&[0.6, 0.8]).unwrap(),
        ];
        assert!(measure_from_basis(&skew).is_err());
        // incomplete
        let short = vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)];
        assert!(measure_from_basis(&short).is_err());
        // unnormalized
        let long = vec![
            ComplexVector::from_real(&[2.0, 0.0]).unwrap(),
            ComplexVector::from_real(&[0.0, 1.0]).unwrap(),
        ];
        assert!(measure_from_basis(&long).is_err());
    }

    #[test]
    fn subspace_measure_standard_groups() {
        let groups = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 2)],
        ];
        let m = measure_from_subspaces(&groups).unwrap();
        let p1 = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        let p2 = ComplexMatrix::from_real(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        assert!(m.projector(0).unwrap().matrix().max_abs_diff(&p1) < 1e-14);
        assert!(m.projector(1).unwrap().matrix().max_abs_diff(&p2) < 1e-14);
        assert_eq!(m.projector(0).unwrap().rank(), 2);
        assert_eq!(m.projector(1).unwrap().rank(), 1);
    }

    #[test]
    fn subspace_projector_is_basis_independent() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rotated = vec![
            vec![
                ComplexVector::from_real(&[s, s, 0.0]).unwrap(),
                ComplexVector::from_real(&[s, -s, 0.0]).unwrap(),
            ],
            vec![ComplexVector::basis(3, 2)],
        ];
        let m = measure_from_subspaces(&rotated).unwrap();
        // oracle: sum of outer products equals the subspace projector
        let p1 = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!(m.projector(0).unwrap().matrix().max_abs_diff(&p1) < 1e-12);
    }

    #[test]
    fn subspace_measure_rejections() {
        // single group covering everything: one outcome is no measurement
        let all = vec![vec![
            ComplexVector::basis(2, 0),
            ComplexVector::basis(2, 1),
        ]];
        assert!(matches!(
            measure_from_subspaces(&all),
            Err(Error::TooFewOutcomes { count: 1 })
        ));
        // overlapping subspaces
        let overlap = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 1), ComplexVector::basis(3, 2)],
        ];
        assert!(measure_from_subspaces(&overlap).is_err());
        // not spanning
        let short = vec![
            vec![ComplexVector::basis(3, 0)],
            vec![ComplexVector::basis(3, 1)],
        ];
        assert!(measure_from_subspaces(&short).is_err());
    }

    #[test]
    fn uniform_superposition_hits_every_outcome_equally() {
        for n in [2usize, 6] {
            let rho =
                DensityOperator::pure(&uniform_superposition(n).unwrap(), space(n)).unwrap();
            let probs =
                outcome_probabilities(&rho, &ProjectiveMeasure::computational(n).unwrap())
                    .unwrap();
            for p in probs {
                assert!((p - 1.0 / n as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_state_probabilities_are_indicator() {
        let rho = DensityOperator::pure(&ComplexVector::basis(3, 1), space(3)).unwrap();
        let probs =
            outcome_probabilities(&rho, &ProjectiveMeasure::computational(3).unwrap()).unwrap();
        assert!((probs[0]).abs() < 1e-14);
        assert!((probs[1] - 1.0).abs() < 1e-14);
        assert!((probs[2]).abs() < 1e-14);
    }

    #[test]
    fn zero_state_against_x_basis_is_even() {
        let rho = DensityOperator::pure(&ComplexVector::basis(2, 0), space(2)).unwrap();
        let m = measure_from_basis(&x_basis()).unwrap();
        let probs = outcome_probabilities(&rho, &m).unwrap();
        // oracle: Tr(|0><0| P) = P[0][0] = 1/2 for both X projectors
        for (p, proj) in probs.iter().zip(m.projectors()) {
            assert!((p - proj.matrix()[(0, 0)].re).abs() < 1e-14);
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn outcome_probabilities_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(space(2));
        let m = ProjectiveMeasure::computational(3).unwrap();
        assert!(matches!(
            outcome_probabilities(&rho, &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn luders_reduce_pure_state_to_observed_ray() {
        let psi = ComplexVector::new(vec![
            Complex::new(0.6, 0.0),
            Complex::new(0.0, 0.8),
        ])
        .unwrap();
        let rho = DensityOperator::pure(&psi, space(2)).unwrap();
        let m = ProjectiveMeasure::computational(2).unwrap();
        let reduced = luders_reduce(&rho, m.projector(1).unwrap()).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn luders_reduce_mixed_state() {
        let rho = DensityOperator::maximally_mixed(space(2));
        let m = ProjectiveMeasure::computational(2).unwrap();
        let reduced = luders_reduce(&rho, m.projector(0).unwrap()).unwrap();
        // oracle: P (I/2) P / Tr((I/2)P) = P
        let expected = m.projector(0).unwrap().matrix();
        assert!(reduced.matrix().max_abs_diff(expected) < 1e-12);
    }

    #[test]
    fn luders_reduce_commuting_block() {
        // rho diagonal, P projects onto span{e1, e2}: result is the
        // renormalized diagonal block
        let rho = DensityOperator::new(
            ComplexMatrix::from_real(3, 3, &[0.5, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.2])
                .unwrap(),
            space(3),
        )
        .unwrap();
        let p = Projector::from_span(
            &[ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            "block",
        )
        .unwrap();
        let reduced = luders_reduce(&rho, &p).unwrap();
        let expected = ComplexMatrix::from_real(
            3,
            3,
            &[0.5 / 0.8, 0.0, 0.0, 0.0, 0.3 / 0.8, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(reduced.matrix().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn luders_reduce_rejects_null_event() {
        let rho = DensityOperator::pure(&ComplexVector::basis(2, 0), space(2)).unwrap();
        let m = ProjectiveMeasure::computational(2).unwrap();
        let err = luders_reduce(&rho, m.projector(1).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NullConditioning { .. }));
    }

    #[test]
    fn reduced_state_certifies_its_outcome() {
        let rho = random_density(4, 11);
        let m = ProjectiveMeasure::computational(4).unwrap();
        let reduced = luders_reduce(&rho, m.projector(2).unwrap()).unwrap();
        let check = reduced
            .matrix()
            .matmul(m.projector(2).unwrap().matrix())
            .unwrap()
            .trace()
            .unwrap()
            .re;
        assert!((check - 1.0).abs() < 1e-10);
    }

    #[test]
    fn repeated_measurement_is_reproducible() {
        // nondegenerate case: indicator vector on the observed outcome
        let rho = random_density(3, 5);
        let m = ProjectiveMeasure::computational(3).unwrap();
        for n in 0..3 {
            let probs = immediate_conditional(&rho, &m, n, &m).unwrap();
            for (k, p) in probs.iter().enumerate() {
                let expected = if k == n { 1.0 } else { 0.0 };
                assert!((p - expected).abs() < 1e-10);
            }
        }
        // degenerate case: the whole observed subspace keeps probability 1
        let groups = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 2)],
        ];
        let dm = measure_from_subspaces(&groups).unwrap();
        let probs = immediate_conditional(&rho, &dm, 0, &dm).unwrap();
        assert!((probs[0] - 1.0).abs() < 1e-10);
        assert!(probs[1].abs() < 1e-10);
    }

    #[test]
    fn immediate_conditional_z_then_x_is_even() {
        let rho = random_density(2, 3);
        let z = ProjectiveMeasure::computational(2).unwrap();
        let x = measure_from_basis(&x_basis()).unwrap();
        let probs = immediate_conditional(&rho, &z, 0, &x).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!((probs[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn immediate_conditional_matches_transition_probability() {
        // for rank-1 first outcome the conditional is |<B_k|A_n>|^2,
        // independent of the prior state
        let a = random_basis(4, 21);
        let b = random_basis(4, 22);
        let ma = measure_from_basis(&a).unwrap();
        let mb = measure_from_basis(&b).unwrap();
        for (seed, n) in [(31u64, 0usize), (32, 2)] {
            let rho = random_density(4, seed);
            let probs = immediate_conditional(&rho, &ma, n, &mb).unwrap();
            for (k, bk) in b.iter().enumerate() {
                let amp = bk.inner(&a[n]);
                assert!((probs[k] - amp.norm_sqr()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reciprocal_symmetry_for_nondegenerate_measures() {
        let a = random_basis(3, 41);
        let b = random_basis(3, 42);
        let ma = measure_from_basis(&a).unwrap();
        let mb = measure_from_basis(&b).unwrap();
        let rho1 = random_density(3, 43);
        let rho2 = random_density(3, 44);
        for n in 0..3 {
            let forward = immediate_conditional(&rho1, &ma, n, &mb).unwrap();
            for k in 0..3 {
                let backward = immediate_conditional(&rho2, &mb, k, &ma).unwrap();
                let overlap = b[k].inner(&a[n]).norm_sqr();
                assert!((forward[k] - overlap).abs() < 1e-10);
                assert!((backward[n] - overlap).abs() < 1e-10);
                assert!((forward[k] - backward[n]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_conditional_matches_summation_oracle() {
        // first outcome the uniform ray, second degenerate on span{e1,e2):
        // p(B_k|A_n) = sum_a |<B_ka|A_n>|^2
        let dim = 3;
        let a_basis = {
            let mut v = vec![uniform_superposition(dim).unwrap()];
            v.push(ComplexVector::from_real(&[1.0, -1.0, 0.0]).unwrap());
            v.push(ComplexVector::from_real(&[1.0, 1.0, -2.0]).unwrap());
            gram_schmidt(&v).unwrap()
        };
        let ma = measure_from_basis(&a_basis).unwrap();
        let groups = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 2)],
        ];
        let mb = measure_from_subspaces(&groups).unwrap();
        let rho = random_density(3, 51);
        let probs = immediate_conditional(&rho, &ma, 0, &mb).unwrap();
        // summation oracle over the degeneracy index
        for (k, group) in groups.iter().enumerate() {
            let oracle: f64 = group
                .iter()
                .map(|g| g.inner(&a_basis[0]).norm_sqr())
                .sum();
            assert!((probs[k] - oracle).abs() < 1e-10);
        }
        assert!((probs[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((probs[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_reverse_conditional_matches_matrix_oracle() {
        // conditioning on a degenerate outcome: p(A_n|B_k) =
        // <A_n| P_k rho P_k |A_n> / Tr(rho P_k)
        let groups = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 2)],
        ];
        let mb = measure_from_subspaces(&groups).unwrap();
        let a_basis = random_basis(3, 61);
        let ma = measure_from_basis(&a_basis).unwrap();
        let rho = random_density(3, 62);
        let probs = immediate_conditional(&rho, &mb, 0, &ma).unwrap();
        let pk = mb.projector(0).unwrap().matrix();
        let sandwiched = pk.matmul(rho.matrix()).unwrap().matmul(pk).unwrap();
        let norm = rho.matrix().matmul(pk).unwrap().trace().unwrap().re;
        for (n, an) in a_basis.iter().enumerate() {
            let mut val = Complex64::new(0.0, 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    val += an.entries()[i].conj() * sandwiched[(i, j)] * an.entries()[j];
                }
            }
            assert!((probs[n] - val.re / norm).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_measures_break_reciprocal_symmetry() {
        // seeded witness: random nondegenerate A, degenerate B, maximally
        // mixed state; the two conditioning directions differ by > 0.1
        let a_basis = random_basis(3, 7);
        let ma = measure_from_basis(&a_basis).unwrap();
        let groups = vec![
            vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)],
            vec![ComplexVector::basis(3, 2)],
        ];
        let mb = measure_from_subspaces(&groups).unwrap();
        let rho = DensityOperator::maximally_mixed(space(3));
        let forward = immediate_conditional(&rho, &ma, 0, &mb).unwrap()[0];
        let backward = immediate_conditional(&rho, &mb, 0, &ma).unwrap()[0];
        assert!(
            (forward - backward).abs() > 0.1,
            "expected asymmetry, got forward = {forward}, backward = {backward}"
        );
    }

    #[test]
    fn conditional_after_identity_matches_immediate() {
        let rho = random_density(3, 71);
        let a = measure_from_basis(&random_basis(3, 72)).unwrap();
        let b = measure_from_basis(&random_basis(3, 73)).unwrap();
        let immediate = immediate_conditional(&rho, &a, 1, &b).unwrap();
        let evolved =
            conditional_after_evolution(&rho, &a, 1, &EvolutionModel::identity(3), &b).unwrap();
        for (x, y) in immediate.iter().zip(&evolved) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_evolution_preserves_basis_populations() {
        let rho = random_density(3, 81);
        let m = ProjectiveMeasure::computational(3).unwrap();
        let ev = EvolutionModel::DiagonalPhase {
            energies: vec![0.7, -0.2, 1.9],
            t0: 0.0,
            t: 4.0,
        };
        for n in 0..3 {
            let probs = conditional_after_evolution(&rho, &m, n, &ev, &m).unwrap();
            for (k, p) in probs.iter().enumerate() {
                let expected = if k == n { 1.0 } else { 0.0 };
                assert!((p - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conditional_after_phase_flip_into_x_basis() {
        let rho = random_density(2, 91);
        let z = ProjectiveMeasure::computational(2).unwrap();
        let x = measure_from_basis(&x_basis()).unwrap();
        let ev = EvolutionModel::DiagonalPhase {
            energies: vec![0.0, std::f64::consts::PI],
            t0: 0.0,
            t: 1.0,
        };
        let probs = conditional_after_evolution(&rho, &z, 0, &ev, &x).unwrap();
        // oracle: U|0> = |0>, so the X-basis split stays even
        let u = crate::state::diagonal_phase_unitary(&[0.0, std::f64::consts::PI], 0.0, 1.0)
            .unwrap();
        let reduced = luders_reduce(&rho, z.projector(0).unwrap()).unwrap();
        let evolved = u
            .matmul(reduced.matrix())
            .unwrap()
            .matmul(&u.adjoint())
            .unwrap();
        for (k, p) in probs.iter().enumerate() {
            let oracle = evolved
                .matmul(x.projector(k).unwrap().matrix())
                .unwrap()
                .trace()
                .unwrap()
                .re;
            assert!((p - oracle).abs() < 1e-12);
            assert!((p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn measurement_record_bounds() {
        assert!(MeasurementRecord::new("heads", 0.0, 0.5).is_ok());
        assert!(MeasurementRecord::new("heads", 0.0, 1.5).is_err());
        assert!(MeasurementRecord::new("heads", 0.0, -0.1).is_err());
    }
}
