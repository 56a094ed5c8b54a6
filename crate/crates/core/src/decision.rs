//! Composite decision spaces: measurements confined to one factor of a
//! subject ⊗ alternatives product, and the separation-time dynamics that
//! interpolate between an immediate second measurement (full state reduction)
//! and a long-delayed one (no influence from the first outcome).

use crate::error::{Error, Result};
use crate::linalg::{tensor_product_all, ComplexMatrix};
use crate::measure::{luders_reduce, outcome_probabilities, Projector, ProjectiveMeasure};
use crate::space::CompositeSpace;
use crate::state::{evolve, DensityOperator, EvolutionModel};

/// Shape of the fading weight `w(tau)`. The limits are what matter —
/// `w(0) = 1` and `w -> 0` for `tau >> t_rel` — so the profile is pluggable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// `w = exp(-tau/t_rel)`, the default.
    Exponential,
    /// `w = exp(-(tau/t_rel)^2)`.
    Gaussian,
}

impl DecayModel {
    fn weight(&self, ratio: f64) -> f64 {
        match self {
            DecayModel::Exponential => (-ratio).exp(),
            DecayModel::Gaussian => (-ratio * ratio).exp(),
        }
    }
}

/// Elapsed time between two consecutive measurements, together with the
/// relaxation time on which the first measurement's perturbation fades.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationDynamics {
    tau: f64,
    t_rel: f64,
    decay: DecayModel,
}

impl SeparationDynamics {
    pub fn new(tau: f64, t_rel: f64) -> Result<Self> {
        Self::with_decay(tau, t_rel, DecayModel::Exponential)
    }

    pub fn with_decay(tau: f64, t_rel: f64, decay: DecayModel) -> Result<Self> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("separation time {tau} must be finite and nonnegative"),
            });
        }
        if !t_rel.is_finite() || t_rel <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("relaxation time {t_rel} must be finite and positive"),
            });
        }
        Ok(SeparationDynamics { tau, t_rel, decay })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t_rel(&self) -> f64 {
        self.t_rel
    }

    /// Weight of the reduced branch, in `(0, 1]`.
    pub fn weight(&self) -> f64 {
        self.decay.weight(self.tau / self.t_rel)
    }
}

/// Identity-padded embedding of a single-factor projector into the full
/// space: `I ⊗ ... ⊗ P ⊗ ... ⊗ I` with `P` at the target factor's position.
pub fn lift_projector(
    p: &Projector,
    space: &CompositeSpace,
    target_label: &str,
) -> Result<Projector> {
    let pos = space.position(target_label)?;
    let target_dim = space.factors()[pos].dim();
    if p.dim() != target_dim {
        return Err(Error::DimensionMismatch {
            context: "projector vs target factor",
            expected: target_dim,
            actual: p.dim(),
        });
    }
    let mats: Vec<ComplexMatrix> = space
        .factors()
        .iter()
        .map(|f| {
            if f.position() == pos {
                p.matrix().clone()
            } else {
                ComplexMatrix::identity(f.dim())
            }
        })
        .collect();
    let refs: Vec<&ComplexMatrix> = mats.iter().collect();
    Projector::new(tensor_product_all(&refs), p.label())
}

/// Lifts every projector of a single-factor measure; the lifted family is
/// again a complete orthogonal measure, now on the full space.
pub fn lift_measure(
    m: &ProjectiveMeasure,
    space: &CompositeSpace,
    target_label: &str,
) -> Result<ProjectiveMeasure> {
    let lifted = m
        .projectors()
        .iter()
        .map(|p| lift_projector(p, space, target_label))
        .collect::<Result<Vec<_>>>()?;
    ProjectiveMeasure::new(lifted)
}

/// State reduction confined to one factor: conditions the full state on an
/// outcome observed in the target factor, leaving the other factors'
/// marginals untouched whenever the state factorizes.
pub fn reduce_in_factor(
    rho: &DensityOperator,
    target_label: &str,
    p: &Projector,
) -> Result<DensityOperator> {
    let lifted = lift_projector(p, rho.space(), target_label)?;
    luders_reduce(rho, &lifted)
}

/// Conditional probabilities of the second measurement a time `tau` after
/// the first. The effective state mixes the reduced and unreduced branches,
/// both evolved under the same model:
/// `rho_eff = w(tau) * evolve(reduced) + (1 - w(tau)) * evolve(unreduced)`.
/// At `tau = 0` this is the immediate conditional; for `tau >> t_rel` it
/// tends to the unconditional probabilities of the second measurement.
pub fn separated_conditional(
    rho: &DensityOperator,
    first: (&str, &ProjectiveMeasure, usize),
    dynamics: &SeparationDynamics,
    ev: &EvolutionModel,
    second: (&str, &ProjectiveMeasure),
) -> Result<Vec<f64>> {
    let (first_label, first_measure, n) = first;
    let reduced = reduce_in_factor(rho, first_label, first_measure.projector(n)?)?;
    let reduced_branch = evolve(&reduced, ev)?;
    let unreduced_branch = evolve(rho, ev)?;
    let rho_eff = reduced_branch.mix(&unreduced_branch, dynamics.weight())?;
    let lifted_second = lift_measure(second.1, rho.space(), second.0)?;
    outcome_probabilities(&rho_eff, &lifted_second)
}
