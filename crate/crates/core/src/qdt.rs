//! Decision-theory layer: prospects pair each alternative with a vector of
//! emotion amplitudes over the subject space. The resulting prospect
//! operators are positive but not idempotent, resolve the identity only in
//! the weak (state-averaged) sense, and split every prospect probability into
//! a utility fraction plus an attraction factor, `p = f + q`.

use crate::error::{Error, Result};
use crate::linalg::{tensor_product_vec, ComplexMatrix, ComplexVector, DEFAULT_TOL};
use crate::measure::{measure_from_basis, ProjectiveMeasure};
use crate::state::DensityOperator;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Magnitude of the non-informative attraction prior.
pub const ATTRACTION_PRIOR: f64 = 0.25;

/// Default tolerance for the weak resolution of unity, `Tr(rho ΣP(π_n)) = 1`.
pub const WEAK_RESOLUTION_TOL: f64 = 1e-8;

/// One alternative decorated with emotion amplitudes over the subject space.
#[derive(Debug, Clone, PartialEq)]
pub struct Prospect {
    alternative_index: usize,
    emotion_amplitudes: ComplexVector,
}

impl Prospect {
    pub fn new(alternative_index: usize, emotion_amplitudes: ComplexVector) -> Result<Self> {
        if emotion_amplitudes.dim() == 0 {
            return Err(Error::EmptyInput("emotion amplitudes"));
        }
        if emotion_amplitudes.norm() <= DEFAULT_TOL {
            return Err(Error::InvalidProspect {
                reason: format!("alternative {alternative_index} has a zero emotion vector"),
            });
        }
        Ok(Prospect {
            alternative_index,
            emotion_amplitudes,
        })
    }

    pub fn alternative_index(&self) -> usize {
        self.alternative_index
    }

    pub fn emotion_amplitudes(&self) -> &ComplexVector {
        &self.emotion_amplitudes
    }
}

/// Family of prospects covering every alternative of one measure, forming a
/// positive operator-valued measure on subject ⊗ alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ProspectMeasure {
    prospects: Vec<Prospect>,
    alternative_basis: ProjectiveMeasure,
    alternative_kets: Vec<ComplexVector>,
    subject_dim: usize,
}

impl ProspectMeasure {
    /// Builds the measure from an orthonormal alternative basis and one
    /// emotion vector per alternative.
    pub fn new(
        alternative_kets: Vec<ComplexVector>,
        emotions: Vec<ComplexVector>,
    ) -> Result<Self> {
        let alternative_basis = measure_from_basis(&alternative_kets)?;
        if emotions.len() != alternative_kets.len() {
            return Err(Error::DimensionMismatch {
                context: "one emotion vector per alternative",
                expected: alternative_kets.len(),
                actual: emotions.len(),
            });
        }
        let subject_dim = emotions[0].dim();
        let prospects = emotions
            .into_iter()
            .enumerate()
            .map(|(n, b)| {
                if b.dim() != subject_dim {
                    return Err(Error::DimensionMismatch {
                        context: "emotion vector dimension",
                        expected: subject_dim,
                        actual: b.dim(),
                    });
                }
                Prospect::new(n, b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProspectMeasure {
            prospects,
            alternative_basis,
            alternative_kets,
            subject_dim,
        })
    }

    /// Like [`ProspectMeasure::new`], but rescales the whole emotion family
    /// by one common factor so that the weak resolution of unity holds for
    /// the given state: `Tr(rho Σ_n P(π_n)) = 1`.
    pub fn calibrated(
        alternative_kets: Vec<ComplexVector>,
        emotions: Vec<ComplexVector>,
        rho: &DensityOperator,
    ) -> Result<Self> {
        let raw = ProspectMeasure::new(alternative_kets.clone(), emotions.clone())?;
        if rho.dim() != raw.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "state vs prospect space",
                expected: raw.total_dim(),
                actual: rho.dim(),
            });
        }
        let mut weight = 0.0;
        for op in prospect_operators(&raw)? {
            weight += rho.matrix().matmul(&op)?.trace()?.re;
        }
        if weight <= DEFAULT_TOL {
            return Err(Error::InvalidProspect {
                reason: format!("state assigns total weight {weight} to the prospect family"),
            });
        }
        let scale = Complex::new(1.0 / weight.sqrt(), 0.0);
        let scaled = emotions.into_iter().map(|b| b.scale(scale)).collect();
        ProspectMeasure::new(alternative_kets, scaled)
    }

    pub fn prospects(&self) -> &[Prospect] {
        &self.prospects
    }

    pub fn alternative_basis(&self) -> &ProjectiveMeasure {
        &self.alternative_basis
    }

    pub fn alternative_kets(&self) -> &[ComplexVector] {
        &self.alternative_kets
    }

    pub fn alternative_count(&self) -> usize {
        self.prospects.len()
    }

    pub fn subject_dim(&self) -> usize {
        self.subject_dim
    }

    /// Dimension of the composite subject ⊗ alternatives space.
    pub fn total_dim(&self) -> usize {
        self.subject_dim * self.alternative_basis.space_dim()
    }

    /// The (unnormalized) prospect state `|π_n> = Σ_α b_nα |α> ⊗ |A_n>`.
    pub fn prospect_ket(&self, n: usize) -> Result<ComplexVector> {
        let prospect = self.prospects.get(n).ok_or(Error::OutcomeOutOfRange {
            index: n,
            count: self.prospects.len(),
        })?;
        Ok(tensor_product_vec(
            prospect.emotion_amplitudes(),
            &self.alternative_kets[n],
        ))
    }
}

/// The rank-1 positive operators `P(π_n) = |π_n><π_n|`. They are idempotent
/// only when the emotion vector has unit norm, and they satisfy
/// `P(π_m) P(π_n) = δ_mn <z_n|z_n> P(π_n)`.
pub fn prospect_operators(pm: &ProspectMeasure) -> Result<Vec<ComplexMatrix>> {
    (0..pm.alternative_count())
        .map(|n| {
            let ket = pm.prospect_ket(n)?;
            Ok(ket.outer(&ket))
        })
        .collect()
}

/// `|Tr(rho Σ_n P(π_n)) - 1|`: how far the family is from resolving the
/// identity in the weak, state-averaged sense.
pub fn weak_resolution_residual(rho: &DensityOperator, pm: &ProspectMeasure) -> Result<f64> {
    if rho.dim() != pm.total_dim() {
        return Err(Error::DimensionMismatch {
            context: "state vs prospect space",
            expected: pm.total_dim(),
            actual: rho.dim(),
        });
    }
    let mut total = 0.0;
    for op in prospect_operators(pm)? {
        total += rho.matrix().matmul(&op)?.trace()?.re;
    }
    Ok((total - 1.0).abs())
}

/// `p(π_n) = Tr(rho P(π_n))` for every prospect, after checking the weak
/// resolution of unity at the default tolerance.
pub fn prospect_probabilities(rho: &DensityOperator, pm: &ProspectMeasure) -> Result<Vec<f64>> {
    prospect_probabilities_with_tol(rho, pm, WEAK_RESOLUTION_TOL)
}

/// [`prospect_probabilities`] with an explicit weak-resolution tolerance.
pub fn prospect_probabilities_with_tol(
    rho: &DensityOperator,
    pm: &ProspectMeasure,
    tolerance: f64,
) -> Result<Vec<f64>> {
    let residual = weak_resolution_residual(rho, pm)?;
    if residual > tolerance {
        return Err(Error::WeakResolutionViolated {
            residual,
            tolerance,
        });
    }
    let slack = tolerance.max(DEFAULT_TOL);
    let mut probs = Vec::with_capacity(pm.alternative_count());
    for op in prospect_operators(pm)? {
        let value = rho.matrix().matmul(&op)?.trace()?.re;
        if !(-slack..=1.0 + slack).contains(&value) {
            return Err(Error::InvalidDistribution {
                reason: format!("prospect probability {value} outside [0, 1]"),
            });
        }
        probs.push(value.clamp(0.0, 1.0));
    }
    Ok(probs)
}

/// A prospect probability vector split into utility fractions and attraction
/// factors, `p = f + q`, with `Σf = 1` and `Σq = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProspectDecomposition {
    p: Vec<f64>,
    f: Vec<f64>,
    q: Vec<f64>,
    utilities: Option<Vec<f64>>,
}

impl ProspectDecomposition {
    /// Validates the decomposition identities. `tolerance` bounds the sum
    /// checks (it is widened to the weak-resolution residual the caller
    /// accepted when the numbers come from a quantum state).
    pub fn new(
        p: Vec<f64>,
        f: Vec<f64>,
        q: Vec<f64>,
        utilities: Option<Vec<f64>>,
        tolerance: f64,
    ) -> Result<Self> {
        let count = p.len();
        if count < 2 {
            return Err(Error::TooFewOutcomes { count });
        }
        if f.len() != count || q.len() != count {
            return Err(Error::DimensionMismatch {
                context: "decomposition component lengths",
                expected: count,
                actual: f.len().min(q.len()),
            });
        }
        if let Some(a) = &utilities {
            if a.len() != count {
                return Err(Error::DimensionMismatch {
                    context: "utility attribute length",
                    expected: count,
                    actual: a.len(),
                });
            }
        }
        let slack = tolerance.max(DEFAULT_TOL);
        for n in 0..count {
            if (p[n] - f[n] - q[n]).abs() > DEFAULT_TOL {
                return Err(Error::InvalidDistribution {
                    reason: format!("p ≠ f + q at index {n}"),
                });
            }
            if !(-slack..=1.0 + slack).contains(&p[n]) {
                return Err(Error::InvalidDistribution {
                    reason: format!("prospect probability {} outside [0, 1]", p[n]),
                });
            }
            if !(-slack..=1.0 + slack).contains(&f[n]) {
                return Err(Error::InvalidDistribution {
                    reason: format!("utility fraction {} outside [0, 1]", f[n]),
                });
            }
            if !(-1.0 - slack..=1.0 + slack).contains(&q[n]) {
                return Err(Error::InvalidDistribution {
                    reason: format!("attraction factor {} outside [-1, 1]", q[n]),
                });
            }
        }
        let sum_p: f64 = p.iter().sum();
        let sum_f: f64 = f.iter().sum();
        let sum_q: f64 = q.iter().sum();
        if (sum_p - 1.0).abs() > slack {
            return Err(Error::InvalidDistribution {
                reason: format!("prospect probabilities sum to {sum_p}"),
            });
        }
        if (sum_f - 1.0).abs() > slack {
            return Err(Error::InvalidDistribution {
                reason: format!("utility fractions sum to {sum_f}"),
            });
        }
        if sum_q.abs() > slack {
            return Err(Error::InvalidDistribution {
                reason: format!("attraction factors sum to {sum_q}"),
            });
        }
        Ok(ProspectDecomposition { p, f, q, utilities })
    }

    /// Builds the decomposition used in behavioral fits: utility fractions
    /// from the Luce rule over nonnegative attributes, attraction factors
    /// from the signed non-informative prior.
    pub fn from_attributes(attributes: &[f64], signs: &[i8]) -> Result<Self> {
        let f = luce_utility(attributes)?;
        let p = apply_prior(&f, signs)?;
        let q = p.iter().zip(&f).map(|(pi, fi)| pi - fi).collect();
        ProspectDecomposition::new(p, f, q, Some(attributes.to_vec()), DEFAULT_TOL)
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn utilities(&self) -> Option<&[f64]> {
        self.utilities.as_deref()
    }
}

/// Splits the prospect probabilities of a state into utility fractions
/// (diagonal in the subject index) and attraction factors (off-diagonal
/// interference). The diagonal part is normalized to sum to one, so the
/// interference part sums to zero; the raw diagonal/off-diagonal split is
/// cross-checked against the trace probabilities before normalizing.
pub fn decompose(rho: &DensityOperator, pm: &ProspectMeasure) -> Result<ProspectDecomposition> {
    decompose_with_tol(rho, pm, WEAK_RESOLUTION_TOL)
}

/// [`decompose`] with an explicit weak-resolution tolerance.
pub fn decompose_with_tol(
    rho: &DensityOperator,
    pm: &ProspectMeasure,
    tolerance: f64,
) -> Result<ProspectDecomposition> {
    let p = prospect_probabilities_with_tol(rho, pm, tolerance)?;
    let subject_dim = pm.subject_dim();

    let mut f_raw = Vec::with_capacity(pm.alternative_count());
    let mut q_raw = Vec::with_capacity(pm.alternative_count());
    for (n, prospect) in pm.prospects().iter().enumerate() {
        let b = prospect.emotion_amplitudes();
        let ket_a = &pm.alternative_kets()[n];
        // images rho |α A_n> for every subject index α
        let images: Vec<ComplexVector> = (0..subject_dim)
            .map(|alpha| {
                let basis_alpha = ComplexVector::basis(subject_dim, alpha);
                rho.matrix().apply(&tensor_product_vec(&basis_alpha, ket_a))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f_n = 0.0;
        let mut q_n = Complex::new(0.0, 0.0);
        for alpha in 0..subject_dim {
            let bra_alpha = tensor_product_vec(&ComplexVector::basis(subject_dim, alpha), ket_a);
            for (beta, image) in images.iter().enumerate() {
                let element = bra_alpha.inner(image);
                let coeff = b.entries()[alpha].conj() * b.entries()[beta];
                if alpha == beta {
                    f_n += (coeff * element).re;
                } else {
                    q_n += coeff * element;
                }
            }
        }
        if q_n.im.abs() > DEFAULT_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("attraction factor has imaginary residue {}", q_n.im),
            });
        }
        f_raw.push(f_n);
        q_raw.push(q_n.re);
    }

    // the diagonal + off-diagonal parts must reassemble the trace values
    for n in 0..p.len() {
        if (p[n] - f_raw[n] - q_raw[n]).abs() > DEFAULT_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!(
                    "diagonal/off-diagonal split disagrees with the trace at prospect {n}"
                ),
            });
        }
    }

    let sum_f: f64 = f_raw.iter().sum();
    if sum_f <= DEFAULT_TOL {
        return Err(Error::InvalidProspect {
            reason: format!("diagonal weight {sum_f} too small to normalize"),
        });
    }
    let f: Vec<f64> = f_raw.iter().map(|v| v / sum_f).collect();
    let q: Vec<f64> = p.iter().zip(&f).map(|(pi, fi)| pi - fi).collect();
    ProspectDecomposition::new(p, f, q, None, tolerance)
}

/// Luce rule: probabilities proportional to nonnegative attribute values.
pub fn luce_utility(attributes: &[f64]) -> Result<Vec<f64>> {
    if attributes.is_empty() {
        return Err(Error::EmptyInput("utility attributes"));
    }
    let mut total = 0.0;
    for &a in attributes {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("utility attribute {a} must be finite and nonnegative"),
            });
        }
        total += a;
    }
    if total <= 0.0 {
        return Err(Error::InvalidParameter {
            reason: "all utility attributes are zero".into(),
        });
    }
    Ok(attributes.iter().map(|a| a / total).collect())
}

/// Shifts utility fractions by the signed ±0.25 prior. Unbalanced sign
/// patterns are mean-centered so the shifts sum to zero; results falling
/// outside `[0, 1]` are clamped and the vector renormalized.
pub fn apply_prior(f: &[f64], signs: &[i8]) -> Result<Vec<f64>> {
    if f.len() < 2 {
        return Err(Error::TooFewOutcomes { count: f.len() });
    }
    if signs.len() != f.len() {
        return Err(Error::DimensionMismatch {
            context: "prior signs",
            expected: f.len(),
            actual: signs.len(),
        });
    }
    for &s in signs {
        if !(-1..=1).contains(&s) {
            return Err(Error::InvalidParameter {
                reason: format!("prior sign {s} must be -1, 0, or +1"),
            });
        }
    }
    let sum_f: f64 = f.iter().sum();
    if (sum_f - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvalidDistribution {
            reason: format!("utility fractions sum to {sum_f}, expected 1"),
        });
    }
    let mut shifts: Vec<f64> = signs.iter().map(|&s| ATTRACTION_PRIOR * s as f64).collect();
    let imbalance: f64 = shifts.iter().sum::<f64>() / shifts.len() as f64;
    if imbalance.abs() > 0.0 {
        for s in &mut shifts {
            *s -= imbalance;
        }
    }
    let mut p: Vec<f64> = f.iter().zip(&shifts).map(|(fi, si)| fi + si).collect();
    let clamped = p.iter().any(|&v| !(0.0..=1.0).contains(&v));
    if clamped {
        for v in &mut p {
            *v = v.clamp(0.0, 1.0);
        }
        let total: f64 = p.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution {
                reason: "prior clamping annihilated the distribution".into(),
            });
        }
        for v in &mut p {
            *v /= total;
        }
    }
    Ok(p)
}

/// Seeded family of random emotion vectors: independent standard complex
/// Gaussian components (unit mean square modulus). The common normalization
/// demanded by the weak resolution of unity is applied later, by
/// [`ProspectMeasure::calibrated`], once the state is known.
pub fn sample_emotions(subject_dim: usize, count: usize, seed: u64) -> Result<Vec<ComplexVector>> {
    if subject_dim == 0 {
        return Err(Error::EmptyInput("subject dimension"));
    }
    if count == 0 {
        return Err(Error::EmptyInput("emotion sample count"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    (0..count)
        .map(|_| {
            ComplexVector::new(
                (0..subject_dim)
                    .map(|_| {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        Complex::new(re * scale, im * scale)
                    })
                    .collect(),
            )
        })
        .collect()
}
