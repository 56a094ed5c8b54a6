//! Classical coins and dice: fair distributions, classical conditionals, and
//! a deterministic parallel Monte Carlo sampler used to verify analytic
//! probabilities by frequency.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Identifier of the sampling generator, recorded in every report so runs
/// can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Normalized probability vector over a finite set of outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution {
    probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyInput("probability vector"));
        }
        for &p in &probs {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidDistribution {
                    reason: format!("probability {p} outside [0, 1]"),
                });
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {total}"),
            });
        }
        Ok(ClassicalDistribution { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn outcome_count(&self) -> usize {
        self.probs.len()
    }
}

/// The fair `n`-sided distribution, all entries `1/n`.
pub fn fair_distribution(n: usize) -> Result<ClassicalDistribution> {
    if n < 2 {
        return Err(Error::TooFewOutcomes { count: n });
    }
    ClassicalDistribution::new(vec![1.0 / n as f64; n])
}

/// Both families of classical conditionals of a joint table. Slices whose
/// conditioning marginal vanishes have no conditional and are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalConditionals {
    /// `given_row[n][k] = f(B_k | A_n)`.
    pub given_row: Vec<Option<Vec<f64>>>,
    /// `given_col[k][n] = f(A_n | B_k)`.
    pub given_col: Vec<Option<Vec<f64>>>,
}

/// Conditional probabilities in both directions, `f(X|Y) = f(X ∩ Y)/f(Y)`.
pub fn classical_conditional(joint: &[Vec<f64>]) -> Result<ClassicalConditionals> {
    if joint.is_empty() || joint[0].is_empty() {
        return Err(Error::EmptyInput("joint table"));
    }
    let cols = joint[0].len();
    let mut total = 0.0;
    for row in joint {
        if row.len() != cols {
            return Err(Error::InvalidDistribution {
                reason: "ragged joint table".into(),
            });
        }
        for &v in row {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidDistribution {
                    reason: format!("joint entry {v} is negative"),
                });
            }
            total += v;
        }
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDistribution {
            reason: format!("joint table sums to {total}"),
        });
    }
    let given_row = joint
        .iter()
        .map(|row| {
            let marginal: f64 = row.iter().sum();
            if marginal > 0.0 {
                Some(row.iter().map(|v| v / marginal).collect())
            } else {
                None
            }
        })
        .collect();
    let given_col = (0..cols)
        .map(|k| {
            let marginal: f64 = joint.iter().map(|row| row[k]).sum();
            if marginal > 0.0 {
                Some(joint.iter().map(|row| row[k] / marginal).collect())
            } else {
                None
            }
        })
        .collect();
    Ok(ClassicalConditionals {
        given_row,
        given_col,
    })
}

/// Outcome frequencies from repeated sampling, with the analytic reference
/// and per-outcome three-sigma binomial bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleReport {
    pub trials: u64,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    pub reference: Vec<f64>,
    pub max_abs_deviation: f64,
    pub three_sigma: Vec<f64>,
    pub rng_algorithm: String,
}

impl SampleReport {
    /// Whether every frequency sits within its three-sigma bound.
    pub fn within_bounds(&self) -> bool {
        self.frequencies
            .iter()
            .zip(&self.reference)
            .zip(&self.three_sigma)
            .all(|((freq, rf), bound)| (freq - rf).abs() <= *bound)
    }
}

// first outcome whose cumulative probability strictly exceeds u, so
// zero-probability outcomes are never selected
fn sample_index(cumulative: &[f64], u: f64) -> usize {
    cumulative
        .partition_point(|&c| c <= u)
        .min(cumulative.len() - 1)
}

/// Draws `trials` outcomes by inverse-CDF sampling and tallies frequencies.
/// Each trial uses its own counter-derived stream of the seeded generator,
/// so the counts are identical whether trials run serially or in parallel.
pub fn monte_carlo(dist: &ClassicalDistribution, trials: u64, seed: u64) -> Result<SampleReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            reason: "at least one trial required".into(),
        });
    }
    let n = dist.outcome_count();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cumulative.push(acc);
    }
    cumulative[n - 1] = 1.0;

    let counts = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; n],
            |mut hist, trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let u: f64 = rng.random();
                hist[sample_index(&cumulative, u)] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let reference = dist.probs().to_vec();
    let max_abs_deviation = frequencies
        .iter()
        .zip(&reference)
        .map(|(f, r)| (f - r).abs())
        .fold(0.0, f64::max);
    let three_sigma = reference
        .iter()
        .map(|&p| 3.0 * (p * (1.0 - p) / trials as f64).sqrt())
        .collect();
    Ok(SampleReport {
        trials,
        counts,
        frequencies,
        reference,
        max_abs_deviation,
        three_sigma,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}
