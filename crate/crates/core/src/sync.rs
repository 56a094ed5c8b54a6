//! Joint and conditional probabilities for two measurements performed at the
//! same time in different factors of a composite system.

use crate::decision::lift_projector;
use crate::error::{Error, Result};
use crate::linalg::DEFAULT_TOL;
use crate::measure::{ProjectiveMeasure, NULL_EVENT_TOL};
use crate::state::DensityOperator;

/// Which event of a joint table is being conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Given {
    /// A row outcome: condition on `A_n`, distribute over columns.
    Row(usize),
    /// A column outcome: condition on `B_k`, distribute over rows.
    Col(usize),
}

/// `N_A x N_B` table of joint outcome probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    table: Vec<Vec<f64>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl JointDistribution {
    pub fn new(
        table: Vec<Vec<f64>>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
    ) -> Result<Self> {
        if table.is_empty() || table[0].is_empty() {
            return Err(Error::EmptyInput("joint probability table"));
        }
        let cols = table[0].len();
        if table.len() != row_labels.len() || cols != col_labels.len() {
            return Err(Error::DimensionMismatch {
                context: "joint table vs labels",
                expected: table.len(),
                actual: row_labels.len(),
            });
        }
        let mut total = 0.0;
        for row in &table {
            if row.len() != cols {
                return Err(Error::InvalidDistribution {
                    reason: "ragged joint table".into(),
                });
            }
            for &v in row {
                if !(-DEFAULT_TOL..=1.0 + DEFAULT_TOL).contains(&v) {
                    return Err(Error::InvalidDistribution {
                        reason: format!("joint entry {v} outside [0, 1]"),
                    });
                }
                total += v;
            }
        }
        if (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidDistribution {
                reason: format!("joint table sums to {total}"),
            });
        }
        Ok(JointDistribution {
            table,
            row_labels,
            col_labels,
        })
    }

    pub fn rows(&self) -> usize {
        self.table.len()
    }

    pub fn cols(&self) -> usize {
        self.table[0].len()
    }

    pub fn value(&self, n: usize, k: usize) -> f64 {
        self.table[n][k]
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    /// Transposed table: the joint of the interchanged events.
    pub fn transposed(&self) -> JointDistribution {
        let mut table = vec![vec![0.0; self.rows()]; self.cols()];
        for (n, row) in self.table.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                table[k][n] = v;
            }
        }
        JointDistribution {
            table,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }
}

/// `table[n][k] = Tr(rho · P(A_n) ⊗ P(B_k))` for measures acting in two named
/// factors. Any other factors (such as a subject space) are traced out first.
pub fn joint_probability(
    rho: &DensityOperator,
    first: (&str, &ProjectiveMeasure),
    second: (&str, &ProjectiveMeasure),
) -> Result<JointDistribution> {
    let (label_a, ma) = first;
    let (label_b, mb) = second;
    rho.space().position(label_a)?;
    rho.space().position(label_b)?;
    if label_a == label_b {
        return Err(Error::InvalidParameter {
            reason: format!("joint measurement needs two distinct factors, got '{label_a}' twice"),
        });
    }
    let bystanders: Vec<&str> = rho
        .space()
        .factors()
        .iter()
        .map(|f| f.label())
        .filter(|l| *l != label_a && *l != label_b)
        .collect();
    let reduced;
    let rho_ab = if bystanders.is_empty() {
        rho
    } else {
        reduced = rho.trace_out(&bystanders)?;
        &reduced
    };
    let space = rho_ab.space().clone();
    let lifted_b: Vec<_> = mb
        .projectors()
        .iter()
        .map(|p| lift_projector(p, &space, label_b))
        .collect::<Result<Vec<_>>>()?;
    let mut table = vec![vec![0.0; mb.outcome_count()]; ma.outcome_count()];
    for (n, row) in table.iter_mut().enumerate() {
        let pa = lift_projector(ma.projector(n)?, &space, label_a)?;
        for (k, cell) in row.iter_mut().enumerate() {
            let joint_op = pa.matrix().matmul(lifted_b[k].matrix())?;
            let value = rho_ab.matrix().matmul(&joint_op)?.trace()?.re;
            *cell = value.clamp(0.0, 1.0);
        }
    }
    JointDistribution::new(
        table,
        ma.labels().iter().map(|s| s.to_string()).collect(),
        mb.labels().iter().map(|s| s.to_string()).collect(),
    )
}

/// Conditional distribution over the other axis, given one observed outcome:
/// `p(A_n | B_k) = p(A_n B_k) / p(B_k)` and symmetrically for rows.
pub fn spatial_conditional(joint: &JointDistribution, given: Given) -> Result<Vec<f64>> {
    match given {
        Given::Row(n) => {
            if n >= joint.rows() {
                return Err(Error::OutcomeOutOfRange {
                    index: n,
                    count: joint.rows(),
                });
            }
            let marginal: f64 = joint.table[n].iter().sum();
            if marginal <= NULL_EVENT_TOL {
                return Err(Error::NullConditioning {
                    probability: marginal,
                });
            }
            Ok(joint.table[n].iter().map(|v| v / marginal).collect())
        }
        Given::Col(k) => {
            if k >= joint.cols() {
                return Err(Error::OutcomeOutOfRange {
                    index: k,
                    count: joint.cols(),
                });
            }
            let marginal: f64 = joint.table.iter().map(|row| row[k]).sum();
            if marginal <= NULL_EVENT_TOL {
                return Err(Error::NullConditioning {
                    probability: marginal,
                });
            }
            Ok(joint.table.iter().map(|row| row[k] / marginal).collect())
        }
    }
}

/// Row and column marginals `p(A_n) = Σ_k table[n][k]`, `p(B_k) = Σ_n ...`.
pub fn marginals(joint: &JointDistribution) -> (Vec<f64>, Vec<f64>) {
    let row: Vec<f64> = joint.table.iter().map(|r| r.iter().sum()).collect();
    let mut col = vec![0.0; joint.cols()];
    for r in &joint.table {
        for (k, v) in r.iter().enumerate() {
            col[k] += v;
        }
    }
    (row, col)
}
