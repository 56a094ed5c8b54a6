//! Stage-by-stage execution of a validated scenario against the simulation
//! core, with re-validation of every table before it is emitted.

use crate::scenario::{
    load_scenario, Cx, DecayKind, FactorState, InitialState, Scenario, ScenarioError, Stage,
};
use qdice_core::classical::{monte_carlo, ClassicalDistribution, SampleReport};
use qdice_core::decision::{lift_measure, DecayModel, SeparationDynamics};
use qdice_core::measure::{
    luders_reduce, measure_from_basis, measure_from_subspaces, outcome_probabilities,
    ProjectiveMeasure, NULL_EVENT_TOL,
};
use qdice_core::qdt::{decompose_with_tol, ProspectDecomposition, ProspectMeasure};
use qdice_core::state::{evolve, uniform_superposition, EvolutionModel};
use qdice_core::sync::{joint_probability, spatial_conditional, Given};
use qdice_core::{Complex64, CompositeSpace, ComplexMatrix, ComplexVector, DensityOperator};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt;
use std::time::{SystemTime, UNIX_EPOCH};

/// Default tolerance for re-validating emitted tables; wider than the
/// core's structural tolerance to absorb accumulated rounding.
pub const DEFAULT_TABLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed_override: Option<u64>,
    pub tolerance: f64,
    pub dump_states: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed_override: None,
            tolerance: DEFAULT_TABLE_TOL,
            dump_states: false,
        }
    }
}

/// Execution failure, classified for the process exit status.
#[derive(Debug)]
pub enum RunError {
    Parse { message: String },
    Semantic { stage: Option<usize>, message: String },
    Numeric { stage: Option<usize>, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse { .. } => 3,
            RunError::Semantic { .. } => 4,
            RunError::Numeric { .. } => 5,
        }
    }

    pub fn class(&self) -> &'static str {
        match self {
            RunError::Parse { .. } => "parse",
            RunError::Semantic { .. } => "semantic",
            RunError::Numeric { .. } => "numeric",
        }
    }

    pub fn stage(&self) -> Option<usize> {
        match self {
            RunError::Parse { .. } => None,
            RunError::Semantic { stage, .. } | RunError::Numeric { stage, .. } => *stage,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |stage: &Option<usize>| match stage {
            Some(i) => format!(" at stage {i}"),
            None => String::new(),
        };
        match self {
            RunError::Parse { message } => write!(out, "parse error: {message}"),
            RunError::Semantic { stage, message } => {
                write!(out, "semantic error{}: {message}", at(stage))
            }
            RunError::Numeric { stage, message } => {
                write!(out, "numeric invariant violated{}: {message}", at(stage))
            }
        }
    }
}

impl std::error::Error for RunError {}

impl From<ScenarioError> for RunError {
    fn from(err: ScenarioError) -> Self {
        match err {
            ScenarioError::Parse { message } => RunError::Parse { message },
            ScenarioError::Semantic { stage, message } => RunError::Semantic { stage, message },
        }
    }
}

fn semantic(stage: usize, err: impl fmt::Display) -> RunError {
    RunError::Semantic {
        stage: Some(stage),
        message: err.to_string(),
    }
}

fn numeric(stage: usize, err: impl fmt::Display) -> RunError {
    RunError::Numeric {
        stage: Some(stage),
        message: err.to_string(),
    }
}

/// One probability table with row and column headers.
#[derive(Debug, Clone, Serialize)]
pub struct NamedTable {
    pub name: String,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl NamedTable {
    pub fn single_row(name: &str, row: &str, cols: Vec<String>, values: Vec<f64>) -> Self {
        NamedTable {
            name: name.to_string(),
            rows: vec![row.to_string()],
            cols,
            values: vec![values],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleBlock {
    pub trials: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
    pub frequencies: Vec<f64>,
    pub reference: Vec<f64>,
    pub three_sigma: Vec<f64>,
    pub max_abs_deviation: f64,
    pub within_three_sigma: bool,
    pub rng_algorithm: String,
}

impl SampleBlock {
    fn from_report(report: &SampleReport, seed: u64) -> Self {
        SampleBlock {
            trials: report.trials,
            seed,
            counts: report.counts.clone(),
            frequencies: report.frequencies.clone(),
            reference: report.reference.clone(),
            three_sigma: report.three_sigma.clone(),
            max_abs_deviation: report.max_abs_deviation,
            within_three_sigma: report.within_bounds(),
            rng_algorithm: report.rng_algorithm.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateDump {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<Cx>>,
}

fn dump_state(rho: &DensityOperator) -> StateDump {
    let n = rho.dim();
    let entries = rho.matrix().entries();
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| {
            let z = entries[i * n + j];
            Cx(z.re, z.im)
        }).collect())
        .collect();
    StateDump {
        dims: rho.space().dims(),
        matrix,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub index: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<NamedTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub tool: ToolInfo,
    /// Wall-clock seconds since the Unix epoch; the one field two runs of
    /// the same scenario are allowed to differ in.
    pub generated_at_unix: u64,
    pub scenario_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed_override: Option<u64>,
    pub stages: Vec<StageReport>,
}

pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn to_vector(entries: &[Cx]) -> Result<ComplexVector, qdice_core::Error> {
    ComplexVector::new(entries.iter().map(|c| Complex64::new(c.0, c.1)).collect())
}

fn to_matrix(rows: &[Vec<Cx>]) -> Result<ComplexMatrix, qdice_core::Error> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let entries = rows
        .iter()
        .flat_map(|row| row.iter().map(|c| Complex64::new(c.0, c.1)))
        .collect();
    ComplexMatrix::new(n, m, entries)
}

fn build_space(scenario: &Scenario) -> Result<CompositeSpace, RunError> {
    let declared: Vec<(&str, usize)> = scenario
        .spaces
        .iter()
        .map(|d| (d.label.as_str(), d.dim))
        .collect();
    CompositeSpace::compose(&declared).map_err(|e| RunError::Semantic {
        stage: None,
        message: e.to_string(),
    })
}

fn build_initial_state(
    scenario: &Scenario,
    space: &CompositeSpace,
) -> Result<DensityOperator, RunError> {
    let input = |e: qdice_core::Error| RunError::Semantic {
        stage: None,
        message: format!("initial state: {e}"),
    };
    match &scenario.initial_state {
        InitialState::Uniform => {
            let v = uniform_superposition(space.total_dim()).map_err(input)?;
            DensityOperator::pure(&v, space.clone()).map_err(input)
        }
        InitialState::Pure { vector } => {
            let v = to_vector(vector).map_err(input)?;
            DensityOperator::pure(&v, space.clone()).map_err(input)
        }
        InitialState::Density { matrix } => {
            let m = to_matrix(matrix).map_err(input)?;
            DensityOperator::new(m, space.clone()).map_err(input)
        }
        InitialState::Product { factors } => {
            let mut parts = Vec::with_capacity(scenario.spaces.len());
            for decl in &scenario.spaces {
                let factor = factors
                    .iter()
                    .find(|f| f.label == decl.label)
                    .expect("validated: every declared factor present");
                let single = CompositeSpace::single(&decl.label, decl.dim).map_err(input)?;
                let rho = match &factor.state {
                    FactorState::Uniform => {
                        let v = uniform_superposition(decl.dim).map_err(input)?;
                        DensityOperator::pure(&v, single).map_err(input)?
                    }
                    FactorState::Pure { vector } => {
                        let v = to_vector(vector).map_err(input)?;
                        DensityOperator::pure(&v, single).map_err(input)?
                    }
                    FactorState::Density { matrix } => {
                        let m = to_matrix(matrix).map_err(input)?;
                        DensityOperator::new(m, single).map_err(input)?
                    }
                };
                parts.push(rho.matrix().clone());
            }
            let refs: Vec<&ComplexMatrix> = parts.iter().collect();
            let joint = qdice_core::linalg::tensor_product_all(&refs);
            DensityOperator::new(joint, space.clone()).map_err(input)
        }
    }
}

fn outcome_names(m: &ProjectiveMeasure) -> Vec<String> {
    m.labels().iter().map(|s| s.to_string()).collect()
}

/// Entries in `[0, 1]` and total `expected_sum`, within `tol`.
fn check_distribution(
    values: &[f64],
    expected_sum: f64,
    tol: f64,
    what: &str,
    stage: usize,
) -> Result<(), RunError> {
    for &v in values {
        if !v.is_finite() || v < -tol || v > 1.0 + tol {
            return Err(numeric(stage, format!("{what}: entry {v} outside [0, 1]")));
        }
    }
    let total: f64 = values.iter().sum();
    if (total - expected_sum).abs() > tol {
        return Err(numeric(
            stage,
            format!("{what}: entries sum to {total}, expected {expected_sum}"),
        ));
    }
    Ok(())
}

struct Pipeline {
    rho: DensityOperator,
    /// Lifted measure and outcome probabilities of the latest `measure`.
    last_measure: Option<(ProjectiveMeasure, Vec<f64>)>,
    /// Pre-reduction state kept from the latest `condition`, for `wait`.
    unreduced: Option<DensityOperator>,
    /// Most recent analytic table, flattened; `sample` draws against it.
    last_table: Option<Vec<f64>>,
}

pub fn run_scenario_text(text: &str, options: &RunOptions) -> Result<RunResult, RunError> {
    let scenario = load_scenario(text)?;
    let space = build_space(&scenario)?;
    let rho = build_initial_state(&scenario, &space)?;
    let mut pipe = Pipeline {
        rho,
        last_measure: None,
        unreduced: None,
        last_table: None,
    };
    let mut stages = Vec::with_capacity(scenario.stages.len());
    for (index, stage) in scenario.stages.iter().enumerate() {
        let mut report = StageReport {
            index,
            kind: stage.kind().to_string(),
            notes: Vec::new(),
            tables: Vec::new(),
            sample: None,
            state: None,
        };
        execute_stage(stage, index, &mut pipe, options, &mut report)?;
        if options.dump_states || scenario.outputs.iter().any(|o| o == "states") {
            report.state = Some(dump_state(&pipe.rho));
        }
        stages.push(report);
    }
    Ok(RunResult {
        tool: ToolInfo {
            name: "qdice",
            version: env!("CARGO_PKG_VERSION"),
        },
        generated_at_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        scenario_hash: sha256_hex(text),
        seed_override: options.seed_override,
        stages,
    })
}

fn execute_stage(
    stage: &Stage,
    index: usize,
    pipe: &mut Pipeline,
    options: &RunOptions,
    report: &mut StageReport,
) -> Result<(), RunError> {
    let tol = options.tolerance;
    match stage {
        Stage::Measure { factor, basis, subspaces, labels } => {
            let dim = pipe
                .rho
                .space()
                .factor(factor)
                .expect("validated: factor declared")
                .dim();
            let mut m = match (basis, subspaces) {
                (Some(vs), _) => {
                    let vectors = vs
                        .iter()
                        .map(|v| to_vector(v))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| semantic(index, e))?;
                    measure_from_basis(&vectors).map_err(|e| semantic(index, e))?
                }
                (_, Some(groups)) => {
                    let converted = groups
                        .iter()
                        .map(|g| g.iter().map(|v| to_vector(v)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| semantic(index, e))?;
                    measure_from_subspaces(&converted).map_err(|e| semantic(index, e))?
                }
                (None, None) => ProjectiveMeasure::computational(dim)
                    .map_err(|e| semantic(index, e))?,
            };
            if m.space_dim() != dim {
                return Err(semantic(
                    index,
                    format!(
                        "measure acts on dimension {}, factor '{factor}' has dimension {dim}",
                        m.space_dim()
                    ),
                ));
            }
            if let Some(names) = labels {
                m = m
                    .with_labels(names.clone())
                    .map_err(|e| semantic(index, e))?;
            }
            let lifted =
                lift_measure(&m, pipe.rho.space(), factor).map_err(|e| semantic(index, e))?;
            let probs =
                outcome_probabilities(&pipe.rho, &lifted).map_err(|e| numeric(index, e))?;
            check_distribution(&probs, 1.0, tol, "outcome probabilities", index)?;
            report.tables.push(NamedTable::single_row(
                "probabilities",
                factor,
                outcome_names(&m),
                probs.clone(),
            ));
            pipe.last_table = Some(probs.clone());
            pipe.last_measure = Some((lifted, probs));
            pipe.unreduced = None;
        }
        Stage::Condition { outcome } => {
            let (measure, probs) = pipe
                .last_measure
                .as_ref()
                .expect("validated: condition follows measure");
            let projector = measure
                .projector(*outcome)
                .map_err(|e| semantic(index, e))?;
            let before = pipe.rho.clone();
            let reduced = luders_reduce(&pipe.rho, projector).map_err(|e| semantic(index, e))?;
            report.notes.push(format!(
                "conditioned on outcome {} (probability {:.6})",
                outcome, probs[*outcome]
            ));
            pipe.rho = reduced;
            pipe.unreduced = Some(before);
        }
        Stage::Evolve { energies, unitary, duration } => {
            let model = match (energies, unitary) {
                (Some(levels), None) => EvolutionModel::DiagonalPhase {
                    energies: levels.clone(),
                    t0: 0.0,
                    t: duration.unwrap_or(1.0),
                },
                (None, Some(rows)) => {
                    let u = to_matrix(rows).map_err(|e| semantic(index, e))?;
                    EvolutionModel::ExplicitUnitary(u)
                }
                _ => unreachable!("validated: exactly one evolution form"),
            };
            pipe.rho = evolve(&pipe.rho, &model).map_err(|e| semantic(index, e))?;
            if let Some(branch) = &pipe.unreduced {
                // both branches age under the same dynamics
                pipe.unreduced = Some(evolve(branch, &model).map_err(|e| semantic(index, e))?);
            }
        }
        Stage::Wait { tau, t_rel, decay } => {
            let model = match decay.unwrap_or(DecayKind::Exponential) {
                DecayKind::Exponential => DecayModel::Exponential,
                DecayKind::Gaussian => DecayModel::Gaussian,
            };
            let dynamics = SeparationDynamics::with_decay(*tau, *t_rel, model)
                .map_err(|e| semantic(index, e))?;
            let branch = pipe
                .unreduced
                .take()
                .expect("validated: wait follows condition");
            let weight = dynamics.weight();
            pipe.rho = pipe
                .rho
                .mix(&branch, weight)
                .map_err(|e| numeric(index, e))?;
            report
                .notes
                .push(format!("tau/t_rel = {}, reduced-branch weight {weight:.6}", tau / t_rel));
        }
        Stage::Joint { factors, bases } => {
            let mut measures = Vec::with_capacity(2);
            for (slot, factor) in factors.iter().enumerate() {
                let dim = pipe
                    .rho
                    .space()
                    .factor(factor)
                    .expect("validated: factor declared")
                    .dim();
                let m = match bases {
                    Some(bs) => {
                        let vectors = bs[slot]
                            .iter()
                            .map(|v| to_vector(v))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| semantic(index, e))?;
                        measure_from_basis(&vectors).map_err(|e| semantic(index, e))?
                    }
                    None => ProjectiveMeasure::computational(dim)
                        .map_err(|e| semantic(index, e))?,
                };
                if m.space_dim() != dim {
                    return Err(semantic(
                        index,
                        format!("basis dimension {} vs factor '{factor}' dimension {dim}", m.space_dim()),
                    ));
                }
                measures.push(m);
            }
            let joint = joint_probability(
                &pipe.rho,
                (factors[0].as_str(), &measures[0]),
                (factors[1].as_str(), &measures[1]),
            )
            .map_err(|e| semantic(index, e))?;
            let flat: Vec<f64> = joint.table().iter().flatten().copied().collect();
            check_distribution(&flat, 1.0, tol, "joint probabilities", index)?;
            let row_names: Vec<String> = joint.row_labels().to_vec();
            let col_names: Vec<String> = joint.col_labels().to_vec();
            report.tables.push(NamedTable {
                name: "joint".into(),
                rows: row_names.clone(),
                cols: col_names.clone(),
                values: joint.table().to_vec(),
            });

            let (row_marginals, col_marginals) = qdice_core::sync::marginals(&joint);
            let mut given_row = NamedTable {
                name: format!("conditional given {}", factors[0]),
                rows: Vec::new(),
                cols: col_names.clone(),
                values: Vec::new(),
            };
            for (n, marginal) in row_marginals.iter().enumerate() {
                if *marginal <= NULL_EVENT_TOL {
                    report
                        .notes
                        .push(format!("no conditional given null event {}={}", factors[0], row_names[n]));
                    continue;
                }
                let cond =
                    spatial_conditional(&joint, Given::Row(n)).map_err(|e| numeric(index, e))?;
                check_distribution(&cond, 1.0, tol, "conditional probabilities", index)?;
                given_row.rows.push(row_names[n].clone());
                given_row.values.push(cond);
            }
            let mut given_col = NamedTable {
                name: format!("conditional given {}", factors[1]),
                rows: Vec::new(),
                cols: row_names.clone(),
                values: Vec::new(),
            };
            for (k, marginal) in col_marginals.iter().enumerate() {
                if *marginal <= NULL_EVENT_TOL {
                    report
                        .notes
                        .push(format!("no conditional given null event {}={}", factors[1], col_names[k]));
                    continue;
                }
                let cond =
                    spatial_conditional(&joint, Given::Col(k)).map_err(|e| numeric(index, e))?;
                check_distribution(&cond, 1.0, tol, "conditional probabilities", index)?;
                given_col.rows.push(col_names[k].clone());
                given_col.values.push(cond);
            }
            report.tables.push(given_row);
            report.tables.push(given_col);
            pipe.last_table = Some(flat);
        }
        Stage::Qdt { utilities, signs, emotions, state } => {
            let decomposition = match (utilities, emotions) {
                (Some(attrs), None) => {
                    let s = signs.as_ref().expect("validated: signs present");
                    ProspectDecomposition::from_attributes(attrs, s)
                        .map_err(|e| semantic(index, e))?
                }
                (None, Some(amplitudes)) => {
                    let rows = state.as_ref().expect("validated: state present");
                    let emotion_vectors = amplitudes
                        .iter()
                        .map(|v| to_vector(v))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| semantic(index, e))?;
                    let count = emotion_vectors.len();
                    let subject_dim = emotion_vectors[0].dim();
                    let kets = (0..count)
                        .map(|n| ComplexVector::basis(count, n))
                        .collect::<Vec<_>>();
                    let space = CompositeSpace::compose(&[("S", subject_dim), ("A", count)])
                        .map_err(|e| semantic(index, e))?;
                    let matrix = to_matrix(rows).map_err(|e| semantic(index, e))?;
                    let rho = DensityOperator::new(matrix, space)
                        .map_err(|e| semantic(index, e))?;
                    let pm = ProspectMeasure::calibrated(kets, emotion_vectors, &rho)
                        .map_err(|e| semantic(index, e))?;
                    decompose_with_tol(&rho, &pm, tol).map_err(|e| numeric(index, e))?
                }
                _ => unreachable!("validated: exactly one qdt form"),
            };
            check_distribution(decomposition.p(), 1.0, tol, "prospect probabilities", index)?;
            check_distribution(decomposition.f(), 1.0, tol, "utility fractions", index)?;
            for &q in decomposition.q() {
                if !q.is_finite() || q.abs() > 1.0 + tol {
                    return Err(numeric(index, format!("attraction factor {q} outside [-1, 1]")));
                }
            }
            let q_sum: f64 = decomposition.q().iter().sum();
            if q_sum.abs() > tol {
                return Err(numeric(index, format!("attraction factors sum to {q_sum}")));
            }
            let cols: Vec<String> = (1..=decomposition.p().len()).map(|n| n.to_string()).collect();
            let mut rows = vec!["p".to_string(), "f".to_string(), "q".to_string()];
            let mut values = vec![
                decomposition.p().to_vec(),
                decomposition.f().to_vec(),
                decomposition.q().to_vec(),
            ];
            if let Some(attrs) = decomposition.utilities() {
                rows.push("utility".to_string());
                values.push(attrs.to_vec());
            }
            report.tables.push(NamedTable {
                name: "prospect decomposition".into(),
                rows,
                cols,
                values,
            });
            pipe.last_table = Some(decomposition.p().to_vec());
        }
        Stage::Sample { trials, seed } => {
            let table = pipe
                .last_table
                .as_ref()
                .expect("validated: table available");
            // clamp emission-tolerance residue before the strict 1e-12 gate
            let total: f64 = table.iter().map(|p| p.max(0.0)).sum();
            let cleaned: Vec<f64> = table.iter().map(|p| p.max(0.0) / total).collect();
            let dist = ClassicalDistribution::new(cleaned).map_err(|e| numeric(index, e))?;
            let effective_seed = options.seed_override.unwrap_or(*seed);
            let sample_report =
                monte_carlo(&dist, *trials, effective_seed).map_err(|e| semantic(index, e))?;
            report.sample = Some(SampleBlock::from_report(&sample_report, effective_seed));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> RunResult {
        run_scenario_text(text, &RunOptions::default()).unwrap()
    }

    #[test]
    fn uniform_coin_measure_is_fair() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{"type": "measure", "factor": "A"}]
        }"#);
        let table = &result.stages[0].tables[0];
        assert!((table.values[0][0] - 0.5).abs() < 1e-12);
        assert!((table.values[0][1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn repeat_after_condition_is_deterministic() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "condition", "outcome": 0},
                {"type": "measure", "factor": "A"}
            ]
        }"#);
        let repeat = &result.stages[2].tables[0];
        assert!((repeat.values[0][0] - 1.0).abs() < 1e-12);
        assert!(repeat.values[0][1].abs() < 1e-12);
    }

    #[test]
    fn long_wait_restores_unconditioned_second_measure() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}, {"label": "B", "dim": 6}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "condition", "outcome": 0},
                {"type": "wait", "tau": 100.0, "t_rel": 1.0},
                {"type": "measure", "factor": "B"}
            ]
        }"#);
        let die = &result.stages[3].tables[0];
        for p in &die.values[0] {
            assert!((p - 1.0 / 6.0).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_stage_emits_joint_and_both_conditionals() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}, {"label": "B", "dim": 2}],
            "initial_state": {"type": "pure",
                "vector": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]},
            "stages": [{"type": "joint", "factors": ["A", "B"]}]
        }"#);
        let tables = &result.stages[0].tables;
        assert_eq!(tables.len(), 3);
        assert!((tables[0].values[0][0] - 0.5).abs() < 1e-12);
        assert!(tables[0].values[0][1].abs() < 1e-12);
        // Bell state: conditionals are deterministic
        assert!((tables[1].values[0][0] - 1.0).abs() < 1e-10);
        assert!((tables[2].values[1][1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qdt_attribute_stage_reports_decoy_numbers() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{"type": "qdt", "utilities": [2.0, 3.0], "signs": [1, -1]}]
        }"#);
        let table = &result.stages[0].tables[0];
        assert!((table.values[0][0] - 0.65).abs() < 1e-12);
        assert!((table.values[0][1] - 0.35).abs() < 1e-12);
        assert!((table.values[1][0] - 0.4).abs() < 1e-12);
        assert!((table.values[2][0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sample_stage_uses_seed_override() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "sample", "trials": 1000, "seed": 7}
            ]
        }"#;
        let plain = run_scenario_text(text, &RunOptions::default()).unwrap();
        let overridden = run_scenario_text(
            text,
            &RunOptions {
                seed_override: Some(99),
                ..RunOptions::default()
            },
        )
        .unwrap();
        let a = plain.stages[1].sample.as_ref().unwrap();
        let b = overridden.stages[1].sample.as_ref().unwrap();
        assert_eq!(a.seed, 7);
        assert_eq!(b.seed, 99);
        assert_ne!(a.counts, b.counts);
    }

    #[test]
    fn conditioning_on_null_event_is_semantic_error() {
        let err = run_scenario_text(
            r#"{
                "version": 1,
                "spaces": [{"label": "A", "dim": 2}],
                "initial_state": {"type": "pure", "vector": [[1.0, 0.0], [0.0, 0.0]]},
                "stages": [
                    {"type": "measure", "factor": "A"},
                    {"type": "condition", "outcome": 1}
                ]
            }"#,
            &RunOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert_eq!(err.stage(), Some(1));
        assert!(err.to_string().contains("null event"));
    }

    #[test]
    fn non_orthonormal_basis_is_semantic_error() {
        let err = run_scenario_text(
            r#"{
                "version": 1,
                "spaces": [{"label": "A", "dim": 2}],
                "initial_state": {"type": "uniform"},
                "stages": [{
                    "type": "measure", "factor": "A",
                    "basis": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [1.0, 0.0]]]
                }]
            }"#,
            &RunOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn run_result_is_deterministic_apart_from_timestamp() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 6}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "sample", "trials": 20000, "seed": 42}
            ]
        }"#;
        let mut a = run_scenario_text(text, &RunOptions::default()).unwrap();
        let mut b = run_scenario_text(text, &RunOptions::default()).unwrap();
        a.generated_at_unix = 0;
        b.generated_at_unix = 0;
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn degenerate_subspace_measure_runs() {
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 3}],
            "initial_state": {"type": "uniform"},
            "stages": [{
                "type": "measure", "factor": "A",
                "subspaces": [
                    [[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]],
                    [[[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]]
                ],
                "labels": ["low", "high"]
            }]
        }"#);
        let table = &result.stages[0].tables[0];
        assert_eq!(table.cols, vec!["low", "high"]);
        assert!((table.values[0][0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((table.values[0][1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_acts_on_both_branches_before_wait() {
        // diagonal evolution commutes with computational conditioning, so a
        // long wait still lands on the unconditioned second distribution
        let result = run(r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}, {"label": "B", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "condition", "outcome": 0},
                {"type": "evolve", "energies": [0.0, 0.3, 0.7, 1.1], "duration": 2.0},
                {"type": "wait", "tau": 100.0, "t_rel": 1.0},
                {"type": "measure", "factor": "B"}
            ]
        }"#);
        let table = &result.stages[4].tables[0];
        assert!((table.values[0][0] - 0.5).abs() < 1e-10);
        assert!((table.values[0][1] - 0.5).abs() < 1e-10);
    }
}
