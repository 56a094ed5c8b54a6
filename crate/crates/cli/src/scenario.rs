//! Declarative scenario files: JSON schema, parsing, and the semantic checks
//! that must pass before a scenario is allowed to run.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// A complex number serialized as a two-element `[re, im]` array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx(pub f64, pub f64);

impl Cx {
    pub fn re(&self) -> f64 {
        self.0
    }

    pub fn im(&self) -> f64 {
        self.1
    }
}

/// One tensor factor of the decision space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDecl {
    pub label: String,
    pub dim: usize,
}

/// Initial state of the composite system.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialState {
    /// Uniform superposition over the whole composite space.
    Uniform,
    /// Explicit pure state vector over the composite space.
    Pure { vector: Vec<Cx> },
    /// Explicit density matrix over the composite space.
    Density { matrix: Vec<Vec<Cx>> },
    /// Independent per-factor states combined by tensor product, in
    /// declaration order of `spaces`.
    Product { factors: Vec<ProductFactor> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductFactor {
    pub label: String,
    pub state: FactorState,
}

/// State of a single factor inside a product initial state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FactorState {
    Uniform,
    Pure { vector: Vec<Cx> },
    Density { matrix: Vec<Vec<Cx>> },
}

/// One step of the staged pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Stage {
    /// Projective measurement of one factor. Without an explicit basis or
    /// subspace grouping the computational basis of that factor is used.
    Measure {
        factor: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<Vec<Cx>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subspaces: Option<Vec<Vec<Vec<Cx>>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    /// State reduction on an outcome of the latest measurement.
    Condition { outcome: usize },
    /// Unitary evolution of the whole composite state: either diagonal
    /// phase evolution from energy levels over `duration`, or an explicit
    /// unitary matrix.
    Evolve {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        energies: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitary: Option<Vec<Vec<Cx>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration: Option<f64>,
    },
    /// Separation-time mixing after a conditioned measurement: the state
    /// becomes `w(tau)`·reduced + `(1 - w(tau))`·unreduced.
    Wait {
        tau: f64,
        t_rel: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decay: Option<DecayKind>,
    },
    /// Synchronous joint measurement of two distinct factors; emits the
    /// joint table and both families of conditionals.
    Joint {
        factors: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bases: Option<Vec<Vec<Vec<Cx>>>>,
    },
    /// Prospect decomposition p = f + q: either from utility attributes and
    /// attraction signs, or from explicit emotion amplitudes with a state
    /// over subject ⊗ alternatives.
    Qdt {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        utilities: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signs: Option<Vec<i8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        emotions: Option<Vec<Vec<Cx>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<Vec<Vec<Cx>>>,
    },
    /// Monte Carlo sampling against the most recent analytic table.
    Sample { trials: u64, seed: u64 },
}

impl Stage {
    pub fn kind(&self) -> &'static str {
        match self {
            Stage::Measure { .. } => "measure",
            Stage::Condition { .. } => "condition",
            Stage::Evolve { .. } => "evolve",
            Stage::Wait { .. } => "wait",
            Stage::Joint { .. } => "joint",
            Stage::Qdt { .. } => "qdt",
            Stage::Sample { .. } => "sample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayKind {
    Exponential,
    Gaussian,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub spaces: Vec<FactorDecl>,
    pub initial_state: InitialState,
    pub stages: Vec<Stage>,
    /// Which result sections to print: any of "tables", "states",
    /// "samples". Empty means tables and samples.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
}

pub const SUPPORTED_VERSION: u32 = 1;
const KNOWN_OUTPUTS: [&str; 3] = ["tables", "states", "samples"];

/// A scenario problem found before execution: either the file does not
/// parse, or it parses but references something undeclared or ill-formed.
#[derive(Debug)]
pub enum ScenarioError {
    Parse { message: String },
    Semantic { stage: Option<usize>, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse { message } => write!(out, "parse error: {message}"),
            ScenarioError::Semantic { stage: Some(i), message } => {
                write!(out, "semantic error at stage {i}: {message}")
            }
            ScenarioError::Semantic { stage: None, message } => {
                write!(out, "semantic error: {message}")
            }
        }
    }
}

impl std::error::Error for ScenarioError {}

fn semantic(stage: Option<usize>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Semantic {
        stage,
        message: message.into(),
    }
}

/// Parses scenario text; parse failures carry the line and column.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        message: format!("{} (line {}, column {})", e, e.line(), e.column()),
    })
}

/// Structural checks that need no linear algebra: declared factors are
/// well-formed and every stage refers to things that exist. Numeric
/// validity (orthonormality, unitarity, PSD) is left to execution.
pub fn validate_scenario(scenario: &Scenario) -> Result<(), ScenarioError> {
    if scenario.version != SUPPORTED_VERSION {
        return Err(semantic(
            None,
            format!(
                "unsupported version {} (this tool reads version {SUPPORTED_VERSION})",
                scenario.version
            ),
        ));
    }
    if scenario.spaces.is_empty() {
        return Err(semantic(None, "at least one factor must be declared"));
    }
    let mut seen = HashSet::new();
    for decl in &scenario.spaces {
        if decl.dim == 0 {
            return Err(semantic(None, format!("factor '{}' has dimension 0", decl.label)));
        }
        if !seen.insert(decl.label.as_str()) {
            return Err(semantic(None, format!("duplicate factor label '{}'", decl.label)));
        }
    }
    for name in &scenario.outputs {
        if !KNOWN_OUTPUTS.contains(&name.as_str()) {
            return Err(semantic(
                None,
                format!("unknown output section '{name}' (known: tables, states, samples)"),
            ));
        }
    }
    validate_initial_state(scenario)?;
    let mut measured = false;
    let mut conditioned = false;
    let mut has_table = false;
    for (i, stage) in scenario.stages.iter().enumerate() {
        match stage {
            Stage::Measure { factor, basis, subspaces, labels } => {
                let decl = scenario
                    .spaces
                    .iter()
                    .find(|d| &d.label == factor)
                    .ok_or_else(|| semantic(Some(i), format!("unknown factor '{factor}'")))?;
                if basis.is_some() && subspaces.is_some() {
                    return Err(semantic(Some(i), "give either basis or subspaces, not both"));
                }
                if let Some(vs) = basis {
                    check_vectors(vs, decl.dim, i)?;
                }
                if let Some(groups) = subspaces {
                    for group in groups {
                        check_vectors(group, decl.dim, i)?;
                    }
                }
                if let Some(names) = labels {
                    let outcomes = match (basis, subspaces) {
                        (Some(vs), _) => vs.len(),
                        (_, Some(groups)) => groups.len(),
                        _ => decl.dim,
                    };
                    if names.len() != outcomes {
                        return Err(semantic(
                            Some(i),
                            format!("{} labels for {} outcomes", names.len(), outcomes),
                        ));
                    }
                }
                measured = true;
                conditioned = false;
                has_table = true;
            }
            Stage::Condition { .. } => {
                if !measured {
                    return Err(semantic(Some(i), "condition requires a preceding measure"));
                }
                conditioned = true;
            }
            Stage::Evolve { energies, unitary, duration } => match (energies, unitary) {
                (Some(_), Some(_)) => {
                    return Err(semantic(Some(i), "give either energies or unitary, not both"));
                }
                (None, None) => {
                    return Err(semantic(Some(i), "evolve needs energies or a unitary"));
                }
                (None, Some(_)) if duration.is_some() => {
                    return Err(semantic(
                        Some(i),
                        "duration applies to energy-level evolution, not an explicit unitary",
                    ));
                }
                _ => {}
            },
            Stage::Wait { tau, t_rel, .. } => {
                if !conditioned {
                    return Err(semantic(Some(i), "wait requires a preceding condition"));
                }
                if *tau < 0.0 || !tau.is_finite() {
                    return Err(semantic(Some(i), format!("separation time {tau} must be >= 0")));
                }
                if *t_rel <= 0.0 || !t_rel.is_finite() {
                    return Err(semantic(Some(i), format!("relaxation time {t_rel} must be > 0")));
                }
                // mixing consumes the reduced/unreduced branch pair
                conditioned = false;
            }
            Stage::Joint { factors, bases } => {
                if factors.len() != 2 {
                    return Err(semantic(
                        Some(i),
                        format!("joint needs exactly two factors, got {}", factors.len()),
                    ));
                }
                if factors[0] == factors[1] {
                    return Err(semantic(Some(i), "joint factors must be distinct"));
                }
                for (slot, factor) in factors.iter().enumerate() {
                    let decl = scenario
                        .spaces
                        .iter()
                        .find(|d| &d.label == factor)
                        .ok_or_else(|| semantic(Some(i), format!("unknown factor '{factor}'")))?;
                    if let Some(bs) = bases {
                        if bs.len() != 2 {
                            return Err(semantic(Some(i), "bases must list one basis per factor"));
                        }
                        check_vectors(&bs[slot], decl.dim, i)?;
                    }
                }
                has_table = true;
            }
            Stage::Qdt { utilities, signs, emotions, state } => {
                let attribute_form = utilities.is_some() || signs.is_some();
                let emotion_form = emotions.is_some() || state.is_some();
                if attribute_form && emotion_form {
                    return Err(semantic(
                        Some(i),
                        "give either utilities+signs or emotions+state, not both",
                    ));
                }
                if attribute_form {
                    let (Some(u), Some(s)) = (utilities, signs) else {
                        return Err(semantic(Some(i), "utilities and signs go together"));
                    };
                    if u.len() != s.len() {
                        return Err(semantic(
                            Some(i),
                            format!("{} utilities vs {} signs", u.len(), s.len()),
                        ));
                    }
                    if u.len() < 2 {
                        return Err(semantic(Some(i), "qdt needs at least two alternatives"));
                    }
                } else {
                    let (Some(bs), Some(matrix)) = (emotions, state) else {
                        return Err(semantic(Some(i), "emotions and state go together"));
                    };
                    if bs.len() < 2 {
                        return Err(semantic(Some(i), "qdt needs at least two alternatives"));
                    }
                    let subject_dim = bs[0].len();
                    if subject_dim == 0 || bs.iter().any(|b| b.len() != subject_dim) {
                        return Err(semantic(
                            Some(i),
                            "emotion vectors must share one nonzero subject dimension",
                        ));
                    }
                    let total = subject_dim * bs.len();
                    if matrix.len() != total || matrix.iter().any(|row| row.len() != total) {
                        return Err(semantic(
                            Some(i),
                            format!("state must be a {total}x{total} matrix"),
                        ));
                    }
                }
                has_table = true;
            }
            Stage::Sample { trials, .. } => {
                if !has_table {
                    return Err(semantic(Some(i), "sample requires a preceding analytic table"));
                }
                if *trials == 0 {
                    return Err(semantic(Some(i), "sample needs at least one trial"));
                }
            }
        }
    }
    Ok(())
}

fn check_vectors(vectors: &[Vec<Cx>], dim: usize, stage: usize) -> Result<(), ScenarioError> {
    if vectors.is_empty() {
        return Err(semantic(Some(stage), "empty vector list"));
    }
    for v in vectors {
        if v.len() != dim {
            return Err(semantic(
                Some(stage),
                format!("vector of length {} in a dimension-{dim} factor", v.len()),
            ));
        }
    }
    Ok(())
}

fn total_dim(scenario: &Scenario) -> usize {
    scenario.spaces.iter().map(|d| d.dim).product()
}

fn validate_initial_state(scenario: &Scenario) -> Result<(), ScenarioError> {
    let total = total_dim(scenario);
    match &scenario.initial_state {
        InitialState::Uniform => Ok(()),
        InitialState::Pure { vector } => {
            if vector.len() != total {
                return Err(semantic(
                    None,
                    format!("initial vector has length {}, space has dimension {total}", vector.len()),
                ));
            }
            Ok(())
        }
        InitialState::Density { matrix } => {
            if matrix.len() != total || matrix.iter().any(|row| row.len() != total) {
                return Err(semantic(
                    None,
                    format!("initial density must be a {total}x{total} matrix"),
                ));
            }
            Ok(())
        }
        InitialState::Product { factors } => {
            if factors.len() != scenario.spaces.len() {
                return Err(semantic(
                    None,
                    format!(
                        "product state lists {} factors, {} are declared",
                        factors.len(),
                        scenario.spaces.len()
                    ),
                ));
            }
            for decl in &scenario.spaces {
                let matching: Vec<_> =
                    factors.iter().filter(|f| f.label == decl.label).collect();
                if matching.len() != 1 {
                    return Err(semantic(
                        None,
                        format!("product state must name factor '{}' exactly once", decl.label),
                    ));
                }
                let dim = decl.dim;
                match &matching[0].state {
                    FactorState::Uniform => {}
                    FactorState::Pure { vector } if vector.len() != dim => {
                        return Err(semantic(
                            None,
                            format!("factor '{}' vector has length {}", decl.label, vector.len()),
                        ));
                    }
                    FactorState::Density { matrix }
                        if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) =>
                    {
                        return Err(semantic(
                            None,
                            format!("factor '{}' density must be {dim}x{dim}", decl.label),
                        ));
                    }
                    _ => {}
                }
            }
            Ok(())
        }
    }
}

/// Parse and validate in one step.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario = parse_scenario(text)?;
    validate_scenario(&scenario)?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{"type": "measure", "factor": "A"}]
        }"#
        .to_string()
    }

    #[test]
    fn minimal_scenario_loads() {
        let s = load_scenario(&minimal()).unwrap();
        assert_eq!(s.spaces.len(), 1);
        assert_eq!(s.stages.len(), 1);
    }

    #[test]
    fn parse_error_reports_position() {
        let err = load_scenario("{ not json").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("parse error"));
        assert!(message.contains("line 1"));
    }

    #[test]
    fn duplicate_factor_labels_rejected() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}, {"label": "A", "dim": 3}],
            "initial_state": {"type": "uniform"},
            "stages": []
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("duplicate factor label 'A'"));
    }

    #[test]
    fn condition_before_measure_rejected() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{"type": "condition", "outcome": 0}]
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("stage 0"));
        assert!(err.to_string().contains("preceding measure"));
    }

    #[test]
    fn wait_requires_condition() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [
                {"type": "measure", "factor": "A"},
                {"type": "wait", "tau": 1.0, "t_rel": 1.0}
            ]
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("preceding condition"));
    }

    #[test]
    fn unknown_measure_factor_rejected() {
        let text = minimal().replace("\"factor\": \"A\"", "\"factor\": \"B\"");
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("unknown factor 'B'"));
    }

    #[test]
    fn unknown_stage_type_is_parse_error() {
        let text = minimal().replace("\"type\": \"measure\"", "\"type\": \"teleport\"");
        match load_scenario(&text).unwrap_err() {
            ScenarioError::Parse { .. } => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn sample_needs_a_table_first() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{"type": "sample", "trials": 100, "seed": 1}]
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("analytic table"));
    }

    #[test]
    fn complex_entries_round_trip() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "pure", "vector": [[0.6, 0.0], [0.0, 0.8]]},
            "stages": []
        }"#;
        let s = load_scenario(text).unwrap();
        let InitialState::Pure { vector } = &s.initial_state else {
            panic!("wrong variant");
        };
        assert_eq!(vector[0], Cx(0.6, 0.0));
        assert_eq!(vector[1], Cx(0.0, 0.8));
        let text2 = serde_json::to_string(&s).unwrap();
        let s2: Scenario = serde_json::from_str(&text2).unwrap();
        assert_eq!(serde_json::to_string(&s2).unwrap(), text2);
    }

    #[test]
    fn version_mismatch_rejected() {
        let text = minimal().replace("\"version\": 1", "\"version\": 9");
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("unsupported version 9"));
    }

    #[test]
    fn qdt_forms_are_mutually_exclusive() {
        let text = r#"{
            "version": 1,
            "spaces": [{"label": "A", "dim": 2}],
            "initial_state": {"type": "uniform"},
            "stages": [{
                "type": "qdt",
                "utilities": [2.0, 3.0],
                "signs": [1, -1],
                "emotions": [[[1.0, 0.0]], [[1.0, 0.0]]],
                "state": [[[1.0, 0.0]]]
            }]
        }"#;
        let err = load_scenario(text).unwrap_err();
        assert!(err.to_string().contains("not both"));
    }
}
