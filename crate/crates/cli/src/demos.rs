//! Built-in demonstrations: small closed-form experiments rendered as
//! tables, with reference values printed next to the computed ones.

use crate::output::render_table;
use crate::runner::NamedTable;
use qdice_core::decision::{separated_conditional, SeparationDynamics};
use qdice_core::linalg::gram_schmidt;
use qdice_core::measure::{
    immediate_conditional, measure_from_basis, measure_from_subspaces, outcome_probabilities,
    ProjectiveMeasure,
};
use qdice_core::qdt::ProspectDecomposition;
use qdice_core::state::{uniform_superposition, EvolutionModel};
use qdice_core::sync::{joint_probability, spatial_conditional, Given};
use qdice_core::{CompositeSpace, ComplexVector, DensityOperator};

pub const DEMO_NAMES: [&str; 6] = [
    "repeat_coin",
    "coin_then_die",
    "degenerate_die",
    "bell_joint",
    "decoy",
    "separation_sweep",
];

pub fn run_demo(name: &str) -> Option<String> {
    match name {
        "repeat_coin" => Some(repeat_coin()),
        "coin_then_die" => Some(coin_then_die()),
        "degenerate_die" => Some(degenerate_die()),
        "bell_joint" => Some(bell_joint()),
        "decoy" => Some(decoy()),
        "separation_sweep" => Some(separation_sweep()),
        _ => None,
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

fn real_vector(entries: &[f64]) -> ComplexVector {
    ComplexVector::from_real(entries).unwrap()
}

/// A fair coin tossed twice in a row: once an outcome is known, repeating
/// the toss returns it with certainty, unlike an independent classical one.
fn repeat_coin() -> String {
    let space = CompositeSpace::single("A", 2).unwrap();
    let rho = DensityOperator::pure(&uniform_superposition(2).unwrap(), space).unwrap();
    let m = ProjectiveMeasure::computational(2).unwrap();
    let first = outcome_probabilities(&rho, &m).unwrap();

    let mut out = String::new();
    out.push_str(&render_table(&NamedTable::single_row(
        "first toss",
        "p",
        labels("side ", 2),
        first,
    )));
    let mut repeat = NamedTable {
        name: "second toss, given the first".into(),
        rows: labels("given side ", 2),
        cols: labels("side ", 2),
        values: Vec::new(),
    };
    for n in 0..2 {
        repeat
            .values
            .push(immediate_conditional(&rho, &m, n, &m).unwrap());
    }
    out.push_str(&render_table(&repeat));
    out.push_str("reference: identity table; an independent classical toss would give 0.5 everywhere\n");
    out
}

/// A coin toss followed, much later, by a die roll: after a separation far
/// beyond the relaxation time, the die forgets the coin entirely.
fn coin_then_die() -> String {
    let space = CompositeSpace::compose(&[("A", 2), ("B", 6)]).unwrap();
    let rho = DensityOperator::pure(&uniform_superposition(12).unwrap(), space).unwrap();
    let coin = ProjectiveMeasure::computational(2).unwrap();
    let die = ProjectiveMeasure::computational(6).unwrap();
    let dynamics = SeparationDynamics::new(100.0, 1.0).unwrap();
    let ev = EvolutionModel::identity(12);
    let probs =
        separated_conditional(&rho, ("A", &coin, 0), &dynamics, &ev, ("B", &die)).unwrap();

    let table = NamedTable {
        name: "die roll long after a heads toss (tau = 100 t_rel)".into(),
        rows: vec!["computed".into(), "fair 1/6".into()],
        cols: labels("face ", 6),
        values: vec![probs, vec![1.0 / 6.0; 6]],
    };
    render_table(&table)
}

/// A degenerate grouping of die faces breaks the symmetry between forward
/// and reversed conditional probabilities.
fn degenerate_die() -> String {
    let dim = 6;
    let space = CompositeSpace::single("A", dim).unwrap();
    let rho = DensityOperator::maximally_mixed(space);

    // fine-grained basis whose first ray mixes all faces evenly
    let mut raw = vec![uniform_superposition(dim).unwrap()];
    for k in 0..dim - 1 {
        raw.push(ComplexVector::basis(dim, k));
    }
    let fine = measure_from_basis(&gram_schmidt(&raw).unwrap()).unwrap();

    // coarse parity measure: each outcome covers three faces
    let odd: Vec<ComplexVector> = [0, 2, 4].iter().map(|&k| ComplexVector::basis(dim, k)).collect();
    let even: Vec<ComplexVector> = [1, 3, 5].iter().map(|&k| ComplexVector::basis(dim, k)).collect();
    let parity = measure_from_subspaces(&[odd, even])
        .unwrap()
        .with_labels(vec!["odd", "even"])
        .unwrap();

    let forward = immediate_conditional(&rho, &fine, 0, &parity).unwrap();
    let reverse_odd = immediate_conditional(&rho, &parity, 0, &fine).unwrap();
    let reverse_even = immediate_conditional(&rho, &parity, 1, &fine).unwrap();

    let mut out = String::new();
    out.push_str(&render_table(&NamedTable::single_row(
        "parity given the even-mixture outcome",
        "p",
        vec!["odd".into(), "even".into()],
        forward,
    )));
    out.push_str(&render_table(&NamedTable::single_row(
        "even-mixture outcome given parity",
        "p",
        vec!["given odd".into(), "given even".into()],
        vec![reverse_odd[0], reverse_even[0]],
    )));
    out.push_str(
        "reference: a nondegenerate pair would make 0.500000 and the reversed values equal;\n\
         the rank-3 parity projectors break that symmetry\n",
    );
    out
}

/// Joint probabilities of one maximally entangled pair: perfectly
/// correlated outcomes, deterministic conditionals.
fn bell_joint() -> String {
    let space = CompositeSpace::compose(&[("A", 2), ("B", 2)]).unwrap();
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let bell = real_vector(&[amp, 0.0, 0.0, amp]);
    let rho = DensityOperator::pure(&bell, space).unwrap();
    let m = ProjectiveMeasure::computational(2).unwrap();
    let joint = joint_probability(&rho, ("A", &m), ("B", &m)).unwrap();

    let mut out = String::new();
    out.push_str(&render_table(&NamedTable {
        name: "joint p(A, B) for (|00> + |11>)/sqrt(2)".into(),
        rows: labels("A=", 2),
        cols: labels("B=", 2),
        values: joint.table().to_vec(),
    }));
    let mut conditional = NamedTable {
        name: "p(B | A)".into(),
        rows: labels("given A=", 2),
        cols: labels("B=", 2),
        values: Vec::new(),
    };
    for n in 0..2 {
        conditional
            .values
            .push(spatial_conditional(&joint, Given::Row(n)).unwrap());
    }
    out.push_str(&render_table(&conditional));
    out.push_str("reference: diagonal 0.5 joint; conditioning pins the partner outcome\n");
    out
}

/// Two alternatives with utility fractions (0.4, 0.6); the attractive but
/// objectively weaker one wins once the quarter prior is added.
fn decoy() -> String {
    let decomposition = ProspectDecomposition::from_attributes(&[2.0, 3.0], &[1, -1]).unwrap();
    let experimental = [0.61, 0.31];
    let deviation: Vec<f64> = decomposition
        .p()
        .iter()
        .zip(experimental)
        .map(|(p, e)| (p - e).abs())
        .collect();
    let table = NamedTable {
        name: "decoy choice between two alternatives".into(),
        rows: vec![
            "utility fraction f".into(),
            "attraction q".into(),
            "computed p".into(),
            "experimental p".into(),
            "|deviation|".into(),
        ],
        cols: labels("option ", 2),
        values: vec![
            decomposition.f().to_vec(),
            decomposition.q().to_vec(),
            decomposition.p().to_vec(),
            experimental.to_vec(),
            deviation,
        ],
    };
    let mut out = render_table(&table);
    out.push_str("reference: experimental frequencies leave a small residue on a third, rarely chosen decoy option\n");
    out
}

/// Conditional probabilities at growing separation between the two
/// measurements, sliding from the reduced to the unconditioned answer.
fn separation_sweep() -> String {
    let space = CompositeSpace::single("A", 2).unwrap();
    let rho = DensityOperator::pure(&real_vector(&[0.6, 0.8]), space).unwrap();
    let skewed = measure_from_basis(&[
        real_vector(&[0.3f64.sqrt(), 0.7f64.sqrt()]),
        real_vector(&[0.7f64.sqrt(), -(0.3f64.sqrt())]),
    ])
    .unwrap();
    let computational = ProjectiveMeasure::computational(2).unwrap();
    let ev = EvolutionModel::identity(2);

    let ratios = [0.0, 0.5, 1.0, 2.0, 100.0];
    let mut table = NamedTable {
        name: "p(B | A = 1) against separation time".into(),
        rows: ratios.iter().map(|r| format!("tau/t_rel = {r}")).collect(),
        cols: vec!["w".into(), "B=1".into(), "B=2".into()],
        values: Vec::new(),
    };
    for ratio in ratios {
        let dynamics = SeparationDynamics::new(ratio, 1.0).unwrap();
        let probs = separated_conditional(
            &rho,
            ("A", &skewed, 0),
            &dynamics,
            &ev,
            ("A", &computational),
        )
        .unwrap();
        table.values.push(vec![dynamics.weight(), probs[0], probs[1]]);
    }
    let unconditional = outcome_probabilities(&rho, &computational).unwrap();
    let mut out = render_table(&table);
    out.push_str(&format!(
        "reference: monotone approach to the unconditional ({:.6}, {:.6})\n",
        unconditional[0], unconditional[1]
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_demo_runs() {
        for name in DEMO_NAMES {
            let text = run_demo(name).unwrap();
            assert!(!text.is_empty(), "{name} produced no output");
        }
    }

    #[test]
    fn unknown_demo_is_none() {
        assert!(run_demo("teleport").is_none());
    }

    #[test]
    fn decoy_prints_expected_numbers() {
        let text = decoy();
        assert!(text.contains("0.650000"));
        assert!(text.contains("0.350000"));
        assert!(text.contains("0.610000"));
        assert!(text.contains("0.310000"));
        assert!(text.contains("0.040000"));
    }

    #[test]
    fn repeat_coin_prints_identity_rows() {
        let text = repeat_coin();
        assert!(text.contains("1.000000"));
        assert!(text.contains("0.500000"));
    }

    #[test]
    fn separation_sweep_is_monotone() {
        let text = separation_sweep();
        let mut first_col = Vec::new();
        for line in text.lines() {
            if line.trim_start().starts_with("tau/t_rel") {
                let cells: Vec<&str> = line.split_whitespace().collect();
                // row label takes three tokens: "tau/t_rel", "=", value
                first_col.push(cells[3].parse::<f64>().unwrap());
            }
        }
        assert_eq!(first_col.len(), 5);
        for pair in first_col.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12, "weight must not increase");
        }
    }
}
