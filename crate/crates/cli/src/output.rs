//! Plain-text and CSV rendering of run results.

use crate::runner::{NamedTable, RunResult, SampleBlock};
use std::fmt::Write;

fn fmt_cell(v: f64) -> String {
    format!("{v:.6}")
}

/// Aligned table with row labels in the first column.
pub fn render_table(table: &NamedTable) -> String {
    let mut header = vec![String::new()];
    header.extend(table.cols.iter().cloned());
    let mut body: Vec<Vec<String>> = vec![header];
    for (label, row) in table.rows.iter().zip(&table.values) {
        let mut cells = vec![label.clone()];
        cells.extend(row.iter().map(|v| fmt_cell(*v)));
        body.push(cells);
    }
    let columns = body.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|j| body.iter().filter_map(|r| r.get(j)).map(|c| c.len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "{}:", table.name);
    for row in &body {
        let mut line = String::from(" ");
        for (j, cell) in row.iter().enumerate() {
            let _ = write!(line, " {cell:>width$}", width = widths[j]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}

pub fn render_sample(sample: &SampleBlock) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "sample: {} trials, seed {}, rng {}",
        sample.trials, sample.seed, sample.rng_algorithm
    );
    let header = ["outcome", "count", "frequency", "reference", "3-sigma"];
    let mut rows: Vec<[String; 5]> = Vec::with_capacity(sample.counts.len());
    for n in 0..sample.counts.len() {
        rows.push([
            (n + 1).to_string(),
            sample.counts[n].to_string(),
            fmt_cell(sample.frequencies[n]),
            fmt_cell(sample.reference[n]),
            fmt_cell(sample.three_sigma[n]),
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|j| {
            rows.iter()
                .map(|r| r[j].len())
                .chain(std::iter::once(header[j].len()))
                .max()
                .unwrap()
        })
        .collect();
    let mut line = String::from(" ");
    for (j, cell) in header.iter().enumerate() {
        let _ = write!(line, " {cell:>width$}", width = widths[j]);
    }
    let _ = writeln!(out, "{}", line.trim_end());
    for row in &rows {
        let mut line = String::from(" ");
        for (j, cell) in row.iter().enumerate() {
            let _ = write!(line, " {cell:>width$}", width = widths[j]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let verdict = if sample.within_three_sigma {
        "within three-sigma bounds"
    } else {
        "OUTSIDE three-sigma bounds"
    };
    let _ = writeln!(
        out,
        "  max |frequency - reference| = {} ({verdict})",
        fmt_cell(sample.max_abs_deviation)
    );
    out
}

/// Human-readable account of a finished run.
pub fn render_human(result: &RunResult, show_samples: bool) -> String {
    let mut out = String::new();
    for stage in &result.stages {
        let _ = writeln!(out, "stage {} [{}]", stage.index, stage.kind);
        for note in &stage.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        for table in &stage.tables {
            for line in render_table(table).lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        if show_samples {
            if let Some(sample) = &stage.sample {
                for line in render_sample(sample).lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
    }
    out
}

/// Flat CSV: one value per line, keyed by stage, table, row, and column.
pub fn render_csv(result: &RunResult) -> String {
    let mut out = String::from("stage,kind,table,row,col,value\n");
    for stage in &result.stages {
        for table in &stage.tables {
            for (label, row) in table.rows.iter().zip(&table.values) {
                for (col, value) in table.cols.iter().zip(row) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        stage.index,
                        stage.kind,
                        csv_field(&table.name),
                        csv_field(label),
                        csv_field(col),
                        value
                    );
                }
            }
        }
        if let Some(sample) = &stage.sample {
            for n in 0..sample.counts.len() {
                let _ = writeln!(
                    out,
                    "{},{},sample,count,{},{}",
                    stage.index,
                    stage.kind,
                    n + 1,
                    sample.counts[n]
                );
                let _ = writeln!(
                    out,
                    "{},{},sample,frequency,{},{}",
                    stage.index,
                    stage.kind,
                    n + 1,
                    sample.frequencies[n]
                );
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
