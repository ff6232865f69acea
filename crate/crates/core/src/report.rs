//! Deterministic command reports.

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::document::canonical;
use crate::homology::GradedTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Positive,
    Negative,
    Inconclusive,
    Error,
}

impl Verdict {
    /// 0 for a positive or complete answer, 2 for inconclusive, 1 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Positive => 0,
            Verdict::Inconclusive => 2,
            Verdict::Negative | Verdict::Error => 1,
        }
    }
}

/// A command result. Inputs enter only through canonical documents, so
/// identical inputs give identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Value,
    pub inputs_digest: String,
    pub window: Option<(i64, i64)>,
    pub result: Value,
    pub verdict: Verdict,
}

impl Report {
    /// `inputs` holds the canonical documents and parameters the result
    /// depends on.
    pub fn new(command: Value, inputs: &Value, window: Option<(i64, i64)>, result: Value, verdict: Verdict) -> Report {
        Report { command, inputs_digest: digest(inputs), window, result, verdict }
    }

    pub fn error(command: Value, message: &str, verdict: Verdict) -> Report {
        let inputs = json!({ "command": command });
        Report::new(command, &inputs, None, json!({ "error": message }), verdict)
    }

    pub fn to_json(&self) -> String {
        canonical(&serde_json::to_value(self).expect("reports serialize"))
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical(v).as_bytes()))
}

/// Fixed-width table of a graded table: rows are homological degrees,
/// columns internal degrees. `F^n` is a free ground module of rank `n` and
/// `/t` a cyclic summand of order `t`.
pub fn render_table(table: &GradedTable, k: &crate::ground::GroundRing, window: (i64, i64), pmax: usize) -> String {
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["p\\d".to_string()];
    header.extend((window.0..=window.1).map(|d| d.to_string()));
    cells.push(header);
    for p in 0..=pmax {
        let mut row = vec![p.to_string()];
        for d in window.0..=window.1 {
            let x = table.get(p, d);
            row.push(if x.is_zero() { ".".into() } else { short(&x, k) });
        }
        cells.push(row);
    }
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(line.join(" ").trim_end());
        out.push('\n');
    }
    out
}

fn short(x: &crate::ground::Invariants, k: &crate::ground::GroundRing) -> String {
    let j = x.to_json(k);
    let mut parts = Vec::new();
    if j.rank > 0 {
        parts.push(if j.rank == 1 { "F".to_string() } else { format!("F^{}", j.rank) });
    }
    parts.extend(j.torsion.iter().map(|t| format!("/{t}")));
    parts.join("+")
}
