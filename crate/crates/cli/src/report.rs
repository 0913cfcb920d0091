use std::fmt::Write as _;

use gpc_core::conjectures::{GpcBranch, GpcWitness};
use gpc_core::linext::count_extensions;
use gpc_core::Poset;
use serde::Serialize;
use serde_json::Value;

/// Exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A conjecture or lemma check came back negative.
    Failure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failure => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Fingerprint {
    pub elements: usize,
    pub relations: usize,
    pub extensions: String,
}

impl Fingerprint {
    pub fn of(p: &Poset) -> Self {
        Fingerprint {
            elements: p.len(),
            relations: p.relation_count(),
            extensions: count_extensions(p).to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Fingerprint>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

/// A finished command: the machine report, the human text and the status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub text: String,
    pub status: Status,
}

impl Outcome {
    pub fn new(command: &str, input: Option<&Poset>, result: impl Serialize, text: String) -> Self {
        Outcome {
            report: RunReport {
                command: command.to_string(),
                input: input.map(Fingerprint::of),
                result: serde_json::to_value(result).expect("reports serialize"),
                wall_ms: None,
            },
            text,
            status: Status::Ok,
        }
    }

    pub fn failing_if(mut self, failed: bool) -> Self {
        if failed {
            self.status = Status::Failure;
        }
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
            s.push('\n');
            s
        } else {
            let mut s = self.text.clone();
            if let Some(ms) = self.report.wall_ms {
                let _ = writeln!(s, "wall time: {ms:.3} ms");
            }
            s
        }
    }
}

/// Key/value lines with the values aligned.
pub fn aligned(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{:<width$}  {v}", format!("{k}:"), width = width + 1);
    }
    out
}

fn branch_line(b: &GpcBranch) -> String {
    let (lo, hi) = b.result;
    match b.second {
        Some((c, d)) => format!(
            "  if {lo} < {hi}: t1 = {}, compare {c} ? {d}, t2 = {}",
            b.t1, b.t2
        ),
        None if b.t1 == b.t2 && b.t1 > gpc_core::Count::from(1u32) => format!(
            "  if {lo} < {hi}: t1 = {}, second comparison forced, t2 = {}",
            b.t1, b.t2
        ),
        None => format!("  if {lo} < {hi}: t1 = {}, chain, t2 = {}", b.t1, b.t2),
    }
}

pub fn witness_text(w: &GpcWitness) -> String {
    let mut out = format!(
        "first comparison {} ? {}, t0 = {}\n",
        w.first.0, w.first.1, w.t0
    );
    for b in &w.branches {
        out.push_str(&branch_line(b));
        out.push('\n');
    }
    out
}
