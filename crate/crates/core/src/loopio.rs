//! Wire formats: the `slc v1` loop file, its JSON form, and JSON reports.

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::analyzer::{Growth, TraceKind, Verdict, Witness};
use crate::collatz::{OrbitOutcome, OrbitResult};
use crate::poly2::{Constraint, HPoly, MWDecomp, Vec2};

pub const TEXT_HEADER: &str = "slc v1";
pub const JSON_FORMAT: &str = "slc-v1";
pub const REPORT_VERSION: &str = "v1";

/// Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: expected header \"slc v1\"")]
    BadHeader { line: usize },
    #[error("missing header \"slc v1\"")]
    MissingHeader,
    #[error("line {line}, column {column}: not an integer: {token:?}")]
    BadToken { line: usize, column: usize, token: String },
    #[error("line {line}: expected 3 integers, found {found}")]
    WrongArity { line: usize, found: usize },
    #[error("JSON does not match the loop schema: {0}")]
    SchemaMismatch(String),
}

pub fn parse_text(input: &str) -> Result<HPoly, ParseError> {
    let mut header_seen = false;
    let mut rows = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            if trimmed.split_whitespace().collect::<Vec<_>>() != ["slc", "v1"] {
                return Err(ParseError::BadHeader { line });
            }
            header_seen = true;
            continue;
        }
        let mut values = Vec::with_capacity(3);
        let mut found = 0;
        for (column, token) in tokens(text) {
            found += 1;
            let v = token.parse::<BigInt>().map_err(|_| ParseError::BadToken {
                line,
                column,
                token: token.to_string(),
            })?;
            values.push(v);
        }
        let [a1, a2, b]: [BigInt; 3] =
            values.try_into().map_err(|_| ParseError::WrongArity { line, found })?;
        rows.push(Constraint { a1, a2, b });
    }
    if !header_seen {
        return Err(ParseError::MissingHeader);
    }
    Ok(HPoly::new(rows))
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut col = 1;
    std::iter::from_fn(move || {
        let skipped = rest.len() - rest.trim_start().len();
        col += rest[..skipped].chars().count();
        rest = &rest[skipped..];
        if rest.is_empty() {
            return None;
        }
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let (token, tail) = rest.split_at(end);
        let at = col;
        col += token.chars().count();
        rest = tail;
        Some((at, token))
    })
}

pub fn emit_text(p: &HPoly) -> String {
    let mut out = format!("{TEXT_HEADER}\n");
    for c in &p.constraints {
        out.push_str(&format!("{c}\n"));
    }
    out
}

#[derive(Serialize)]
struct LoopJson {
    format: &'static str,
    constraints: Vec<[String; 3]>,
}

pub fn emit_json(p: &HPoly) -> String {
    let doc = LoopJson {
        format: JSON_FORMAT,
        constraints: p
            .constraints
            .iter()
            .map(|c| [c.a1.to_string(), c.a2.to_string(), c.b.to_string()])
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

pub fn parse_json(input: &str) -> Result<HPoly, ParseError> {
    let bad = |msg: &str| ParseError::SchemaMismatch(msg.to_string());
    let doc: Value = serde_json::from_str(input).map_err(|e| ParseError::SchemaMismatch(e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| bad("top level must be an object"))?;
    if obj.get("format").and_then(Value::as_str) != Some(JSON_FORMAT) {
        return Err(bad("\"format\" must be \"slc-v1\""));
    }
    let rows = obj
        .get("constraints")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("\"constraints\" must be an array"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .filter(|r| r.len() == 3)
            .ok_or_else(|| ParseError::SchemaMismatch(format!("constraint {i} must have 3 entries")))?;
        let mut v = Vec::with_capacity(3);
        for e in entries {
            let n = match e {
                Value::String(s) => s.parse::<BigInt>().ok(),
                Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string().parse::<BigInt>().ok(),
                _ => None,
            };
            v.push(n.ok_or_else(|| ParseError::SchemaMismatch(format!("constraint {i}: not an integer: {e}")))?);
        }
        let [a1, a2, b]: [BigInt; 3] = v.try_into().expect("three entries");
        out.push(Constraint { a1, a2, b });
    }
    Ok(HPoly::new(out))
}

/// Text or JSON, told apart by the first non-blank character.
pub fn parse_any(input: &str) -> Result<HPoly, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReportFlags {
    pub assume_reachability: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: String,
    pub states: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub vertices: Vec<[String; 2]>,
    pub cone: String,
    pub generators: Vec<[String; 2]>,
    pub vertex_bound: String,
}

impl From<&MWDecomp> for DecompositionReport {
    fn from(d: &MWDecomp) -> Self {
        let pair = |v: &Vec2| [v.x1.to_string(), v.x2.to_string()];
        DecompositionReport {
            vertices: d.vertices.iter().map(pair).collect(),
            cone: d.cone.name().to_string(),
            generators: d.cone.generators().iter().map(|g| [g.x1.to_string(), g.x2.to_string()]).collect(),
            vertex_bound: d.vertex_bound.to_string(),
        }
    }
}

/// Keys serialize in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub report: &'static str,
    pub verdict: String,
    pub case: String,
    pub witness: Option<WitnessReport>,
    pub decomposition: Option<DecompositionReport>,
    pub assumptions: ReportFlags,
}

impl Report {
    /// `d` is `None` exactly for empty loops. Trace witnesses list their
    /// seed transition until [`Report::with_trace`] supplies a longer prefix.
    pub fn new(v: &Verdict, d: Option<&MWDecomp>, flags: ReportFlags) -> Self {
        let witness = match v {
            Verdict::NonTerminating { witness, .. } => Some(witness_report(witness)),
            _ => None,
        };
        Report {
            report: REPORT_VERSION,
            verdict: v.name().to_string(),
            case: v.label().to_string(),
            witness,
            decomposition: d.map(DecompositionReport::from),
            assumptions: flags,
        }
    }

    pub fn with_trace(mut self, trace: &[BigInt]) -> Self {
        if let Some(w) = &mut self.witness {
            w.states = trace.iter().map(BigInt::to_string).collect();
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

pub fn witness_kind(w: &Witness) -> &'static str {
    match w {
        Witness::Cycle(_) => "cycle",
        Witness::Trace(seed) => match seed.kind {
            TraceKind::Shift => "shift",
            TraceKind::Alternate { .. } => "alternate",
            TraceKind::Grow(Growth::Increasing) => "grow-increasing",
            TraceKind::Grow(Growth::Decreasing) => "grow-decreasing",
            TraceKind::Grow(Growth::Alternating) => "grow-alternating",
        },
    }
}

fn witness_report(w: &Witness) -> WitnessReport {
    let states = match w {
        Witness::Cycle(c) => c.states.iter().map(BigInt::to_string).collect(),
        Witness::Trace(seed) => vec![seed.start.0.to_string(), seed.start.1.to_string()],
    };
    WitnessReport { kind: witness_kind(w).to_string(), states }
}

pub fn emit_decomposition(d: &MWDecomp) -> String {
    serde_json::to_string(&DecompositionReport::from(d)).expect("serializable")
}

pub fn emit_report(v: &Verdict, d: Option<&MWDecomp>, flags: ReportFlags) -> String {
    Report::new(v, d, flags).to_json()
}

#[derive(Serialize)]
struct OrbitJson<'a> {
    report: &'static str,
    kind: &'static str,
    outcome: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    prefix: Vec<String>,
}

pub fn emit_orbit(r: &OrbitResult) -> String {
    let (step, first_index, period) = match r.outcome {
        OrbitOutcome::ReachedTarget { step } => (Some(step), None, None),
        OrbitOutcome::EnteredCycle { first_index, period } => (None, Some(first_index), Some(period)),
        _ => (None, None, None),
    };
    let doc = OrbitJson {
        report: REPORT_VERSION,
        kind: "orbit",
        outcome: r.outcome.name(),
        step,
        first_index,
        period,
        prefix: r.prefix.iter().map(BigInt::to_string).collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

#[derive(Serialize)]
struct HistogramJson {
    report: &'static str,
    kind: &'static str,
    modulus: String,
    counts: Vec<(String, u64)>,
}

/// Counts as `[residue, count]` pairs in increasing residue order.
pub fn emit_histogram(modulus: &BigInt, hist: &std::collections::BTreeMap<BigInt, u64>) -> String {
    let doc = HistogramJson {
        report: REPORT_VERSION,
        kind: "histogram",
        modulus: modulus.to_string(),
        counts: hist.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}
