//! Configuration documents, bundled fixtures, and run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::closed_forms::ClosedFormValues;
use crate::cyclic_action::check_supported_order;
use crate::engine::{crosscheck, orbifold_hodge_diamond, CheckResult, EngineValues};
use crate::fixed_locus::{
    from_invariants_order2, from_invariants_order3, from_invariants_order4, from_invariants_order6,
    validate, EigenspaceDims, K3Config, Order2Invariants, Order3Invariants, Order4Invariants,
    Order6Invariants, Strictness, SubgroupFixedRecord, Violation,
};
use crate::hodge_algebra::euler_characteristic;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported order {0}; expected one of 2, 3, 4, 6")]
    UnsupportedOrder(u32),
    #[error("{0}")]
    Construction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub eigenspace_dims: Vec<u32>,
    #[serde(default)]
    pub subgroups: Vec<SubgroupFixedRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    order: u32,
    #[serde(default)]
    invariants: Option<Value>,
    #[serde(default)]
    raw: Option<Value>,
}

fn schema_err<E: std::fmt::Display>(prefix: &str, e: serde_path_to_error::Error<E>) -> ParseError {
    let inner = e.path().to_string();
    let path = match (prefix, inner.as_str()) {
        (p, ".") => p.to_string(),
        ("", i) => i.to_string(),
        (p, i) => format!("{p}.{i}"),
    };
    ParseError::Schema {
        path,
        message: e.into_inner().to_string(),
    }
}

fn typed<T: serde::de::DeserializeOwned>(prefix: &str, v: Value) -> Result<T, ParseError> {
    serde_path_to_error::deserialize(v).map_err(|e| schema_err(prefix, e))
}

/// Parses a configuration document in either the `invariants` or the `raw` form.
pub fn parse_config(text: &str) -> Result<K3Config, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Malformed(e.to_string()))?;
    let doc: Document = typed("", value)?;
    check_supported_order(doc.order).map_err(|_| ParseError::UnsupportedOrder(doc.order))?;
    let built = match (doc.invariants, doc.raw) {
        (Some(_), Some(_)) => {
            return Err(ParseError::Schema {
                path: ".".into(),
                message: "`invariants` and `raw` are mutually exclusive".into(),
            })
        }
        (None, None) => {
            return Err(ParseError::Schema {
                path: ".".into(),
                message: "expected one of `invariants` or `raw`".into(),
            })
        }
        (None, Some(raw)) => {
            let raw: RawConfig = typed("raw", raw)?;
            return Ok(K3Config {
                order: doc.order,
                eigenspace_dims: EigenspaceDims::new(raw.eigenspace_dims),
                records: raw.subgroups,
            });
        }
        (Some(inv), None) => match doc.order {
            2 => {
                let i: Order2Invariants = typed("invariants", inv)?;
                from_invariants_order2(i.r, &i.curve_genera)
            }
            3 => from_invariants_order3(&typed::<Order3Invariants>("invariants", inv)?),
            4 => from_invariants_order4(&typed::<Order4Invariants>("invariants", inv)?),
            6 => from_invariants_order6(&typed::<Order6Invariants>("invariants", inv)?),
            _ => unreachable!(),
        },
    };
    built.map_err(|e| ParseError::Construction(e.to_string()))
}

/// The canonical raw form of a configuration.
pub fn to_raw(cfg: &K3Config) -> RawConfig {
    RawConfig {
        eigenspace_dims: cfg.eigenspace_dims.as_slice().to_vec(),
        subgroups: cfg.records.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailed,
    CheckFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 2,
            Status::CheckFailed => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ClosedFormSection {
    Applicable(ClosedFormValues),
    NotApplicable { reasons: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub order: u32,
    pub config: RawConfig,
    pub status: Status,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diamond: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormSection>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub checks: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { checks: true }
    }
}

pub fn run(cfg: &K3Config, options: RunOptions) -> RunReport {
    let mut report = RunReport {
        order: cfg.order,
        config: to_raw(cfg),
        status: Status::Ok,
        violations: validate(cfg, Strictness::Engine),
        diamond: None,
        engine: None,
        closed_form: None,
        checks: Vec::new(),
    };
    if report.violations.iter().any(Violation::is_error) {
        report.status = Status::ValidationFailed;
        return report;
    }
    let closed = match crate::closed_forms::from_config(cfg) {
        Ok(v) => {
            let warnings = validate(cfg, Strictness::ClosedForm)
                .into_iter()
                .filter(|v| v.level == Strictness::ClosedForm);
            report.violations.extend(warnings);
            ClosedFormSection::Applicable(v)
        }
        Err(vs) => {
            let reasons = vs.iter().map(|v| v.message.clone()).collect();
            report.violations.extend(vs);
            ClosedFormSection::NotApplicable { reasons }
        }
    };
    report.closed_form = Some(closed);

    let outcome = if options.checks {
        crosscheck(cfg).map(|cc| (cc.diamond, cc.engine, cc.checks))
    } else {
        orbifold_hodge_diamond(cfg).map(|d| {
            let engine = EngineValues {
                h11: d.get(1, 1) as i64,
                h21: d.get(2, 1) as i64,
                euler: euler_characteristic(&d),
            };
            (d, engine, Vec::new())
        })
    };
    match outcome {
        Ok((d, engine, checks)) => {
            report.diamond = Some(d.rows().to_vec());
            report.engine = Some(engine);
            if checks.iter().any(|c| !c.passed) {
                report.status = Status::CheckFailed;
            }
            report.checks = checks;
        }
        Err(e) => {
            report.violations.push(Violation {
                level: Strictness::Engine,
                severity: crate::fixed_locus::Severity::Error,
                message: e.to_string(),
            });
            report.status = Status::ValidationFailed;
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => emit_text(report),
    }
}

/// Rows of the diamond by total degree, `h^{p,q}` with `p` descending.
pub fn diamond_lines(rows: &[Vec<u64>]) -> Vec<String> {
    let dim = rows.len() - 1;
    let width = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1) + 2;
    let width = width + width % 2;
    (0..=2 * dim)
        .map(|k| {
            let ps: Vec<usize> = (k.saturating_sub(dim)..=k.min(dim)).rev().collect();
            let mut line = " ".repeat((dim + 1 - ps.len()) * width / 2);
            for p in ps {
                line.push_str(&format!("{:^width$}", rows[p][k - p]));
            }
            line.trim_end().to_string()
        })
        .collect()
}

fn emit_text(r: &RunReport) -> String {
    let mut out = String::new();
    let dims: Vec<String> = r.config.eigenspace_dims.iter().map(u32::to_string).collect();
    let _ = writeln!(out, "order {}: (S x E)/C_{}", r.order, r.order);
    let _ = writeln!(out, "eigenspace dims: ({})", dims.join(","));
    if let Some(rows) = &r.diamond {
        let _ = writeln!(out);
        for line in diamond_lines(rows) {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out);
    }
    if let Some(e) = &r.engine {
        let _ = writeln!(out, "engine:      h11 = {}  h21 = {}  e = {}", e.h11, e.h21, e.euler);
    }
    match &r.closed_form {
        Some(ClosedFormSection::Applicable(c)) => {
            let _ = writeln!(out, "closed form: h11 = {}  h21 = {}  e = {}", c.h11, c.h21, c.euler);
        }
        Some(ClosedFormSection::NotApplicable { .. }) => {
            let _ = writeln!(out, "closed form: not applicable");
        }
        None => {}
    }
    if !r.checks.is_empty() {
        let _ = writeln!(out, "checks:");
        for c in &r.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "  {mark}  {:<18} {} vs {}", c.name, c.lhs, c.rhs);
        }
    }
    if !r.violations.is_empty() {
        let _ = writeln!(out, "violations:");
        for v in &r.violations {
            let _ = writeln!(out, "  {v}");
        }
    }
    let status = match r.status {
        Status::Ok => "ok",
        Status::ValidationFailed => "validation failed",
        Status::CheckFailed => "cross-check mismatch",
    };
    let _ = writeln!(out, "status: {status}");
    out
}

pub const FIXTURES: &[(&str, &str)] = &[
    ("order2-empty", include_str!("../fixtures/order2-empty.json")),
    ("order2-two-curves", include_str!("../fixtures/order2-two-curves.json")),
    ("order3", include_str!("../fixtures/order3.json")),
    ("order4-worked", include_str!("../fixtures/order4-worked.json")),
    ("order4-second-type", include_str!("../fixtures/order4-second-type.json")),
    ("order6-elliptic", include_str!("../fixtures/order6-elliptic.json")),
    ("order6-raw", include_str!("../fixtures/order6-raw.json")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
