//! Run configuration, report documents and their serializations.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::checks::{self, CATALOG};
use crate::error::{LabError, Result};
use crate::rational::{self, Rational};
use crate::verdict::{Status, Witness};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            _ => Err(LabError::Parse(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Catalog names in catalog order; `["all"]` is expanded on resolution.
    pub checks: Vec<String>,
    pub truncation: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(with = "rational::text")]
    pub scale_max: Rational,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<std::path::PathBuf>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            checks: vec!["all".into()],
            truncation: 64,
            trials: 1000,
            seed: 0,
            scale_max: rational::int(1_000_000),
            format: Format::Json,
            out: None,
        }
    }
}

impl CheckConfig {
    /// Selected catalog names in catalog order.
    pub fn resolve(&self) -> Result<Vec<&'static str>> {
        if self.checks.iter().any(|c| c == "all") {
            return Ok(CATALOG.iter().map(|e| e.name).collect());
        }
        for name in &self.checks {
            if !CATALOG.iter().any(|e| e.name == name) {
                return Err(LabError::UnknownCheck(name.clone()));
            }
        }
        Ok(CATALOG
            .iter()
            .map(|e| e.name)
            .filter(|n| self.checks.iter().any(|c| c == n))
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub paper_ref: String,
    pub expected: Status,
    pub status: Status,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, Value>,
    /// Side channel; never part of the canonical serialization.
    #[serde(skip)]
    pub wallclock_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub artifact_version: String,
    pub config: CheckConfig,
    pub checks: Vec<CheckRecord>,
}

impl ReportDoc {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| !c.passed)
    }

    /// 0 when every selected check reached its expected status, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

/// Runs the selected catalog entries in catalog order.
pub fn run_checks(config: &CheckConfig) -> Result<ReportDoc> {
    let names = config.resolve()?;
    let mut records = Vec::with_capacity(names.len());
    for name in names {
        let entry = CATALOG.iter().find(|e| e.name == name).expect("resolved name");
        let start = Instant::now();
        let outcome = (entry.run)(config);
        let wallclock_ms = start.elapsed().as_millis();
        records.push(CheckRecord {
            name: entry.name.into(),
            paper_ref: entry.anchor.into(),
            expected: entry.expected,
            status: outcome.status,
            passed: outcome.status == entry.expected,
            witnesses: outcome.witnesses,
            stats: outcome.stats,
            wallclock_ms,
        });
    }
    Ok(ReportDoc {
        artifact_version: ARTIFACT_VERSION.into(),
        config: config.clone(),
        checks: records,
    })
}

/// Deterministic serialization. JSON output has sorted keys and omits timing.
pub fn emit(report: &ReportDoc, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let value = serde_json::to_value(report).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => emit_csv(report).into_bytes(),
        Format::Md => emit_md(report).into_bytes(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_csv(report: &ReportDoc) -> String {
    let mut out = String::from("name,status,expected,passed,witnesses,paper_ref\n");
    for c in &report.checks {
        let row = [
            c.name.clone(),
            c.status.as_str().into(),
            c.expected.as_str().into(),
            c.passed.to_string(),
            c.witnesses.len().to_string(),
            c.paper_ref.clone(),
        ];
        let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn emit_md(report: &ReportDoc) -> String {
    let mut out = String::new();
    let c = &report.config;
    let _ = writeln!(out, "# gossez-lab report (v{})\n", report.artifact_version);
    let _ = writeln!(
        out,
        "truncation {} | trials {} | seed {} | scale max {}\n",
        c.truncation,
        c.trials,
        c.seed,
        rational::to_text(&c.scale_max)
    );
    let _ = writeln!(out, "| check | status | expected | pass | ms | claim |");
    let _ = writeln!(out, "|---|---|---|---|---|---|");
    for r in &report.checks {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.name,
            r.status.as_str(),
            r.expected.as_str(),
            if r.passed { "yes" } else { "NO" },
            r.wallclock_ms,
            r.paper_ref.replace('|', "\\|")
        );
    }
    for r in &report.checks {
        let _ = writeln!(out, "\n## {}\n", r.name);
        for (k, v) in &r.stats {
            let _ = writeln!(out, "- {k}: {v}");
        }
    }
    out
}

/// The catalog as printed by `gossez-lab list`.
pub fn catalog_listing() -> String {
    let mut out = String::new();
    for e in checks::CATALOG {
        let _ = writeln!(out, "{:<10} expect {:<20} {}", e.name, e.expected.as_str(), e.anchor);
    }
    out
}
