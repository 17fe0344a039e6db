//! Report output: JSON (the canonical artifact), CSV and a fixed-width table.

use std::fmt::Write;

use framedist_core::TheoremReport;

use crate::suite::SuiteReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => csv(report),
        Format::Table => table(report),
    }
}

pub fn json(report: &SuiteReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Plain decimal in the usual range, exponent form outside it.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn status(c: &TheoremReport) -> String {
    c.status_label().to_lowercase()
}

pub fn csv(report: &SuiteReport) -> String {
    let mut out = String::from("claim_id,status,lhs,rhs,margin,samples,seed\n");
    for c in &report.claims {
        let seed = c.seed.map(|s| s.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            c.claim,
            status(c),
            opt(c.lhs),
            opt(c.rhs),
            opt(c.margin),
            c.samples,
            seed
        )
        .unwrap();
    }
    out
}

pub fn table(report: &SuiteReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "frame: {} ({} M={} N={})  suite={} seed={} samples={} starts={}",
        report.frame, report.field, report.dim, report.count, report.suite, report.seed, report.samples, report.starts
    )
    .unwrap();
    writeln!(out, "{:<28} {:<8} {:>12}  note", "claim", "status", "margin").unwrap();
    for c in &report.claims {
        let margin = c.margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into());
        let note = c.reason.as_deref().unwrap_or("");
        writeln!(out, "{:<28} {:<8} {:>12}  {}", c.claim, c.status_label(), margin, note).unwrap();
    }
    let s = &report.summary;
    writeln!(
        out,
        "pass {}  fail {}  n/a {}  skipped {}",
        s.pass, s.fail, s.not_applicable, s.skipped
    )
    .unwrap();
    out
}
