//! Result rendering. Stdout is byte-identical across runs for the same
//! argv (bench timings excepted), so timings go to stderr for everything
//! else and every exact value is rendered as a decimal string: JSON
//! consumers must not round-trip these through floats.

use crate::args::Format;
use crate::bench::BenchOutcome;
use crate::verify::VerifyReport;
use serde::Serialize;

/// One single-value query answer.
#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub query: &'static str,
    pub n: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    pub method: &'static str,
    pub value: String,
}

fn csv_field(p: &Option<String>) -> &str {
    p.as_deref().unwrap_or("")
}

pub fn render_query(result: &QueryResult, format: Format) -> String {
    match format {
        Format::Text => format!("{}\n", result.value),
        Format::Json => format!("{}\n", serde_json::to_string(result).unwrap()),
        Format::Csv => format!(
            "query,n,p,method,value\n{},{},{},{},{}\n",
            result.query,
            result.n,
            csv_field(&result.p),
            result.method,
            result.value
        ),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionResult {
    pub query: &'static str,
    pub n: String,
    pub p: String,
    pub psi: String,
    pub upsilon: String,
    pub delta: String,
}

pub fn render_partition(result: &PartitionResult, format: Format) -> String {
    match format {
        Format::Text => format!(
            "psi={} upsilon={} delta={}\n",
            result.psi, result.upsilon, result.delta
        ),
        Format::Json => format!("{}\n", serde_json::to_string(result).unwrap()),
        Format::Csv => format!(
            "query,n,p,psi,upsilon,delta\n{},{},{},{},{},{}\n",
            result.query, result.n, result.p, result.psi, result.upsilon, result.delta
        ),
    }
}

pub fn render_verify(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(report).unwrap()),
        Format::Csv => {
            let mut out = String::from(
                "check,cases_run,cases_failed,advisory,failure_inputs,failure_expected,failure_got\n",
            );
            for check in &report.checks {
                let (inputs, expected, got) = match &check.first_failure {
                    Some(f) => (f.inputs.as_str(), f.expected.as_str(), f.got.as_str()),
                    None => ("", "", ""),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    check.name,
                    check.cases_run,
                    check.cases_failed,
                    check.advisory,
                    csv_quote(inputs),
                    expected,
                    got
                ));
            }
            out
        }
        Format::Text => {
            let cfg = &report.config;
            let mut out = format!(
                "verify: max_n={} primes={} checks={} jobs={}\n",
                cfg.max_n,
                cfg.primes.join(","),
                cfg.checks.join(","),
                cfg.jobs
            );
            for check in &report.checks {
                let tag = if check.advisory { "  (informational)" } else { "" };
                out.push_str(&format!(
                    "{:<18} cases={:<8} failed={}{}\n",
                    check.name, check.cases_run, check.cases_failed, tag
                ));
                if let Some(f) = &check.first_failure {
                    out.push_str(&format!(
                        "{:<18}   first divergence at {}: expected {}, got {}\n",
                        "", f.inputs, f.expected, f.got
                    ));
                }
            }
            out.push_str(if report.passed {
                "result: PASS\n"
            } else {
                "result: FAIL\n"
            });
            out
        }
    }
}

// Commas inside failure text would break the record shape.
fn csv_quote(s: &str) -> String {
    if s.contains(',') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_bench(outcome: &BenchOutcome, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(outcome).unwrap()),
        Format::Csv => {
            let mut out =
                String::from("method,value,build_ms,compute_ms,memo_hits,memo_misses,memo_entries\n");
            for r in &outcome.results {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.method, r.value, r.build_ms, r.compute_ms, r.memo_hits, r.memo_misses,
                    r.memo_entries
                ));
            }
            out
        }
        Format::Text => {
            let mut out = format!("bench: n={} p={}\n", outcome.n, outcome.p);
            for r in &outcome.results {
                out.push_str(&format!(
                    "{:<10} value={} build_ms={} compute_ms={} memo_hits={} memo_misses={} memo_entries={}\n",
                    r.method, r.value, r.build_ms, r.compute_ms, r.memo_hits, r.memo_misses,
                    r.memo_entries
                ));
            }
            if outcome.results.len() > 1 {
                out.push_str(if outcome.agree {
                    "methods agree\n"
                } else {
                    "METHOD MISMATCH\n"
                });
            }
            out
        }
    }
}
