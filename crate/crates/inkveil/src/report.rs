//! Serialization of scan, Delta and matrix reports.

use std::fmt::Write as _;
use std::str::FromStr;

use inkveil_core::pipeline::{MatrixReport, MatrixRow, RowStatus};
use inkveil_core::styloscope::DeltaReport;
use inkveil_core::zwcodec::ScanReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("unsupported format `{0}` (expected json, csv or markdown)")]
    UnsupportedFormat(String),
    #[error("{0} output is not available for this command")]
    NotAvailable(&'static str),
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            _ => Err(ReportError::UnsupportedFormat(s.to_owned())),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Markdown => "markdown",
        }
    }
}

const MATRIX_COLUMNS: [&str; 8] = [
    "config",
    "author",
    "delta_adversarial",
    "delta_reference",
    "delta_change",
    "probability_adversarial",
    "probability_reference",
    "status",
];

pub fn emit_report(report: &MatrixReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => matrix_csv(&report.rows),
        Format::Markdown => matrix_markdown(report),
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

fn status_text(status: &RowStatus) -> String {
    match status {
        RowStatus::Ok => "ok".to_owned(),
        RowStatus::Aborted { reason, .. } => format!("aborted: {reason}"),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn matrix_csv(rows: &[MatrixRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MATRIX_COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.config.to_string(),
            r.author.clone(),
            opt(r.delta_adversarial),
            r.delta_reference.to_string(),
            opt(r.delta_change),
            opt(r.probability_adversarial),
            r.probability_reference.to_string(),
            status_text(&r.status),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of UTF-8 fields")
}

fn cell(v: Option<f64>, places: usize) -> String {
    match v {
        Some(x) => format!("{x:.places$}"),
        None => "aborted".to_owned(),
    }
}

fn matrix_markdown(report: &MatrixReport) -> String {
    let mut s = String::new();
    s.push_str("## Burrows' Delta\n\n");
    s.push_str("| Config | Author | Burrows' Delta (adversarial) | Burrows' Delta (reference) | Delta change |\n");
    s.push_str("|---:|---|---:|---:|---:|\n");
    for r in &report.rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {:.4} | {} |",
            r.config,
            r.author,
            cell(r.delta_adversarial, 4),
            r.delta_reference,
            cell(r.delta_change, 4)
        );
    }
    s.push_str("\n## Attribution probability\n\n");
    s.push_str("| Config | Author | Probability (adversarial) | Probability (reference) |\n");
    s.push_str("|---:|---|---:|---:|\n");
    for r in &report.rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {:.6} |",
            r.config,
            r.author,
            cell(r.probability_adversarial, 6),
            r.probability_reference
        );
    }
    let aborted: Vec<&MatrixRow> = report
        .rows
        .iter()
        .filter(|r| r.status != RowStatus::Ok)
        .collect();
    if !aborted.is_empty() {
        s.push_str("\n## Aborted\n\n");
        for r in aborted {
            let _ = writeln!(
                s,
                "- config {} ({}): {}",
                r.config,
                r.author,
                status_text(&r.status)
            );
        }
    }
    let m = &report.metadata;
    let _ = write!(
        s,
        "\nk = {}, zero-width stripping {}, reference sha256 `{}`\n",
        m.k,
        if m.strip_zero_width { "on" } else { "off" },
        m.reference_digest
    );
    s
}

#[derive(Serialize)]
struct DeltaJson<'a> {
    deltas: &'a std::collections::BTreeMap<String, f64>,
    probabilities: &'a std::collections::BTreeMap<String, f64>,
    function_words_used: &'a [String],
    closest_author: Option<&'a str>,
}

pub fn emit_delta(report: &DeltaReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&DeltaJson {
            deltas: &report.deltas,
            probabilities: &report.probabilities,
            function_words_used: &report.function_words_used,
            closest_author: report.closest_author(),
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["author", "delta", "probability"])
                .expect("in-memory write");
            for (author, delta) in &report.deltas {
                w.write_record([
                    author.clone(),
                    delta.to_string(),
                    report.probabilities[author].to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush"))
                .expect("csv of UTF-8 fields")
        }
        Format::Markdown => {
            let mut s =
                String::from("| Author | Burrows' Delta | Probability |\n|---|---:|---:|\n");
            for (author, delta) in &report.deltas {
                let _ = writeln!(
                    s,
                    "| {author} | {delta:.4} | {:.6} |",
                    report.probabilities[author]
                );
            }
            s
        }
    }
}

#[derive(Serialize)]
struct ScanJson {
    counts: std::collections::BTreeMap<String, usize>,
    offsets: Vec<ScanHit>,
    verdict: bool,
}

#[derive(Serialize)]
struct ScanHit {
    offset: usize,
    code_point: String,
}

pub fn code_point(c: char) -> String {
    format!("U+{:04X}", u32::from(c))
}

/// Scan report with code points written as `U+XXXX`.
pub fn emit_scan(report: &ScanReport, format: Format) -> Result<String, ReportError> {
    match format {
        Format::Json => Ok(to_json(&ScanJson {
            counts: report
                .counts
                .iter()
                .map(|(c, n)| (code_point(*c), *n))
                .collect(),
            offsets: report
                .offsets
                .iter()
                .map(|&(offset, c)| ScanHit {
                    offset,
                    code_point: code_point(c),
                })
                .collect(),
            verdict: report.verdict,
        })),
        Format::Csv => {
            let mut s = String::from("offset,code_point\n");
            for (offset, c) in &report.offsets {
                let _ = writeln!(s, "{offset},{}", code_point(*c));
            }
            Ok(s)
        }
        Format::Markdown => Err(ReportError::NotAvailable("markdown")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use inkveil_core::pipeline::ReportMetadata;

    fn empty() -> MatrixReport {
        MatrixReport {
            rows: vec![],
            metadata: ReportMetadata {
                k: 50,
                strip_zero_width: false,
                function_words_used: vec![],
                reference_digest: String::new(),
                candidate_digest: String::new(),
                seeds: Default::default(),
                backends: Default::default(),
                payload_overflow: Default::default(),
                generated_at: None,
            },
        }
    }

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(
            emit_report(&empty(), Format::Csv),
            "config,author,delta_adversarial,delta_reference,delta_change,probability_adversarial,probability_reference,status\n"
        );
    }

    #[test]
    fn markdown_has_delta_header() {
        assert!(emit_report(&empty(), Format::Markdown).contains("Burrows' Delta"));
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<Format>(), Ok(Format::Json));
        assert_eq!("md".parse::<Format>(), Ok(Format::Markdown));
        assert_eq!(
            "xml".parse::<Format>(),
            Err(ReportError::UnsupportedFormat("xml".into()))
        );
    }
}
