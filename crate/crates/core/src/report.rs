//! Text, CSV, JSON and Markdown rendering of projection and sensitivity
//! results.
//!
//! Rendering is pure: the report timestamp is passed in, never read from a
//! clock here. Output is UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::ProjectionResult;
use crate::sensitivity::{AnalysisKind, SensitivityReport};
use crate::timeline::Stage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" | "text" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            _ => Err(Error::validation("format", s, "be one of table, csv, json, markdown")),
        }
    }
}

/// A titled, timestamped list of projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub title: String,
    pub generated_at: String,
    pub results: Vec<ProjectionResult>,
}

impl ReportDocument {
    pub fn new(title: impl Into<String>, generated_at: DateTime<Utc>, results: Vec<ProjectionResult>) -> Self {
        Self {
            title: title.into(),
            generated_at: generated_at.to_rfc3339_opts(SecondsFormat::Secs, true),
            results,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        if self.results.is_empty() {
            return Err(Error::EmptyInput);
        }
        match format {
            Format::Table => Ok(self.render_table()),
            Format::Csv => self.render_csv(),
            Format::Json => to_json(self),
            Format::Markdown => Ok(self.render_markdown()),
        }
    }

    fn render_table(&self) -> String {
        let header = [
            "Category", "Stage", "T_comp", "T_crow", "T_poisson", "T_prod+reg", "T_total", "Year", "Gating",
        ];
        let rows = self
            .results
            .iter()
            .map(|r| {
                let b = &r.breakdown;
                vec![
                    r.category.clone(),
                    r.stage.number().to_string(),
                    years(b.t_comp),
                    years(b.t_crow_total),
                    years(b.t_poisson),
                    years(b.t_prod_reg),
                    years(b.t_total),
                    b.calendar_year.to_string(),
                    b.gating.to_string(),
                ]
            })
            .collect::<Vec<_>>();
        let mut out = format!("{}\ngenerated {}\n\n", self.title, self.generated_at);
        out.push_str(&aligned(&header, &rows, &[0, 8]));
        out
    }

    fn render_csv(&self) -> Result<String> {
        let mut w = csv_writer();
        write_record(&mut w, PROJECTION_COLUMNS.iter().copied())?;
        for r in &self.results {
            let b = &r.breakdown;
            let i = &r.intermediate;
            write_record(
                &mut w,
                [
                    r.category.clone(),
                    r.stage.number().to_string(),
                    b.t_comp.to_string(),
                    b.t_crow_total.to_string(),
                    b.t_crow_partial.to_string(),
                    b.t_crow_final.to_string(),
                    b.t_poisson.to_string(),
                    b.t_prod_reg.to_string(),
                    b.f.to_string(),
                    b.t_total.to_string(),
                    b.gating.to_string(),
                    b.calendar_year.to_string(),
                    i.naive_demand.log10().to_string(),
                    i.chi.to_string(),
                    i.effective_demand.log10().to_string(),
                    i.crow_miles.to_string(),
                    i.poisson_miles.to_string(),
                    i.gamma.to_string(),
                    i.delta_effective.to_string(),
                ],
            )?;
        }
        finish_csv(w)
    }

    fn render_markdown(&self) -> String {
        let mut out = format!("# {}\n\nGenerated {}\n\n", self.title, self.generated_at);
        out.push_str("| Category | Revenue Service (Stage 2) | Broad Commercialization (Stage 3) |\n");
        out.push_str("|---|---|---|\n");
        let mut categories: Vec<&str> = Vec::new();
        for r in &self.results {
            if !categories.contains(&r.category.as_str()) {
                categories.push(&r.category);
            }
        }
        for category in &categories {
            let year = |stage: Stage| {
                self.results
                    .iter()
                    .find(|r| r.category == *category && r.stage == stage)
                    .map_or_else(|| "-".to_string(), |r| r.breakdown.calendar_year.to_string())
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                escape_md(category),
                year(Stage::RevenueService),
                year(Stage::BroadCommercial)
            );
        }

        out.push_str("\n## Breakdown\n");
        for r in &self.results {
            let b = &r.breakdown;
            let i = &r.intermediate;
            let _ = writeln!(out, "\n### {}, stage {}\n", escape_md(&r.category), r.stage.number());
            out.push_str("| Quantity | Value |\n|---|---|\n");
            let rows = [
                ("t_comp (years)", years(b.t_comp)),
                ("t_crow_total (years)", years(b.t_crow_total)),
                ("t_crow_partial (years)", years(b.t_crow_partial)),
                ("t_crow_final (years)", years(b.t_crow_final)),
                ("t_poisson (years)", years(b.t_poisson)),
                ("t_prod_reg (years)", years(b.t_prod_reg)),
                ("f", format!("{:.2}", b.f)),
                ("t_total (years)", years(b.t_total)),
                ("gating", b.gating.to_string()),
                ("calendar_year", b.calendar_year.to_string()),
                ("naive demand (ops/s)", i.naive_demand.to_string()),
                ("chi", format!("{:.4e}", i.chi)),
                ("effective demand (ops/s)", i.effective_demand.to_string()),
                ("crow-amsaa miles", format!("{:.4e}", i.crow_miles)),
                ("poisson miles", format!("{:.4e}", i.poisson_miles)),
                ("gamma", format!("{:.2}", i.gamma)),
                ("delta", format!("{:.2}", i.delta_effective)),
            ];
            for (name, value) in rows {
                let _ = writeln!(out, "| {name} | {value} |");
            }
        }
        out
    }
}

/// JSON Schema for the JSON projection report.
pub fn report_schema() -> &'static str {
    include_str!("../../../docs/report.schema.json")
}

const PROJECTION_COLUMNS: [&str; 19] = [
    "category",
    "stage",
    "t_comp",
    "t_crow_total",
    "t_crow_partial",
    "t_crow_final",
    "t_poisson",
    "t_prod_reg",
    "f",
    "t_total",
    "gating",
    "calendar_year",
    "naive_demand_log10",
    "chi",
    "effective_demand_log10",
    "crow_miles",
    "poisson_miles",
    "gamma",
    "delta_effective",
];

/// Renders projections with the given title and timestamp.
pub fn render(results: &[ProjectionResult], format: Format, title: &str, generated_at: DateTime<Utc>) -> Result<String> {
    ReportDocument::new(title, generated_at, results.to_vec()).render(format)
}

/// Renders a sweep, tornado or Monte Carlo report. These carry no timestamp,
/// so identical runs give identical bytes.
pub fn render_sensitivity(report: &SensitivityReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => sensitivity_csv(report),
        Format::Table => Ok(sensitivity_text(report, false)),
        Format::Markdown => Ok(sensitivity_text(report, true)),
    }
}

fn analysis_name(kind: AnalysisKind) -> &'static str {
    match kind {
        AnalysisKind::Sweep => "one-at-a-time sweep",
        AnalysisKind::Tornado => "tornado",
        AnalysisKind::MonteCarlo => "monte carlo",
    }
}

fn sensitivity_csv(report: &SensitivityReport) -> Result<String> {
    let mut w = csv_writer();
    if report.analysis == AnalysisKind::Tornado {
        write_record(
            &mut w,
            ["rank", "parameter_path", "low", "high", "t_total_low", "t_total_high", "spread"],
        )?;
        for (rank, e) in report.tornado.iter().enumerate() {
            write_record(
                &mut w,
                [
                    (rank + 1).to_string(),
                    e.parameter_path.clone(),
                    e.low.to_string(),
                    e.high.to_string(),
                    e.t_total_low.to_string(),
                    e.t_total_high.to_string(),
                    e.spread.to_string(),
                ],
            )?;
        }
        return finish_csv(w);
    }
    let paths: Vec<String> = report
        .records
        .first()
        .map(|r| r.inputs.iter().map(|p| p.parameter_path.clone()).collect())
        .unwrap_or_default();
    let mut header = vec!["index".to_string()];
    header.extend(paths.iter().cloned());
    header.extend(["t_crow_total", "t_total", "calendar_year", "gating"].map(String::from));
    write_record(&mut w, header)?;
    for (index, r) in report.records.iter().enumerate() {
        let mut row = vec![index.to_string()];
        row.extend(r.inputs.iter().map(|p| p.value.to_string()));
        row.push(r.t_crow_total.to_string());
        row.push(r.t_total.to_string());
        row.push(r.calendar_year.to_string());
        row.push(r.gating.to_string());
        write_record(&mut w, row)?;
    }
    finish_csv(w)
}

fn sensitivity_text(report: &SensitivityReport, markdown: bool) -> String {
    let mut out = String::new();
    let heading = format!(
        "{} for {}, stage {}",
        analysis_name(report.analysis),
        report.category,
        report.stage.number()
    );
    if markdown {
        let _ = writeln!(out, "# {}\n", escape_md(&heading));
    } else {
        let _ = writeln!(out, "{heading}\n");
    }
    let _ = writeln!(out, "baseline t_total: {} years", years(report.baseline_t_total));
    if let Some(s) = &report.summary {
        let _ = writeln!(
            out,
            "t_total min/mean/max: {} / {} / {} years",
            years(s.min),
            years(s.mean),
            years(s.max)
        );
    }
    if let Some(mc) = &report.monte_carlo {
        let _ = writeln!(out, "seed: {}, samples: {}", mc.seed, mc.sample_count);
        let header = ["Percentile", "T_total"];
        let rows = mc
            .percentiles
            .iter()
            .map(|p| vec![format!("p{}", p.percentile), years(p.t_total)])
            .collect::<Vec<_>>();
        out.push('\n');
        out.push_str(&table(markdown, &header, &rows, &[]));
        return out;
    }
    out.push('\n');
    if report.analysis == AnalysisKind::Tornado {
        let header = ["Rank", "Parameter", "Low", "High", "T_total(low)", "T_total(high)", "Spread"];
        let rows = report
            .tornado
            .iter()
            .enumerate()
            .map(|(i, e)| {
                vec![
                    (i + 1).to_string(),
                    e.parameter_path.clone(),
                    number(e.low),
                    number(e.high),
                    years(e.t_total_low),
                    years(e.t_total_high),
                    years(e.spread),
                ]
            })
            .collect::<Vec<_>>();
        out.push_str(&table(markdown, &header, &rows, &[1]));
        return out;
    }
    let path = report
        .records
        .first()
        .and_then(|r| r.inputs.first())
        .map_or("value", |p| p.parameter_path.as_str())
        .to_string();
    let header = [path.as_str(), "T_crow", "T_total", "Year", "Gating"];
    let rows = report
        .records
        .iter()
        .map(|r| {
            vec![
                r.inputs.first().map_or_else(String::new, |p| number(p.value)),
                years(r.t_crow_total),
                years(r.t_total),
                r.calendar_year.to_string(),
                r.gating.to_string(),
            ]
        })
        .collect::<Vec<_>>();
    out.push_str(&table(markdown, &header, &rows, &[4]));
    out
}

fn table(markdown: bool, header: &[&str], rows: &[Vec<String>], left: &[usize]) -> String {
    if !markdown {
        return aligned(header, rows, left);
    }
    let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| escape_md(c)).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
    out
}

/// Space-padded columns; indices in `left` are left-aligned, the rest right.
fn aligned(header: &[&str], rows: &[Vec<String>], left: &[usize]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = cells
            .enumerate()
            .map(|(i, c)| {
                if left.contains(&i) {
                    format!("{:<w$}", c, w = widths[i])
                } else {
                    format!("{:>w$}", c, w = widths[i])
                }
            })
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s.push('\n');
        s
    };
    let mut out = line(&mut header.iter().copied());
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&line(&mut row.iter().map(String::as_str)));
    }
    out
}

fn years(value: f64) -> String {
    format!("{value:.2}")
}

fn number(value: f64) -> String {
    if value != 0.0 && (value.abs() >= 1e6 || value.abs() < 1e-3) {
        format!("{value:e}")
    } else {
        format!("{value}")
    }
}

fn escape_md(text: &str) -> String {
    text.replace('|', "\\|")
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn write_record<I, T>(w: &mut csv::Writer<Vec<u8>>, record: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(record).map_err(|e| Error::Serialize(e.to_string()))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{builtin_catalog, find_category, project, project_all};
    use chrono::TimeZone;

    fn stamp() -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2024, 6, 1, 12, 0, 0).unwrap()
    }

    #[test]
    fn markdown_stage_table_and_breakdown() {
        let results = project_all(&builtin_catalog(), &Stage::PROJECTED).unwrap();
        let md = render(&results, Format::Markdown, "Timelines", stamp()).unwrap();
        assert!(md.contains("| Category | Revenue Service (Stage 2) | Broad Commercialization (Stage 3) |"));
        let mining = md.lines().find(|l| l.starts_with("| Industrial/Mining |")).unwrap();
        assert_eq!(mining, "| Industrial/Mining | 2027 | 2029 |");
        assert!(md.contains("Generated 2024-06-01T12:00:00Z"));
        assert!(md.contains("| gating | compute-gated |"));
        assert_eq!(md.matches("### ").count(), 16);
    }

    #[test]
    fn single_result_csv_is_two_lines() {
        let r = project(&find_category("Robo-Taxis").unwrap(), Stage::BroadCommercial).unwrap();
        let csv = render(&[r], Format::Csv, "t", stamp()).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
        assert!(csv.starts_with("category,stage,t_comp,"));
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut s = find_category("Robo-Taxis").unwrap();
        s.name = "Taxis, \"urban\"".into();
        let r = project(&s, Stage::BroadCommercial).unwrap();
        let csv = render(&[r], Format::Csv, "t", stamp()).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("\"Taxis, \"\"urban\"\"\",3,"));
    }

    #[test]
    fn json_round_trips_exactly() {
        let results = project_all(&builtin_catalog(), &Stage::PROJECTED).unwrap();
        let text = render(&results, Format::Json, "t", stamp()).unwrap();
        let doc: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.results, results);
    }

    #[test]
    fn json_matches_report_schema() {
        let schema: serde_json::Value = serde_json::from_str(report_schema()).unwrap();
        let validator = jsonschema::validator_for(&schema).unwrap();
        let results = project_all(&builtin_catalog(), &Stage::PROJECTED).unwrap();
        let text = render(&results, Format::Json, "t", stamp()).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(validator.is_valid(&doc));
        let mut broken = doc.clone();
        broken["results"][0]["breakdown"]["gating"] = "unknown".into();
        assert!(!validator.is_valid(&broken));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(render(&[], Format::Table, "t", stamp()), Err(Error::EmptyInput)));
    }

    #[test]
    fn table_is_aligned() {
        let results = project_all(&builtin_catalog()[..2], &[Stage::BroadCommercial]).unwrap();
        let text = render(&results, Format::Table, "Timelines", stamp()).unwrap();
        let lines: Vec<&str> = text.lines().skip(3).collect();
        assert!(lines[0].starts_with("Category"));
        assert!(lines[1].chars().all(|c| c == '-'));
        assert!(lines[2].contains("2068") && lines[2].contains("compute-gated"));
        assert!(lines[3].contains("2081") && lines[3].contains("reliability-gated"));
    }

    #[test]
    fn format_names() {
        assert_eq!("markdown".parse::<Format>().unwrap(), Format::Markdown);
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert!("pdf".parse::<Format>().is_err());
    }
}
