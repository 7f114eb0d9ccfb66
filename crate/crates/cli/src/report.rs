//! Output records and their renderings. CSV and Markdown are projections of
//! the JSON record.

use std::fmt::Write as _;

use lewislab_core::{Family, RankMethod, SystemKind};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
    Markdown,
}

/// One computed cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub family: Family,
    #[serde(rename = "N")]
    pub level: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_plus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_minus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_total: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<u64>,
    #[serde(rename = "match", default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    pub system: SystemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_method: Option<RankMethod>,
    /// Only present when timings are requested, so default output stays
    /// byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), T::to_string)
}

const CSV_HEADER: &str =
    "family,N,n,dim_plus,dim_minus,dim_total,predicted,match,system,rank_method,elapsed_ms,tool_version,printed,note,error";

fn csv_field(s: String) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

pub fn render_csv(records: &[Record]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            r.family.to_string(),
            r.level.to_string(),
            r.n.to_string(),
            opt(&r.dim_plus),
            opt(&r.dim_minus),
            opt(&r.dim_total),
            opt(&r.predicted),
            opt(&r.matches),
            r.system.to_string(),
            opt(&r.rank_method),
            opt(&r.elapsed_ms),
            r.tool_version.clone(),
            opt(&r.printed),
            opt(&r.note),
            opt(&r.error),
        ];
        let line: Vec<String> = fields.into_iter().map(csv_field).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(records: &[Record]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

/// Totals laid out with one row per level and one column per degree;
/// failed cells show `ERR`.
pub fn render_grid(records: &[Record], levels: &[u32], degrees: &[u32]) -> String {
    let mut out = String::new();
    if degrees.is_empty() || levels.is_empty() {
        return out;
    }
    out.push_str("| N \\ n |");
    for n in degrees {
        let _ = write!(out, " {n} |");
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(degrees.len()));
    out.push('\n');
    for &level in levels {
        let _ = write!(out, "| {level} |");
        for &n in degrees {
            let cell = records
                .iter()
                .find(|r| r.level == level && r.n == n)
                .map_or("ERR".to_string(), |r| r.dim_total.map_or("ERR".to_string(), |d| d.to_string()));
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
    out
}

/// One line per cell for the conjecture check.
pub fn render_check_line(r: &Record) -> String {
    let group = match r.family {
        Family::Principal => format!("Γ({})", r.level),
        Family::Hecke => format!("Γ₀({})", r.level),
    };
    if let Some(err) = &r.error {
        return format!("{group} n={}: ERROR {err}", r.n);
    }
    let total = opt(&r.dim_total);
    let predicted = opt(&r.predicted);
    let verdict = if r.matches == Some(true) { "match" } else { "MISMATCH" };
    let mut line = format!(
        "{group} n={}: computed {total} (+{} / -{}), predicted {predicted}, {verdict}",
        r.n,
        opt(&r.dim_plus),
        opt(&r.dim_minus)
    );
    if let Some(p) = r.printed {
        let _ = write!(line, "; printed {p}");
    }
    if let Some(note) = &r.note {
        let _ = write!(line, "; {note}");
    }
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Record {
        Record {
            family: Family::Hecke,
            level: 7,
            n: 10,
            dim_plus: Some(7),
            dim_minus: Some(9),
            dim_total: Some(16),
            predicted: Some(16),
            matches: Some(true),
            system: SystemKind::Extended,
            rank_method: Some(RankMethod::Modular),
            elapsed_ms: None,
            tool_version: "0.1.0".into(),
            printed: Some(16),
            note: None,
            error: None,
        }
    }

    #[test]
    fn json_roundtrip() {
        let recs = vec![sample()];
        let back: Vec<Record> = serde_json::from_str(&render_json(&recs)).unwrap();
        assert_eq!(back, recs);
        let text = render_json(&recs);
        assert!(text.contains("\"N\": 7") && text.contains("\"match\": true"));
        assert!(!text.contains("elapsed_ms"));
    }

    #[test]
    fn csv_projection() {
        let csv = render_csv(&[sample()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "gamma0,7,10,7,9,16,16,true,extended,modular,,0.1.0,16,,");
    }

    #[test]
    fn grid_marks_missing_cells() {
        let grid = render_grid(&[sample()], &[7], &[10, 12]);
        assert!(grid.contains("| 7 | 16 | ERR |"));
        assert!(render_grid(&[], &[3], &[]).is_empty());
    }
}
