//! Result files: CSV, JSON and whitespace-delimited plot data.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::sweep::NeutralPoint;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Decimal text with [`SIGNIFICANT_DIGITS`] significant digits; scientific
/// notation outside `[1e-3, 1e9)`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs();
    if !(1e-3..1e9).contains(&mag) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    let exponent = mag.log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One output line; the CSV columns are exactly the first seven fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    #[serde(rename = "N")]
    pub n_rate: f64,
    pub a2: f64,
    pub method: String,
    #[serde(rename = "K_or_resolution")]
    pub k_or_resolution: Option<usize>,
    pub rayleigh: Option<f64>,
    pub paper_value: Option<f64>,
    pub rel_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    /// Applies the fixed output precision to every numeric field.
    pub fn rounded(mut self) -> Self {
        self.n_rate = round_sig(self.n_rate);
        self.a2 = round_sig(self.a2);
        self.rayleigh = self.rayleigh.map(round_sig);
        self.paper_value = self.paper_value.map(round_sig);
        self.rel_deviation = self.rel_deviation.map(round_sig);
        self
    }
}

pub const CSV_HEADER: [&str; 7] = ["N", "a2", "method", "K_or_resolution", "rayleigh", "paper_value", "rel_deviation"];

pub fn to_csv(records: &[Record]) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    for r in records {
        w.write_record([
            format_sig(r.n_rate),
            format_sig(r.a2),
            r.method.clone(),
            r.k_or_resolution.map(|k| k.to_string()).unwrap_or_default(),
            opt(r.rayleigh),
            opt(r.paper_value),
            opt(r.rel_deviation),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub meta: BTreeMap<String, Value>,
    pub results: Vec<Record>,
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Gnuplot-style columns `a N Ra method`, one blank-line-separated block per N.
pub fn plot_data(points: &[NeutralPoint]) -> String {
    let mut sorted: Vec<&NeutralPoint> = points.iter().collect();
    sorted.sort_by(|p, q| p.n_rate.total_cmp(&q.n_rate).then(p.a.total_cmp(&q.a)));
    let mut out = String::from("# a N Ra method\n");
    let mut current: Option<f64> = None;
    for p in sorted {
        if current.is_some_and(|n| n != p.n_rate) {
            out.push('\n');
        }
        current = Some(p.n_rate);
        out.push_str(&format!("{} {} {} {}\n", format_sig(p.a), format_sig(p.n_rate), format_sig(p.rayleigh), p.method));
    }
    out
}

/// Writes through a temporary file in the target directory, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
