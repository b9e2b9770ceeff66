//! Rendering of command results as aligned text, CSV or JSON.

use clap::ValueEnum;
use ncg_core::{CMat, Complex64};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Self {
        Self { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// A key/value table.
    pub fn pairs(title: impl Into<String>, pairs: Vec<(&str, String)>) -> Self {
        let mut t = Self::new(title, &["property", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }

    /// Matrix entries as rows of complex strings.
    pub fn matrix(title: impl Into<String>, m: &CMat) -> Self {
        let headers: Vec<String> = std::iter::once("row".to_string()).chain((0..m.ncols()).map(|j| format!("c{j}"))).collect();
        let rows = (0..m.nrows())
            .map(|i| std::iter::once(i.to_string()).chain((0..m.ncols()).map(|j| complex(m[(i, j)]))).collect())
            .collect();
        Self { title: title.into(), headers, rows }
    }
}

/// Everything a command produced; `ok = false` maps to exit code 2.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub tables: Vec<Table>,
    /// Extra lines shown in text output only.
    pub notes: Vec<String>,
    pub ok: bool,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("JSON values always serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let single = report.tables.len() == 1;
            let mut out = String::new();
            for (k, t) in report.tables.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                if !single {
                    out.push_str(&format!("# {}\n", t.title));
                }
                out.push_str(&csv_line(&t.headers));
                for r in &t.rows {
                    out.push_str(&csv_line(r));
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (k, t) in report.tables.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("{}\n", t.title));
                let widths: Vec<usize> = (0..t.headers.len())
                    .map(|c| t.rows.iter().map(|r| r[c].chars().count()).chain([t.headers[c].len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: &[String]| {
                    let parts: Vec<String> =
                        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
                    format!("  {}\n", parts.join("  ").trim_end())
                };
                out.push_str(&line(&t.headers));
                for r in &t.rows {
                    out.push_str(&line(r));
                }
            }
            for n in &report.notes {
                out.push_str(&format!("{n}\n"));
            }
            out
        }
    }
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| if c.contains([',', '"', '\n']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
        .collect();
    format!("{}\n", quoted.join(","))
}

/// Locale-free decimal rendering; scientific notation outside `[1e-4, 1e15)`.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `re+imi`, e.g. `1+0i`, `0-1i`.
pub fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", real(z.re), real(z.im.abs()))
}
