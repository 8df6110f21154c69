//! Plain-text column files.
//!
//! Layout: `# key: value` metadata lines, one `# columns: a b c` line, then
//! whitespace-separated numeric rows. Floats are written in their shortest
//! round-trip form, so parsing an emitted file restores identical values.

use std::fmt::Write as _;

use crate::dirichlet::{BandCurve, BandRow};
use crate::distributions::Interpolation;
use crate::error::{Error, Result};
use crate::evidence::{BoundKind, DempsterShaferStructure, FocalElement, PBox};
use crate::lda::HistogramBin;

/// Numeric table with string metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ColumnTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ColumnTable {
    pub fn new(columns: &[&str]) -> Self {
        Self { meta: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn require_meta(&self, key: &str) -> Result<&str> {
        self.meta(key).ok_or_else(|| Error::Parse { line: 0, message: format!("missing '# {key}:' header") })
    }

    fn require_columns(&self, expected: &[&str]) -> Result<()> {
        if self.columns != expected {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected columns '{}', got '{}'", expected.join(" "), self.columns.join(" ")),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "# columns: {}", self.columns.join(" "));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(f64::to_string).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut t = Self::default();
        let mut have_columns = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                // Other comments, audit lines included, are skipped.
                let Some((k, v)) = rest.split_once(':') else { continue };
                let (k, v) = (k.trim(), v.trim());
                if k.is_empty() || k.contains(char::is_whitespace) {
                    continue;
                }
                if k == "columns" {
                    t.columns = v.split_whitespace().map(str::to_string).collect();
                    have_columns = true;
                } else {
                    t.meta.push((k.to_string(), v.to_string()));
                }
                continue;
            }
            if !have_columns {
                return Err(Error::Parse { line: line_no, message: "data before '# columns:' header".into() });
            }
            let row = line
                .split_whitespace()
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::Parse { line: line_no, message: format!("not a number: '{c}'") })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != t.columns.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {} fields, got {}", t.columns.len(), row.len()),
                });
            }
            t.rows.push(row);
        }
        if !have_columns {
            return Err(Error::Parse { line: 0, message: "missing '# columns:' header".into() });
        }
        Ok(t)
    }

    fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }
}

const DS_COLUMNS: [&str; 3] = ["x", "y", "p"];
const PBOX_COLUMNS: [&str; 3] = ["x", "F_L", "F_U"];
const BAND_COLUMNS: [&str; 4] = ["x", "lower", "mean", "upper"];
const HISTOGRAM_COLUMNS: [&str; 3] = ["lo", "hi", "count"];

/// One `x y p` line per focal element.
pub fn write_ds(ds: &DempsterShaferStructure) -> String {
    let mut t = ColumnTable::new(&DS_COLUMNS).with_meta("kind", ds.kind());
    for e in ds.elements() {
        t.push(vec![e.lo, e.hi, e.mass]);
    }
    t.to_text()
}

/// Reads a structure; a missing `kind` header means sure bounds.
pub fn parse_ds(text: &str) -> Result<DempsterShaferStructure> {
    let t = ColumnTable::parse(text)?;
    t.require_columns(&DS_COLUMNS)?;
    let kind = t.meta("kind").map_or(Ok(BoundKind::Sure), str::parse)?;
    let elements = t.rows.iter().map(|r| FocalElement::new(r[0], r[1], r[2])).collect();
    DempsterShaferStructure::with_kind(elements, kind)
}

/// Grid columns `x F_L F_U`.
pub fn write_pbox(p: &PBox) -> String {
    let mut t = ColumnTable::new(&PBOX_COLUMNS).with_meta("kind", p.kind());
    for ((x, l), u) in p.grid().iter().zip(p.lower_values()).zip(p.upper_values()) {
        t.push(vec![*x, *l, *u]);
    }
    t.to_text()
}

pub fn parse_pbox(text: &str) -> Result<PBox> {
    let t = ColumnTable::parse(text)?;
    t.require_columns(&PBOX_COLUMNS)?;
    let kind = t.meta("kind").map_or(Ok(BoundKind::Sure), str::parse)?;
    PBox::new(t.column(0), t.column(1), t.column(2), kind)
}

pub fn write_band(b: &BandCurve) -> String {
    let mut t = ColumnTable::new(&BAND_COLUMNS)
        .with_meta("lower_q", b.lower_q)
        .with_meta("upper_q", b.upper_q)
        .with_meta("concentration", b.concentration)
        .with_meta("interpolation", b.interpolation.as_str());
    for r in &b.rows {
        t.push(vec![r.x, r.lower, r.mean, r.upper]);
    }
    t.to_text()
}

pub fn parse_band(text: &str) -> Result<BandCurve> {
    let t = ColumnTable::parse(text)?;
    t.require_columns(&BAND_COLUMNS)?;
    let num = |k: &str| -> Result<f64> {
        let v = t.require_meta(k)?;
        v.parse().map_err(|_| Error::Parse { line: 0, message: format!("bad '{k}' value '{v}'") })
    };
    let interpolation: Interpolation = t.require_meta("interpolation")?.parse()?;
    Ok(BandCurve {
        rows: t.rows.iter().map(|r| BandRow { x: r[0], lower: r[1], mean: r[2], upper: r[3] }).collect(),
        lower_q: num("lower_q")?,
        upper_q: num("upper_q")?,
        concentration: num("concentration")?,
        interpolation,
    })
}

pub fn write_histogram(bins: &[HistogramBin]) -> String {
    let mut t = ColumnTable::new(&HISTOGRAM_COLUMNS);
    for b in bins {
        t.push(vec![b.lo, b.hi, b.count as f64]);
    }
    t.to_text()
}

pub fn parse_histogram(text: &str) -> Result<Vec<HistogramBin>> {
    let t = ColumnTable::parse(text)?;
    t.require_columns(&HISTOGRAM_COLUMNS)?;
    t.rows
        .iter()
        .map(|r| {
            let c = r[2];
            if c < 0.0 || c.fract() != 0.0 {
                return Err(Error::Parse { line: 0, message: format!("bin count must be a nonnegative integer, got {c}") });
            }
            Ok(HistogramBin { lo: r[0], hi: r[1], count: c as u64 })
        })
        .collect()
}
