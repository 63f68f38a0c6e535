//! CSV tables and SVG phase portraits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// One cell of a table row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(vec![]);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_csv_bytes()?)?;
        Ok(())
    }
}

/// A CSV file read back: header plus raw string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvData {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Numeric column; empty cells become `None`.
    pub fn floats(&self, name: &str) -> Result<Vec<Option<f64>>, CliError> {
        let i = self
            .column(name)
            .ok_or_else(|| CliError::Config(format!("no column named {name:?}")))?;
        self.rows
            .iter()
            .map(|r| {
                let cell = r[i].trim();
                if cell.is_empty() {
                    Ok(None)
                } else {
                    cell.parse::<f64>()
                        .map(Some)
                        .map_err(|e| CliError::Config(format!("column {name}: {cell:?}: {e}")))
                }
            })
            .collect()
    }
}

pub fn read_csv_bytes(bytes: &[u8]) -> Result<CsvData, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok(CsvData { header, rows })
}

pub fn read_csv(path: &Path) -> Result<CsvData, CliError> {
    read_csv_bytes(&fs::read(path)?)
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

/// Phase portrait `(x_t, y_t)` as an SVG polyline with a start marker.
pub fn phase_portrait_svg(points: &[(f64, f64)], title: &str) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 20.0;
    let finite: Vec<(f64, f64)> =
        points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let extent = finite
        .iter()
        .map(|(x, y)| x.abs().max(y.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let scale = (SIZE / 2.0 - PAD) / extent;
    let map = |(x, y): (f64, f64)| (SIZE / 2.0 + x * scale, SIZE / 2.0 - y * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(title));
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let c = SIZE / 2.0;
    let _ = writeln!(
        svg,
        r##"<path d="M0 {c} H{SIZE} M{c} 0 V{SIZE}" stroke="#bbb" stroke-width="1"/>"##
    );
    let mut pts = String::new();
    for &p in &finite {
        let (u, v) = map(p);
        let _ = write!(pts, "{u:.3},{v:.3} ");
    }
    let _ = writeln!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#1f5fbf" stroke-width="1"/>"##,
        pts.trim_end()
    );
    if let Some(&start) = finite.first() {
        let (u, v) = map(start);
        let _ = writeln!(svg, r##"<circle cx="{u:.3}" cy="{v:.3}" r="4" fill="#d03030"/>"##);
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
