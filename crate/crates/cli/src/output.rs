use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

/// A CSV cell.
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&'static str> for Cell {
    fn from(v: &'static str) -> Self {
        Cell::Text(v)
    }
}

/// Rows under a header, with an optional JSON report as a `# ` footer line.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
    footer: Option<String>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self { header, rows: Vec::new(), footer: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn footer<T: Serialize>(&mut self, report: &T) -> serde_json::Result<()> {
        self.footer = Some(serde_json::to_string(report)?);
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                // 17 significant digits round-trip every f64.
                let _ = match cell {
                    Cell::Num(v) => write!(out, "{v:.16e}"),
                    Cell::Int(v) => write!(out, "{v}"),
                    Cell::Text(s) => write!(out, "{s}"),
                };
            }
            out.push('\n');
        }
        if let Some(footer) = &self.footer {
            out.push_str("# ");
            out.push_str(footer);
            out.push('\n');
        }
        out
    }
}

pub fn json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes all of `content` to `path` via a sibling temp file and a rename, or
/// to stdout in one write when no path is given.
pub fn emit(content: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
