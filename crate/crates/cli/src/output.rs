//! Tables with a self-describing header, written atomically.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::config::{Format, ScenarioConfig};

pub const TOOL: &str = concat!("ptphase ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // shortest round-trip form, so output is exact and stable
            Cell::F(x) if x.is_nan() => "nan".into(),
            Cell::F(x) => format!("{x:e}"),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => Value::from(*x),
            Cell::I(i) => Value::from(*i),
            Cell::S(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key: value` header lines.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, cfg: &ScenarioConfig) -> String {
        match cfg.format {
            Format::Csv => self.csv(cfg),
            Format::Json => self.json(cfg),
        }
    }

    fn csv(&self, cfg: &ScenarioConfig) -> String {
        let mut s = String::new();
        s += &format!("# {TOOL}\n# command: {}\n", cfg.command.name());
        let echo: Vec<String> = cfg.echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
        s += &format!("# config: {}\n", echo.join(" "));
        for (k, v) in &self.notes {
            s += &format!("# {k}: {v}\n");
        }
        s += &format!("# columns: {}\n", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s += &cells.join(",");
            s.push('\n');
        }
        s
    }

    fn json(&self, cfg: &ScenarioConfig) -> String {
        let notes: Map<String, Value> = self.notes.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "tool": TOOL,
            "command": cfg.command.name(),
            "config": cfg.echo,
            "notes": notes,
            "columns": self.columns,
            "rows": rows,
        });
        doc.to_string() + "\n"
    }
}

/// JSON document carrying the same header fields as a table.
pub fn sidecar(cfg: &ScenarioConfig, kind: &str, payload: Value) -> String {
    let doc = json!({
        "tool": TOOL,
        "command": cfg.command.name(),
        "config": cfg.echo,
        "kind": kind,
        "data": payload,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot create file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// `dir/stem{suffix}.ext`, keeping the extension of `base`.
pub fn derived_path(base: &Path, suffix: &str, ext: Option<&str>) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = ext.map(str::to_string).or_else(|| base.extension().map(|e| e.to_string_lossy().into_owned()));
    let name = match ext {
        Some(e) => format!("{stem}{suffix}.{e}"),
        None => format!("{stem}{suffix}"),
    };
    base.with_file_name(name)
}

/// Writes to the configured path, or to stdout when none is set.
pub fn emit(cfg: &ScenarioConfig, path: Option<&Path>, text: &str) -> Result<()> {
    match path.or(cfg.out.as_deref()) {
        Some(p) => write_atomic(p, text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_paths() {
        assert_eq!(derived_path(Path::new("out/w.csv"), "_t2", None), PathBuf::from("out/w_t2.csv"));
        assert_eq!(derived_path(Path::new("f.csv"), ".stagnation", Some("json")), PathBuf::from("f.stagnation.json"));
        assert_eq!(derived_path(Path::new("f"), "_t0", None), PathBuf::from("f_t0"));
    }

    #[test]
    fn float_cells_round_trip() {
        for x in [0.1, -3.0, 1e-300, std::f64::consts::PI] {
            let s = Cell::F(x).csv();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(Cell::F(f64::NAN).csv(), "nan");
    }
}
