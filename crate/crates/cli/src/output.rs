//! Deterministic file output: CSV with 17-significant-digit floats and
//! RFC-style quoting, JSON reports, and the atomically-written run manifest.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// 17 significant digits; round-trips every f64 and keeps output byte-stable.
pub fn float17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{:.16e}", x)
    }
}

pub enum Field {
    Float(f64),
    Int(i64),
    Uint(usize),
    Str(String),
    Empty,
}

fn quote_if_needed(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct CsvWriter {
    out: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &[&str]) -> Result<Self> {
        let file = File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = CsvWriter { out: BufWriter::new(file), path: path.to_path_buf() };
        w.write_raw_row(header)?;
        Ok(w)
    }

    fn write_raw_row(&mut self, fields: &[&str]) -> Result<()> {
        let row = fields.iter().map(|f| quote_if_needed(f)).collect::<Vec<_>>().join(",");
        writeln!(self.out, "{row}")
            .with_context(|| format!("write failure on {}", self.path.display()))
    }

    pub fn write_row(&mut self, fields: &[Field]) -> Result<()> {
        let rendered: Vec<String> = fields
            .iter()
            .map(|f| match f {
                Field::Float(x) => float17(*x),
                Field::Int(i) => i.to_string(),
                Field::Uint(u) => u.to_string(),
                Field::Str(s) => quote_if_needed(s),
                Field::Empty => String::new(),
            })
            .collect();
        let row = rendered.join(",");
        writeln!(self.out, "{row}")
            .with_context(|| format!("write failure on {}", self.path.display()))
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush().with_context(|| format!("flush failure on {}", self.path.display()))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Write-then-rename so a manifest is never observed half-written.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("cannot move manifest into place at {}", path.display()))
}
