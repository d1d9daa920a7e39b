//! CSV tables with a versioned header and binary operator dumps.
//!
//! Dump layout: `u64` rows, `u64` cols, then row-major `(re, im)` pairs, all
//! little-endian.

use crate::error::{Error, Result};
use crate::geometry::Curve;
use crate::linalg::{c64, CMat};
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

/// First line of every CSV written by this crate.
pub const CSV_HEADER: &str = "# helmscatter-v1";

/// An in-memory CSV table rendered deterministically.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra `# key=value` lines after the version header.
    pub meta: Vec<(String, String)>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        CsvTable { columns: columns.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Config(format!(
                "CSV row has {} fields, expected {}",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_HEADER);
        s.push('\n');
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}={v}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    /// Write via a temporary file and rename so readers never see a partial table.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }

    /// Parse a table written by [`CsvTable::render`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(l) if l == CSV_HEADER => {}
            other => return Err(Error::Config(format!("missing CSV version header, found {other:?}"))),
        }
        let mut t = CsvTable::default();
        for line in lines {
            if let Some(m) = line.strip_prefix("# ") {
                if let Some((k, v)) = m.split_once('=') {
                    t.meta.push((k.into(), v.into()));
                }
            } else if t.columns.is_empty() {
                t.columns = line.split(',').map(String::from).collect();
            } else if !line.is_empty() {
                t.push(line.split(',').map(String::from).collect())?;
            }
        }
        Ok(t)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j].as_str()).collect())
    }
}

/// Fixed-format float for CSV cells (17 significant digits, round-trippable).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp~");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Nodes, tangents, normals, curvature and speed of a discretised curve.
pub fn curve_table(curve: &Curve) -> CsvTable {
    let mut t = CsvTable::new(&["j", "s", "x", "y", "tx", "ty", "nx", "ny", "kappa", "speed"]);
    t.meta("shape", curve.kind);
    t.meta("n", curve.n);
    for j in 0..curve.n {
        let row = vec![
            j.to_string(),
            fmt_f64(curve.s[j]),
            fmt_f64(curve.x[j][0]),
            fmt_f64(curve.x[j][1]),
            fmt_f64(curve.t[j][0]),
            fmt_f64(curve.t[j][1]),
            fmt_f64(curve.normal[j][0]),
            fmt_f64(curve.normal[j][1]),
            fmt_f64(curve.kappa[j]),
            fmt_f64(curve.speed[j]),
        ];
        t.rows.push(row);
    }
    t
}

pub fn encode_matrix(m: &CMat) -> Vec<u8> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut out = Vec::with_capacity(16 + 16 * r * c);
    out.extend_from_slice(&(r as u64).to_le_bytes());
    out.extend_from_slice(&(c as u64).to_le_bytes());
    for i in 0..r {
        for j in 0..c {
            let z = m[(i, j)];
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn decode_matrix(bytes: &[u8]) -> Result<CMat> {
    if bytes.len() < 16 {
        return Err(Error::Config("matrix dump shorter than its header".into()));
    }
    let word = |k: usize| u64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    let (r, c) = (word(0) as usize, word(1) as usize);
    let expected = r
        .checked_mul(c)
        .and_then(|rc| rc.checked_mul(16))
        .and_then(|b| b.checked_add(16))
        .ok_or_else(|| Error::Config("matrix dump dimensions overflow".into()))?;
    if bytes.len() != expected {
        return Err(Error::Config(format!(
            "matrix dump has {} bytes, expected {expected} for {r}x{c}",
            bytes.len()
        )));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[16 + 8 * k..24 + 8 * k].try_into().expect("8 bytes"));
    Ok(CMat::from_fn(r, c, |i, j| {
        let k = 2 * (i * c + j);
        c64::new(f(k), f(k + 1))
    }))
}

pub fn write_matrix_dump(path: &Path, m: &CMat) -> Result<()> {
    write_atomic(path, &encode_matrix(m))
}

pub fn read_matrix_dump(path: &Path) -> Result<CMat> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_matrix(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.meta("k", 3);
        t.push(vec!["1".into(), fmt_f64(0.1)]).unwrap();
        let back = CsvTable::parse(&t.render()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("b").unwrap()[0].parse::<f64>().unwrap(), 0.1);
    }
}
