//! Grid export and import.
//!
//! CSV: RFC-4180-style, a header row then one row per grid point in
//! centered-index order (−j first, first index outermost). Real grids carry
//! a single `value` column; complex grids carry `re,im`. Values are printed
//! with 17 significant digits so a write/read round trip is lossless.
//!
//! JSON: a single object `{meta: {d, operation, params}, data: ...}` whose
//! data is nested arrays in the same centered order; complex entries are
//! `[re, im]` pairs.

use std::io::{self, Write};

use num_complex::Complex64;
use serde_json::{json, Value};

use pgauss::grid::{Dimension, GridFunction, Rank};
use pgauss::WignerGrid;

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write one CSV table: `columns` is the header, each row is (indices,
/// values).
pub fn write_csv<W: Write + ?Sized>(
    out: &mut W,
    columns: &[&str],
    rows: impl Iterator<Item = (Vec<i64>, Vec<f64>)>,
) -> io::Result<()> {
    writeln!(out, "{}", columns.join(","))?;
    for (indices, values) in rows {
        let mut fields: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
        fields.extend(values.iter().map(|v| format_value(*v)));
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn write_real_1d_csv<W: Write + ?Sized>(
    out: &mut W,
    dim: Dimension,
    values: &[f64],
) -> io::Result<()> {
    let rows = dim
        .centered_indices()
        .zip(values.iter())
        .map(|(n, v)| (vec![n], vec![*v]));
    write_csv(out, &["n", "value"], rows)
}

pub fn write_real_2d_csv<W: Write + ?Sized>(
    out: &mut W,
    dim: Dimension,
    values: &[f64],
) -> io::Result<()> {
    let mut rows = Vec::with_capacity(values.len());
    let mut it = values.iter();
    for n1 in dim.centered_indices() {
        for n2 in dim.centered_indices() {
            rows.push((vec![n1, n2], vec![*it.next().expect("grid size")]));
        }
    }
    write_csv(out, &["n1", "n2", "value"], rows.into_iter())
}

pub fn write_complex_1d_csv<W: Write + ?Sized>(out: &mut W, f: &GridFunction) -> io::Result<()> {
    let dim = f.dim();
    let rows = dim.centered_indices().map(|n| {
        let v = f.get1(n);
        (vec![n], vec![v.re, v.im])
    });
    write_csv(out, &["n", "re", "im"], rows)
}

pub fn write_complex_2d_csv<W: Write + ?Sized>(out: &mut W, f: &GridFunction) -> io::Result<()> {
    let dim = f.dim();
    let mut rows = Vec::new();
    for n1 in dim.centered_indices() {
        for n2 in dim.centered_indices() {
            let v = f.get2(n1, n2);
            rows.push((vec![n1, n2], vec![v.re, v.im]));
        }
    }
    write_csv(out, &["n1", "n2", "re", "im"], rows.into_iter())
}

pub fn write_wigner_1d_csv<W: Write + ?Sized>(out: &mut W, w: &WignerGrid) -> io::Result<()> {
    let dim = w.dim();
    let mut rows = Vec::new();
    for n in dim.centered_indices() {
        for k in dim.centered_indices() {
            rows.push((vec![n, k], vec![w.get1(n, k)]));
        }
    }
    write_csv(out, &["n", "k", "value"], rows.into_iter())
}

pub fn write_wigner_2d_csv<W: Write + ?Sized>(out: &mut W, w: &WignerGrid) -> io::Result<()> {
    let dim = w.dim();
    let mut rows = Vec::new();
    for n1 in dim.centered_indices() {
        for n2 in dim.centered_indices() {
            for k1 in dim.centered_indices() {
                for k2 in dim.centered_indices() {
                    rows.push((vec![n1, n2, k1, k2], vec![w.get2(n1, n2, k1, k2)]));
                }
            }
        }
    }
    write_csv(out, &["n1", "n2", "k1", "k2", "value"], rows.into_iter())
}

pub fn real_1d_json(dim: Dimension, values: &[f64]) -> Value {
    let _ = dim;
    json!(values)
}

pub fn real_2d_json(dim: Dimension, values: &[f64]) -> Value {
    let d = dim.size();
    let rows: Vec<Value> = values.chunks(d).map(|row| json!(row)).collect();
    json!(rows)
}

pub fn complex_1d_json(f: &GridFunction) -> Value {
    let dim = f.dim();
    let entries: Vec<Value> = dim
        .centered_indices()
        .map(|n| {
            let v = f.get1(n);
            json!([v.re, v.im])
        })
        .collect();
    json!(entries)
}

pub fn complex_2d_json(f: &GridFunction) -> Value {
    let dim = f.dim();
    let rows: Vec<Value> = dim
        .centered_indices()
        .map(|n1| {
            let row: Vec<Value> = dim
                .centered_indices()
                .map(|n2| {
                    let v = f.get2(n1, n2);
                    json!([v.re, v.im])
                })
                .collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

pub fn wigner_1d_json(w: &WignerGrid) -> Value {
    let dim = w.dim();
    let rows: Vec<Value> = dim
        .centered_indices()
        .map(|n| {
            let row: Vec<f64> = dim.centered_indices().map(|k| w.get1(n, k)).collect();
            json!(row)
        })
        .collect();
    json!(rows)
}

pub fn wigner_2d_json(w: &WignerGrid) -> Value {
    let dim = w.dim();
    let nested: Vec<Value> = dim
        .centered_indices()
        .map(|n1| {
            let level2: Vec<Value> = dim
                .centered_indices()
                .map(|n2| {
                    let level3: Vec<Value> = dim
                        .centered_indices()
                        .map(|k1| {
                            let row: Vec<f64> = dim
                                .centered_indices()
                                .map(|k2| w.get2(n1, n2, k1, k2))
                                .collect();
                            json!(row)
                        })
                        .collect();
                    json!(level3)
                })
                .collect();
            json!(level2)
        })
        .collect();
    json!(nested)
}

/// Wrap a data payload in the export envelope.
pub fn envelope(operation: &str, d: i64, params: Value, data: Value) -> Value {
    json!({
        "meta": { "operation": operation, "d": d, "params": params },
        "data": data,
    })
}

fn dimension_from_count(count: usize, rank: Rank) -> Result<Dimension, String> {
    let d = match rank {
        Rank::One => count as i64,
        Rank::Two => {
            let d = (count as f64).sqrt().round() as i64;
            if (d * d) as usize != count {
                return Err(format!(
                    "expected a full d x d grid, got {count} rows (not a perfect square)"
                ));
            }
            d
        }
    };
    Dimension::new(d).map_err(|e| e.to_string())
}

/// Parse a grid from CSV text. Accepts both real (`value`) and complex
/// (`re,im`) layouts; any parse problem is reported with its line number.
pub fn parse_grid_csv(text: &str, rank: Rank) -> Result<GridFunction, String> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| "empty input".to_string())?;
    let header = header.trim();
    let (index_cols, complex) = match (rank, header) {
        (Rank::One, "n,value") => (1, false),
        (Rank::One, "n,re,im") => (1, true),
        (Rank::Two, "n1,n2,value") => (2, false),
        (Rank::Two, "n1,n2,re,im") => (2, true),
        _ => {
            return Err(format!(
                "line 1: unrecognized header {header:?} for rank-{} input",
                match rank {
                    Rank::One => 1,
                    Rank::Two => 2,
                }
            ))
        }
    };
    let want_fields = index_cols + if complex { 2 } else { 1 };
    let mut entries: Vec<(Vec<i64>, Complex64)> = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != want_fields {
            return Err(format!(
                "line {lineno}: expected {want_fields} fields, got {}",
                fields.len()
            ));
        }
        let mut indices = Vec::with_capacity(index_cols);
        for f in &fields[..index_cols] {
            indices.push(
                f.trim()
                    .parse::<i64>()
                    .map_err(|e| format!("line {lineno}: bad index {f:?}: {e}"))?,
            );
        }
        let re = fields[index_cols]
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("line {lineno}: bad value {:?}: {e}", fields[index_cols]))?;
        let im = if complex {
            fields[index_cols + 1].trim().parse::<f64>().map_err(|e| {
                format!("line {lineno}: bad value {:?}: {e}", fields[index_cols + 1])
            })?
        } else {
            0.0
        };
        entries.push((indices, Complex64::new(re, im)));
    }
    let dim = dimension_from_count(entries.len(), rank)?;
    build_grid(dim, rank, entries)
}

fn build_grid(
    dim: Dimension,
    rank: Rank,
    entries: Vec<(Vec<i64>, Complex64)>,
) -> Result<GridFunction, String> {
    let mut seen = vec![false; entries.len()];
    let d = dim.size();
    match rank {
        Rank::One => {
            let mut g = GridFunction::zeros_1d(dim);
            for (idx, v) in entries {
                let n = idx[0];
                if n < -dim.j() || n > dim.j() {
                    return Err(format!(
                        "index {n} outside the centered range -{}..={}",
                        dim.j(),
                        dim.j()
                    ));
                }
                let off = (n + dim.j()) as usize;
                if seen[off] {
                    return Err(format!("duplicate index {n}"));
                }
                seen[off] = true;
                g.set1(n, v);
            }
            Ok(g)
        }
        Rank::Two => {
            let mut g = GridFunction::zeros_2d(dim);
            for (idx, v) in entries {
                let (n1, n2) = (idx[0], idx[1]);
                if n1.abs() > dim.j() || n2.abs() > dim.j() {
                    return Err(format!(
                        "index ({n1},{n2}) outside the centered range of d={}",
                        dim.d()
                    ));
                }
                let off = (n1 + dim.j()) as usize * d + (n2 + dim.j()) as usize;
                if seen[off] {
                    return Err(format!("duplicate index ({n1},{n2})"));
                }
                seen[off] = true;
                g.set2(n1, n2, v);
            }
            Ok(g)
        }
    }
}

fn json_complex(v: &Value, path: &str) -> Result<Complex64, String> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Some(pair) = v.as_array() {
        if pair.len() == 2 {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| format!("{path}: non-numeric real part"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| format!("{path}: non-numeric imaginary part"))?;
            return Ok(Complex64::new(re, im));
        }
    }
    Err(format!("{path}: expected a number or a [re, im] pair"))
}

/// Parse a grid from the JSON export envelope.
pub fn parse_grid_json(text: &str, rank: Rank) -> Result<GridFunction, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let d = value
        .pointer("/meta/d")
        .and_then(Value::as_i64)
        .ok_or_else(|| "missing meta.d".to_string())?;
    let dim = Dimension::new(d).map_err(|e| e.to_string())?;
    let data = value
        .get("data")
        .and_then(Value::as_array)
        .ok_or_else(|| "missing data array".to_string())?;
    if data.len() != dim.size() {
        return Err(format!(
            "data has {} entries, expected {}",
            data.len(),
            dim.size()
        ));
    }
    match rank {
        Rank::One => {
            let mut g = GridFunction::zeros_1d(dim);
            for (i, n) in dim.centered_indices().enumerate() {
                g.set1(n, json_complex(&data[i], &format!("data[{i}]"))?);
            }
            Ok(g)
        }
        Rank::Two => {
            let mut g = GridFunction::zeros_2d(dim);
            for (i, n1) in dim.centered_indices().enumerate() {
                let row = data[i]
                    .as_array()
                    .ok_or_else(|| format!("data[{i}]: expected an array"))?;
                if row.len() != dim.size() {
                    return Err(format!(
                        "data[{i}] has {} entries, expected {}",
                        row.len(),
                        dim.size()
                    ));
                }
                for (jj, n2) in dim.centered_indices().enumerate() {
                    g.set2(n1, n2, json_complex(&row[jj], &format!("data[{i}][{jj}]"))?);
                }
            }
            Ok(g)
        }
    }
}
