use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;

pub type Meta = Vec<(String, String)>;

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Opens `path` for writing; `None` or `-` is stdout.
pub fn open(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

/// `data.csv` -> `data-alpha0.5.csv`.
pub fn with_alpha_suffix(path: &Path, alpha: f64) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-alpha{alpha}.{}", ext.to_string_lossy()),
        None => format!("{stem}-alpha{alpha}"),
    };
    path.with_file_name(name)
}

/// Writes a `#key,value` preamble, a header row and numeric rows.
pub fn write_table<W: Write>(out: W, meta: &Meta, header: &[String], rows: &[Vec<f64>]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    for (k, v) in meta {
        w.write_record([format!("#{k}"), v.clone()])?;
    }
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|&x| num(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Appends one labelled numeric row to an existing CSV stream.
pub fn write_labelled_row<W: Write>(out: W, label: &str, values: &[f64]) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(std::iter::once(label.to_string()).chain(values.iter().map(|&x| num(x))))?;
    w.flush()?;
    Ok(())
}
