use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{CholeskyFactor, TimeGrid};
use crate::{Error, Real, Result};

/// Name of the Gaussian generator recorded in every ensemble.
pub const GENERATOR_ID: &str = "chacha8-stream-per-path/standard-normal-ziggurat";

/// What an ensemble or matrix describes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Source {
    pub process: String,
    pub alpha: Option<f64>,
}

impl Source {
    pub fn new(process: impl Into<String>, alpha: Option<f64>) -> Self {
        Source {
            process: process.into(),
            alpha,
        }
    }
}

/// Independent standard normal stream for one path: ChaCha8 seeded from
/// `seed`, with the path index selecting the stream. Paths can therefore be
/// generated in any order or in parallel with identical results.
pub fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

pub(crate) fn standard_normal<T: Real>(rng: &mut ChaCha8Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Sample paths on a common grid, stored row-major (`n_paths × grid.len()`).
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble<T> {
    grid: TimeGrid<T>,
    values: Vec<T>,
    n_paths: usize,
    pub seed: u64,
    pub generator_id: String,
    pub source: Source,
}

impl<T: Real> PathEnsemble<T> {
    pub fn from_rows(grid: TimeGrid<T>, rows: Vec<Vec<T>>, seed: u64, source: Source) -> Result<Self> {
        let n = grid.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::param(format!("path of length {} on a grid of {n} points", r.len())));
        }
        Ok(PathEnsemble {
            n_paths: rows.len(),
            values: rows.into_iter().flatten().collect(),
            grid,
            seed,
            generator_id: GENERATOR_ID.to_string(),
            source,
        })
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn n_times(&self) -> usize {
        self.grid.len()
    }

    pub fn path(&self, k: usize) -> &[T] {
        let n = self.n_times();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn paths(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.n_times().max(1)).take(self.n_paths)
    }

    /// Values of every path at grid index `i`.
    pub fn column(&self, i: usize) -> Result<Vec<T>> {
        if i >= self.n_times() {
            return Err(Error::Index { index: i, len: self.n_times() });
        }
        Ok(self.paths().map(|p| p[i]).collect())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Writes the ensemble as CSV: a `#key,value` preamble, a `t` row with
    /// the grid, then one row per path. Values carry 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.write_csv_with(out, &[])
    }

    /// As [`PathEnsemble::write_csv`], with extra preamble entries.
    pub fn write_csv_with<W: Write>(&self, out: W, extra: &[(String, String)]) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        let io = |e: csv::Error| Error::Format(e.to_string());
        let step = self.grid.step().map_or("nonuniform".to_string(), |h| fmt(h.to_f64_lossy()));
        let alpha = self.source.alpha.map_or("none".to_string(), fmt);
        let mut meta = vec![
            ("seed".to_string(), self.seed.to_string()),
            ("generator_id".to_string(), self.generator_id.clone()),
            ("alpha".to_string(), alpha),
            ("process".to_string(), self.source.process.clone()),
            ("grid_step".to_string(), step),
            ("n_paths".to_string(), self.n_paths.to_string()),
        ];
        meta.extend_from_slice(extra);
        for (k, v) in &meta {
            w.write_record([format!("#{k}"), v.clone()]).map_err(io)?;
        }
        let header = std::iter::once("t".to_string()).chain(self.grid.times().iter().map(|t| fmt(t.to_f64_lossy())));
        w.write_record(header).map_err(io)?;
        for (k, p) in self.paths().enumerate() {
            let row = std::iter::once(k.to_string()).chain(p.iter().map(|v| fmt(v.to_f64_lossy())));
            w.write_record(row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))
    }

    /// Reads an ensemble written by [`PathEnsemble::write_csv`]. Rows whose
    /// label is neither `t` nor a path index are skipped.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
        let mut seed = None;
        let mut generator_id = None;
        let mut source = Source::default();
        let mut times: Option<Vec<T>> = None;
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            let key = rec.get(0).unwrap_or("");
            let val = rec.get(1).unwrap_or("");
            if let Some(k) = key.strip_prefix('#') {
                match k {
                    "seed" => seed = Some(val.parse().map_err(|_| Error::Format(format!("bad seed {val:?}")))?),
                    "generator_id" => generator_id = Some(val.to_string()),
                    "process" => source.process = val.to_string(),
                    "alpha" if val != "none" => source.alpha = Some(parse(val)?),
                    _ => {}
                }
                continue;
            }
            // rows labelled other than `t` or a path index are summaries
            if key != "t" && key.parse::<usize>().is_err() {
                continue;
            }
            let nums = rec.iter().skip(1).map(|v| parse(v).map(T::lit)).collect::<Result<Vec<T>>>()?;
            if key == "t" {
                times = Some(nums);
            } else {
                rows.push(nums);
            }
        }
        let times = times.ok_or_else(|| Error::Format("missing time row".into()))?;
        let grid = if times.first() == Some(&T::zero()) {
            TimeGrid::with_origin(times)?
        } else {
            TimeGrid::new(times)?
        };
        let mut e = Self::from_rows(grid, rows, seed.ok_or_else(|| Error::Format("missing seed".into()))?, source)?;
        e.generator_id = generator_id.ok_or_else(|| Error::Format("missing generator_id".into()))?;
        Ok(e)
    }
}

/// 17 significant digits.
pub(crate) fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Format(format!("not a number: {s:?}")))
}

/// `n_paths` draws of `L z` with `z` standard normal from the per-path
/// streams of `seed`.
pub fn sample_paths<T: Real>(l: &CholeskyFactor<T>, n_paths: usize, seed: u64) -> PathEnsemble<T> {
    let n = l.n();
    let rows: Vec<Vec<T>> = (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let mut rng = path_rng(seed, k);
            let z: Vec<T> = (0..n).map(|_| standard_normal(&mut rng)).collect();
            l.mul_vec(&z)
        })
        .collect();
    PathEnsemble::from_rows(l.grid().clone(), rows, seed, l.source.clone()).expect("rows match the factor dimension")
}
