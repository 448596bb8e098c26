use rayon::prelude::*;

use super::{Source, TimeGrid};
use crate::{Error, Real, Result};

/// Diagonal jitter levels tried, as fractions of the largest diagonal entry.
pub const JITTER_LEVELS: [f64; 3] = [1e-12, 1e-10, 1e-8];

/// Symmetric covariance matrix on a time grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix<T> {
    n: usize,
    entries: Vec<T>,
    grid: TimeGrid<T>,
    pub source: Source,
}

impl<T: Real> CovMatrix<T> {
    /// Wraps a row-major matrix, checking shape and symmetry.
    pub fn from_entries(grid: TimeGrid<T>, entries: Vec<T>, source: Source) -> Result<Self> {
        let n = grid.len();
        if entries.len() != n * n {
            return Err(Error::param(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        for i in 0..n {
            if entries[i * n + i] < T::zero() {
                return Err(Error::Numeric(format!("negative variance at ({i}, {i})")));
            }
            for j in 0..i {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                if (a - b).abs() > T::lit(1e-12) * a.abs().max(b.abs()).max(T::one()) {
                    return Err(Error::Numeric(format!("matrix not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(CovMatrix { n, entries, grid, source })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn max_diag(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).fold(T::zero(), T::max)
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }
}

/// Evaluates `cov_fn(t_i, t_j)` for `i <= j` in parallel and mirrors it.
pub fn build_cov_matrix<T, F>(cov_fn: F, grid: &TimeGrid<T>) -> Result<CovMatrix<T>>
where
    T: Real,
    F: Fn(T, T) -> Result<T> + Sync,
{
    let n = grid.len();
    let times = grid.times();
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let v = cov_fn(times[i], times[j])?;
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Numeric(format!(
                            "covariance entry ({i}, {j}) at ({}, {}) is {v}",
                            times[i], times[j]
                        )))
                    }
                })
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let mut entries = vec![T::zero(); n * n];
    for (i, row) in rows.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            let j = i + k;
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(CovMatrix {
        n,
        entries,
        grid: grid.clone(),
        source: Source::default(),
    })
}

/// Lower-triangular factor `L` with `L Lᵀ = C + jitter · max(diag) · I`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor<T> {
    n: usize,
    lower: Vec<T>,
    /// Relative jitter that was needed, `0` when the plain factorization worked.
    pub jitter: f64,
    grid: TimeGrid<T>,
    pub source: Source,
}

impl<T: Real> CholeskyFactor<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.lower[i * self.n + j]
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    /// `L z`.
    pub fn mul_vec(&self, z: &[T]) -> Vec<T> {
        assert_eq!(z.len(), self.n, "vector length must match the factor");
        (0..self.n)
            .map(|i| {
                let row = &self.lower[i * self.n..i * self.n + i + 1];
                row.iter().zip(z).map(|(&l, &x)| l * x).sum()
            })
            .collect()
    }

    /// `L Lᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<T> {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: T = (0..=j).map(|k| self.get(i, k) * self.get(j, k)).sum();
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }
}

/// Cholesky factorization, retrying with the jitter levels in
/// [`JITTER_LEVELS`] if the plain factorization breaks down.
pub fn cholesky_factor<T: Real>(c: &CovMatrix<T>) -> Result<CholeskyFactor<T>> {
    let scale = c.max_diag();
    let levels = std::iter::once(0.0).chain(JITTER_LEVELS);
    for eps in levels {
        if let Some(lower) = try_cholesky(c, T::lit(eps) * scale) {
            return Ok(CholeskyFactor {
                n: c.n,
                lower,
                jitter: eps,
                grid: c.grid.clone(),
                source: c.source.clone(),
            });
        }
    }
    Err(Error::NotPositiveDefinite {
        max_jitter: JITTER_LEVELS[JITTER_LEVELS.len() - 1],
    })
}

fn try_cholesky<T: Real>(c: &CovMatrix<T>, jitter: T) -> Option<Vec<T>> {
    let n = c.n;
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut d = c.get(j, j) + jitter;
        for k in 0..j {
            d = d - l[j * n + k] * l[j * n + k];
        }
        if !(d > T::zero()) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = c.get(i, j);
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Some(l)
}
