//! Point data to binary image: an equal-width n-dimensional histogram
//! followed by a `> 0` threshold.
//!
//! Bin edges follow the usual histogram convention: `k + 1` evenly spaced
//! edges per axis, every bin closed on the left and open on the right except
//! the last, which also includes its right edge. Points outside an explicit
//! range are ignored.

use crate::error::{Error, Result};
use crate::grid::{GridImage, MAX_EXTENT};

/// Default limit on `bins^n`.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 26;

/// Environment variable that overrides [`DEFAULT_CELL_BUDGET`].
pub const CELL_BUDGET_ENV: &str = "HYPERSHAPE_CELL_BUDGET";

/// Reads the cell budget from [`CELL_BUDGET_ENV`], falling back to the default.
pub fn cell_budget_from_env() -> Result<u64> {
    match std::env::var(CELL_BUDGET_ENV) {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
            Error::InvalidInput(format!(
                "{CELL_BUDGET_ENV}={raw:?} is not a positive integer"
            ))
        }),
        Err(_) => Ok(DEFAULT_CELL_BUDGET),
    }
}

/// Checks that a `bins^dims` grid fits in `budget` cells.
pub fn check_cell_budget(bins: usize, dims: usize, budget: u64) -> Result<()> {
    let cells = (bins as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    if cells > budget as u128 {
        Err(Error::DimensionTooLarge { cells, budget })
    } else {
        Ok(())
    }
}

/// `m x n` matrix of finite observations, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    values: Vec<f64>,
    ncols: usize,
    column_names: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(values: Vec<f64>, ncols: usize) -> Result<Self> {
        if ncols < 2 {
            return Err(Error::InvalidInput(format!(
                "point data needs at least 2 columns, got {ncols}"
            )));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !values.len().is_multiple_of(ncols) {
            return Err(Error::InvalidInput(format!(
                "{} values do not fill rows of {ncols}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data {
                row: pos / ncols + 1,
                column: (pos % ncols).to_string(),
                message: format!("non-finite value {}", values[pos]),
            });
        }
        Ok(PointCloud {
            values,
            ncols,
            column_names: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let ncols = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or(Error::EmptyInput)?;
        let mut values = Vec::with_capacity(rows.len() * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} values, expected {ncols}",
                    i + 1,
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Self::new(values, ncols)
    }

    pub fn with_column_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.ncols {
            return Err(Error::InvalidInput(format!(
                "{} column names for {} columns",
                names.len(),
                self.ncols
            )));
        }
        self.column_names = Some(names);
        Ok(self)
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    pub fn nrows(&self) -> usize {
        self.values.len() / self.ncols
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.ncols)
    }

    /// New cloud made of the given rows (repeats allowed).
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        let m = self.nrows();
        let mut values = Vec::with_capacity(indices.len() * self.ncols);
        for &i in indices {
            if i >= m {
                return Err(Error::InvalidInput(format!("row index {i} out of {m}")));
            }
            values.extend_from_slice(self.row(i));
        }
        Ok(PointCloud {
            values,
            ncols: self.ncols,
            column_names: self.column_names.clone(),
        })
    }

    /// Reorders columns so that output column `k` is input column `perm[k]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.ncols).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!(
                "{perm:?} is not a permutation of 0..{}",
                self.ncols
            )));
        }
        let values = self
            .rows()
            .flat_map(|r| perm.iter().map(move |&p| r[p]))
            .collect();
        Ok(PointCloud {
            values,
            ncols: self.ncols,
            column_names: self
                .column_names
                .as_ref()
                .map(|names| perm.iter().map(|&p| names[p].clone()).collect()),
        })
    }

    /// Per-column `(min, max)`.
    pub fn column_ranges(&self) -> Vec<(f64, f64)> {
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); self.ncols];
        for r in self.rows() {
            for (range, &v) in ranges.iter_mut().zip(r) {
                range.0 = range.0.min(v);
                range.1 = range.1.max(v);
            }
        }
        ranges
    }
}

/// Bin count and optional explicit per-axis ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct BinningSpec {
    pub bins: usize,
    /// Per-axis `[lo, hi]`; `None` uses the data's min and max.
    pub ranges: Option<Vec<(f64, f64)>>,
    pub cell_budget: u64,
    /// Replace a zero-width axis `[v, v]` by `[v - 0.5, v + 0.5]` instead of
    /// failing with [`Error::DegenerateAxis`].
    pub widen_degenerate: bool,
}

impl BinningSpec {
    pub fn new(bins: usize) -> Self {
        BinningSpec {
            bins,
            ranges: None,
            cell_budget: DEFAULT_CELL_BUDGET,
            widen_degenerate: false,
        }
    }

    pub fn with_ranges(mut self, ranges: Vec<(f64, f64)>) -> Self {
        self.ranges = Some(ranges);
        self
    }

    pub fn with_cell_budget(mut self, budget: u64) -> Self {
        self.cell_budget = budget;
        self
    }

    pub fn widen_degenerate_axes(mut self) -> Self {
        self.widen_degenerate = true;
        self
    }

    fn validate(&self, dims: usize) -> Result<()> {
        if self.bins < 2 || self.bins > MAX_EXTENT {
            return Err(Error::InvalidInput(format!(
                "bins must be in 2..={MAX_EXTENT}, got {}",
                self.bins
            )));
        }
        check_cell_budget(self.bins, dims, self.cell_budget)
    }

    fn resolve_ranges(&self, points: &PointCloud) -> Result<Vec<(f64, f64)>> {
        let ranges = match &self.ranges {
            Some(r) => {
                if r.len() != points.ncols() {
                    return Err(Error::InvalidInput(format!(
                        "{} ranges for {} dimensions",
                        r.len(),
                        points.ncols()
                    )));
                }
                r.clone()
            }
            None => points.column_ranges(),
        };
        ranges
            .into_iter()
            .enumerate()
            .map(|(axis, (lo, hi))| {
                if !lo.is_finite() || !hi.is_finite() || lo > hi {
                    return Err(Error::InvalidInput(format!(
                        "axis {axis} range [{lo}, {hi}] is not an increasing finite interval"
                    )));
                }
                match (lo == hi, self.widen_degenerate) {
                    (false, _) => Ok((lo, hi)),
                    (true, true) => Ok((lo - 0.5, hi + 0.5)),
                    (true, false) => Err(Error::DegenerateAxis { axis, value: lo }),
                }
            })
            .collect()
    }
}

/// Evenly spaced bin edges, computed as `lo + j * step` with the last edge
/// pinned to `hi`.
pub fn bin_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let step = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|j| j as f64 * step + lo).collect();
    edges[bins] = hi;
    edges
}

/// Bin of `x` under the left-closed convention, or `None` when out of range.
fn bin_of(edges: &[f64], x: f64) -> Option<usize> {
    let bins = edges.len() - 1;
    let mut count = edges.partition_point(|&e| e <= x);
    if x == edges[bins] {
        count -= 1;
    }
    (1..=bins).contains(&count).then(|| count - 1)
}

/// Histogram the points on a `bins^n` grid and mark every non-empty bin.
pub fn bin_points(points: &PointCloud, spec: &BinningSpec) -> Result<GridImage> {
    let n = points.ncols();
    spec.validate(n)?;
    let ranges = spec.resolve_ranges(points)?;
    let edges: Vec<Vec<f64>> = ranges
        .iter()
        .map(|&(lo, hi)| bin_edges(lo, hi, spec.bins))
        .collect();

    let mut image = GridImage::zeros(vec![spec.bins; n])?;
    'rows: for row in points.rows() {
        let mut flat = 0;
        for (x, e) in row.iter().zip(&edges) {
            match bin_of(e, *x) {
                Some(j) => flat = flat * spec.bins + j,
                None => continue 'rows,
            }
        }
        image.set_flat(flat);
    }
    Ok(image)
}
