//! Quantile summaries and the percentile bootstrap over point data.

use rand::Rng;
use rayon::prelude::*;

use crate::binning::{BinningSpec, PointCloud};
use crate::error::{Error, Result};
use crate::metrics::{analyze, ShapeMetrics};
use crate::sim::{derive_seed, seeded_rng};

/// Mean plus the 2.5 %, 50 % and 97.5 % quantiles of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSummary {
    pub mean: f64,
    pub q025: f64,
    pub median: f64,
    pub q975: f64,
    pub count: usize,
}

/// Minimum, quartiles and maximum, as drawn by a box plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quantile of already sorted data by linear interpolation between order
/// statistics (`h = (len - 1) p`).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty data");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

fn sorted_finite(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite value {v}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

pub fn summarize(values: &[f64]) -> Result<QuantileSummary> {
    let sorted = sorted_finite(values)?;
    // shifting by the median keeps the mean of constant data exact
    let median = quantile_sorted(&sorted, 0.5);
    let shift = values.iter().map(|v| v - median).sum::<f64>() / values.len() as f64;
    Ok(QuantileSummary {
        mean: median + shift,
        q025: quantile_sorted(&sorted, 0.025),
        median,
        q975: quantile_sorted(&sorted, 0.975),
        count: values.len(),
    })
}

pub fn five_number(values: &[f64]) -> Result<FiveNumber> {
    let sorted = sorted_finite(values)?;
    Ok(FiveNumber {
        min: sorted[0],
        q1: quantile_sorted(&sorted, 0.25),
        median: quantile_sorted(&sorted, 0.5),
        q3: quantile_sorted(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Bootstrap distribution of both metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub sp: QuantileSummary,
    pub sphericity: QuantileSummary,
    /// Metrics of every replicate, in replicate order.
    pub replicates: Vec<ShapeMetrics>,
}

impl BootstrapResult {
    pub fn sp_values(&self) -> Vec<f64> {
        self.replicates.iter().map(|m| m.sp).collect()
    }

    pub fn sphericity_values(&self) -> Vec<f64> {
        self.replicates.iter().map(|m| m.sphericity).collect()
    }
}

/// Row indices of one resample with replacement.
pub fn resample_indices<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<usize> {
    (0..m).map(|_| rng.random_range(0..m)).collect()
}

/// Resamples the rows of `points` `replicates` times and measures each
/// resample. Replicate `i` draws from its own stream seeded by
/// `derive_seed(seed, [i])`, so results do not depend on thread count.
/// Degenerate replicates are kept with their flags set, and a resample whose
/// values are constant along an axis is binned over `[v - 0.5, v + 0.5]`
/// there rather than rejected.
pub fn bootstrap_metric(
    points: &PointCloud,
    spec: &BinningSpec,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapResult> {
    if replicates == 0 {
        return Err(Error::InvalidInput("replicates must be at least 1".into()));
    }
    let m = points.nrows();
    let spec = spec.clone().widen_degenerate_axes();
    let spec = &spec;
    let metrics: Vec<ShapeMetrics> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded_rng(derive_seed(seed, &[i as u64]));
            let sample = points.select_rows(&resample_indices(&mut rng, m))?;
            analyze(&sample, spec)
        })
        .collect::<Result<_>>()?;

    let sp: Vec<f64> = metrics.iter().map(|x| x.sp).collect();
    let sph: Vec<f64> = metrics.iter().map(|x| x.sphericity).collect();
    Ok(BootstrapResult {
        sp: summarize(&sp)?,
        sphericity: summarize(&sph)?,
        replicates: metrics,
    })
}
