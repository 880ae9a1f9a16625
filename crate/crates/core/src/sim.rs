//! Uniform points in the unit n-ball and the simulated-ball sweep.
//!
//! Points are drawn with the dropped-coordinates construction: an
//! `(n + 2)`-dimensional standard normal vector is normalized onto the unit
//! sphere and its first `n` coordinates are kept. The result is uniform in the
//! closed unit n-ball with no rejection step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::binning::{check_cell_budget, BinningSpec, PointCloud, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::metrics::{analyze, ShapeMetrics};

/// Recorded in run manifests so results can be regenerated.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64); \
     normals: rand_distr 0.5 StandardNormal (ziggurat); sub-seeds: SplitMix64 mixing";

/// Generator used for every seeded stream in the crate.
pub type SeededRng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for one cell of an experiment.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Draws uniform points in the closed unit `n`-ball.
#[derive(Debug, Clone, Copy)]
pub struct UnitBallSampler {
    n: usize,
}

impl UnitBallSampler {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput(
                "ball dimension must be positive".into(),
            ));
        }
        Ok(UnitBallSampler { n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Writes one point into `out[..n]`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        loop {
            let mut norm_sq = 0.0;
            for slot in out[..self.n].iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *slot = z;
                norm_sq += z * z;
            }
            for _ in 0..2 {
                let z: f64 = rng.sample(StandardNormal);
                norm_sq += z * z;
            }
            // all-zero draw has probability zero but would divide by zero
            if norm_sq > 0.0 {
                let scale = norm_sq.sqrt().recip();
                out[..self.n].iter_mut().for_each(|x| *x *= scale);
                return;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallSampleConfig {
    pub n: usize,
    pub points: usize,
    pub seed: u64,
}

/// `cfg.points` uniform samples from the unit `cfg.n`-ball.
pub fn sample_ball(cfg: &BallSampleConfig) -> Result<PointCloud> {
    if cfg.n < 2 {
        return Err(Error::InvalidInput(format!(
            "ball dimension must be at least 2, got {}",
            cfg.n
        )));
    }
    if cfg.points == 0 {
        return Err(Error::EmptyInput);
    }
    let sampler = UnitBallSampler::new(cfg.n)?;
    let mut rng = seeded_rng(cfg.seed);
    let mut values = vec![0.0; cfg.points * cfg.n];
    for row in values.chunks_exact_mut(cfg.n) {
        sampler.sample_into(&mut rng, row);
    }
    PointCloud::new(values, cfg.n)
}

/// Parameters of the simulated-ball sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BallExperiment {
    pub dims: Vec<usize>,
    pub bins: Vec<usize>,
    pub samples_per_cell: usize,
    pub points: usize,
    pub seed: u64,
    pub cell_budget: u64,
}

impl BallExperiment {
    pub fn new(dims: Vec<usize>, bins: Vec<usize>, samples_per_cell: usize, points: usize) -> Self {
        BallExperiment {
            dims,
            bins,
            samples_per_cell,
            points,
            seed: 0,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_cell_budget(mut self, budget: u64) -> Self {
        self.cell_budget = budget;
        self
    }
}

/// One simulated ball measured at one bin count.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRecord {
    pub dim: usize,
    pub bins: usize,
    pub sample: usize,
    pub seed: u64,
    pub metrics: ShapeMetrics,
}

/// Runs every `(dim, bins, sample)` cell. Rows come back ordered by dim,
/// then bins, then sample index, independent of thread scheduling.
pub fn run_ball_experiment(cfg: &BallExperiment) -> Result<Vec<BallRecord>> {
    if cfg.points == 0 {
        return Err(Error::InvalidInput("points must be positive".into()));
    }
    if let Some(&b) = cfg.bins.iter().find(|&&b| b < 2) {
        return Err(Error::InvalidInput(format!(
            "bins must be at least 2, got {b}"
        )));
    }
    if let Some(&d) = cfg.dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidInput(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    for &d in &cfg.dims {
        for &b in &cfg.bins {
            check_cell_budget(b, d, cfg.cell_budget)?;
        }
    }

    let cells: Vec<(usize, usize, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&d| {
            cfg.bins
                .iter()
                .flat_map(move |&b| (0..cfg.samples_per_cell).map(move |s| (d, b, s)))
        })
        .collect();

    cells
        .into_par_iter()
        .map(|(dim, bins, sample)| {
            let seed = derive_seed(cfg.seed, &[dim as u64, bins as u64, sample as u64]);
            let cloud = sample_ball(&BallSampleConfig {
                n: dim,
                points: cfg.points,
                seed,
            })?;
            let spec = BinningSpec::new(bins).with_cell_budget(cfg.cell_budget);
            let metrics = analyze(&cloud, &spec)?;
            Ok(BallRecord {
                dim,
                bins,
                sample,
                seed,
                metrics,
            })
        })
        .collect()
}
