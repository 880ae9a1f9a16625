//! Species subsets of the Iris measurements and the bootstrap sweep over
//! them.

use std::fmt;
use std::str::FromStr;

use crate::binning::{check_cell_budget, BinningSpec, PointCloud, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::metrics::{analyze, ShapeMetrics};
use crate::sim::derive_seed;
use crate::stats::{bootstrap_metric, BootstrapResult};

pub const FEATURE_COLUMNS: [&str; 4] =
    ["sepal_length", "sepal_width", "petal_length", "petal_width"];
pub const SPECIES_COLUMN: &str = "species";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Species {
    Setosa,
    Versicolor,
    Virginica,
}

impl FromStr for Species {
    type Err = Error;

    /// Accepts `setosa` as well as the `Iris-setosa` spelling, any case.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("iris-").unwrap_or(&t);
        match t {
            "setosa" => Ok(Species::Setosa),
            "versicolor" => Ok(Species::Versicolor),
            "virginica" => Ok(Species::Virginica),
            _ => Err(Error::InvalidInput(format!(
                "unknown species '{s}' (expected setosa, versicolor or virginica)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrisSubset {
    Setosa,
    Versicolor,
    /// Versicolor and virginica.
    NotSetosa,
    All,
}

impl IrisSubset {
    pub const ALL: [IrisSubset; 4] = [
        IrisSubset::Setosa,
        IrisSubset::Versicolor,
        IrisSubset::NotSetosa,
        IrisSubset::All,
    ];

    pub fn label(self) -> &'static str {
        match self {
            IrisSubset::Setosa => "Setosa",
            IrisSubset::Versicolor => "Versicolor",
            IrisSubset::NotSetosa => "Not Setosa",
            IrisSubset::All => "All",
        }
    }

    pub fn contains(self, species: Species) -> bool {
        match self {
            IrisSubset::Setosa => species == Species::Setosa,
            IrisSubset::Versicolor => species == Species::Versicolor,
            IrisSubset::NotSetosa => species != Species::Setosa,
            IrisSubset::All => true,
        }
    }

    fn ordinal(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for IrisSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for IrisSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        match key.as_str() {
            "setosa" => Ok(IrisSubset::Setosa),
            "versicolor" => Ok(IrisSubset::Versicolor),
            "notsetosa" => Ok(IrisSubset::NotSetosa),
            "all" => Ok(IrisSubset::All),
            _ => Err(Error::InvalidInput(format!(
                "unknown subset '{s}' (expected setosa, versicolor, not-setosa or all)"
            ))),
        }
    }
}

/// Feature matrix with one species label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct IrisData {
    features: PointCloud,
    species: Vec<Species>,
}

impl IrisData {
    pub fn new(features: PointCloud, species: Vec<Species>) -> Result<Self> {
        if features.nrows() != species.len() {
            return Err(Error::InvalidInput(format!(
                "{} feature rows but {} species labels",
                features.nrows(),
                species.len()
            )));
        }
        Ok(IrisData { features, species })
    }

    pub fn features(&self) -> &PointCloud {
        &self.features
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn subset(&self, subset: IrisSubset) -> Result<PointCloud> {
        let rows: Vec<usize> = (0..self.species.len())
            .filter(|&i| subset.contains(self.species[i]))
            .collect();
        if rows.is_empty() {
            return Err(Error::InvalidInput(format!("subset {subset} has no rows")));
        }
        self.features.select_rows(&rows)
    }
}

/// Results for one `(subset, bins)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct IrisCell {
    pub subset: IrisSubset,
    pub bins: usize,
    pub seed: u64,
    /// Metrics of the whole subset without resampling.
    pub full_sample: ShapeMetrics,
    pub bootstrap: BootstrapResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrisExperiment {
    pub subsets: Vec<IrisSubset>,
    pub bins: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub cell_budget: u64,
}

impl IrisExperiment {
    pub fn new(subsets: Vec<IrisSubset>, bins: Vec<usize>, replicates: usize) -> Self {
        IrisExperiment {
            subsets,
            bins,
            replicates,
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

/// Bootstraps every `(subset, bins)` cell, ordered by subset then bins.
pub fn run_iris_experiment(data: &IrisData, cfg: &IrisExperiment) -> Result<Vec<IrisCell>> {
    let dims = data.features().ncols();
    for &b in &cfg.bins {
        check_cell_budget(b, dims, cfg.cell_budget)?;
    }
    let mut cells = Vec::with_capacity(cfg.subsets.len() * cfg.bins.len());
    for &subset in &cfg.subsets {
        let points = data.subset(subset)?;
        for &bins in &cfg.bins {
            let spec = BinningSpec::new(bins).with_cell_budget(cfg.cell_budget);
            let seed = derive_seed(cfg.seed, &[subset.ordinal(), bins as u64]);
            cells.push(IrisCell {
                subset,
                bins,
                seed,
                full_sample: analyze(&points, &spec)?,
                bootstrap: bootstrap_metric(&points, &spec, cfg.replicates, seed)?,
            });
        }
    }
    Ok(cells)
}
