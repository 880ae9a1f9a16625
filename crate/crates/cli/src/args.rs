use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

/// Inclusive integer range written `A..B` (or a single value `A`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.end).collect()
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{t}' is not a non-negative integer"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(IntRange { start, end })
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// One explicit axis range written `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange(pub f64, pub f64);

impl FromStr for AxisRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("range '{s}' must look like lo:hi"))?;
        let lo: f64 = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad lower bound in '{s}'"))?;
        let hi: f64 = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad upper bound in '{s}'"))?;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(format!("range '{s}' must satisfy lo < hi"));
        }
        Ok(AxisRange(lo, hi))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hypershape",
    version,
    about = "Shape proportion and sphericity in n dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form SP and sphericity of regular shapes
    Analytic(AnalyticArgs),
    /// Metrics of one CSV point set
    Metrics(MetricsArgs),
    /// Simulated n-ball sweep over dimensions and bin counts
    SimulateBall(SimulateArgs),
    /// Bootstrap study over Iris species subsets
    Iris(IrisArgs),
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// ball, cube, simplex, orthoplex, or platonic:<tetrahedron|cube|octahedron|dodecahedron|icosahedron>
    #[arg(long)]
    pub shape: String,

    /// Dimension or inclusive range A..B
    #[arg(long, default_value = "3")]
    pub dims: IntRange,

    /// Which closed form fills the `sp` column (both are always printed)
    #[arg(long, default_value = "paper")]
    pub variant: String,

    /// Also estimate SP by Monte Carlo with this many samples
    #[arg(long)]
    pub oracle: Option<u64>,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// CSV file with a header row
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long)]
    pub bins: usize,

    /// Comma-separated column names or 0-based indices (default: every
    /// column except the label column)
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,

    /// Keep only rows of this species subset (setosa, versicolor, not-setosa, all)
    #[arg(long)]
    pub subset: Option<String>,

    /// Column holding species labels
    #[arg(long, default_value = "species")]
    pub label_column: String,

    /// Explicit per-axis ranges, e.g. --ranges=-1:1,-1:1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ranges: Option<Vec<AxisRange>>,

    /// Also write metrics.csv and manifest.json here
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value = "2..5")]
    pub dims: IntRange,

    #[arg(long, default_value = "4..14")]
    pub bins: IntRange,

    /// Simulated balls per (dimension, bins) cell
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    /// Points per simulated ball
    #[arg(long, default_value_t = 100_000)]
    pub points: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IrisArgs {
    /// Iris CSV (default: the bundled copy)
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Subsets to run; repeat or comma-separate (default: all four)
    #[arg(long = "subset", value_delimiter = ',')]
    pub subsets: Vec<String>,

    #[arg(long, default_value = "4..14")]
    pub bins: IntRange,

    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long)]
    pub out: PathBuf,
}
