//! CSV input parsing and the row types of every CSV the tool writes.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use hypershape::iris::{IrisData, IrisSubset, Species, FEATURE_COLUMNS, SPECIES_COLUMN};
use hypershape::stats::{FiveNumber, QuantileSummary};
use hypershape::{Error, PointCloud, ShapeMetrics};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// The Iris file shipped with the crate.
pub const BUNDLED_IRIS: &str = include_str!("../data/iris.csv");

/// A header plus string cells, as read from disk.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn from_reader<R: Read>(reader: R) -> CliResult<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if headers.iter().all(|h| h.is_empty()) {
            return Err(Error::EmptyInput.into());
        }
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| match e.kind() {
                csv::ErrorKind::UnequalLengths { len, .. } => CliError::Core(Error::Data {
                    row: i + 1,
                    column: String::new(),
                    message: format!("expected {} fields, found {len}", headers.len()),
                }),
                _ => CliError::Csv(e),
            })?;
            rows.push(rec.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput.into());
        }
        Ok(RawTable { headers, rows })
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let file = File::open(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file)
    }

    /// Index of a column given by name (case-insensitive) or 0-based index.
    pub fn column_index(&self, key: &str) -> CliResult<usize> {
        let key = key.trim();
        if let Some(i) = self
            .headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(key))
        {
            return Ok(i);
        }
        match key.parse::<usize>() {
            Ok(i) if i < self.headers.len() => Ok(i),
            _ => Err(CliError::Usage(format!(
                "no column '{key}' (available: {})",
                self.headers.join(", ")
            ))),
        }
    }

    /// Parses the given columns of the given rows as finite floats.
    pub fn numeric(&self, columns: &[usize], rows: &[usize]) -> CliResult<PointCloud> {
        let mut values = Vec::with_capacity(columns.len() * rows.len());
        for &r in rows {
            for &c in columns {
                let cell = &self.rows[r][c];
                let bad = |message: String| Error::Data {
                    row: r + 1,
                    column: self.headers[c].clone(),
                    message,
                };
                let v: f64 = cell
                    .parse()
                    .map_err(|_| bad(format!("'{cell}' is not a number")))?;
                if !v.is_finite() {
                    return Err(bad(format!("'{cell}' is not finite")).into());
                }
                values.push(v);
            }
        }
        let names = columns.iter().map(|&c| self.headers[c].clone()).collect();
        Ok(PointCloud::new(values, columns.len())?.with_column_names(names)?)
    }

    pub fn species(&self, column: usize) -> CliResult<Vec<Species>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row[column].parse::<Species>().map_err(|e| {
                    CliError::Core(Error::Data {
                        row: r + 1,
                        column: self.headers[column].clone(),
                        message: e.to_string(),
                    })
                })
            })
            .collect()
    }
}

/// Loads an Iris table, requiring the four feature columns and `species`.
pub fn load_iris(path: Option<&Path>) -> CliResult<IrisData> {
    let table = match path {
        Some(p) => RawTable::from_path(p)?,
        None => RawTable::from_reader(BUNDLED_IRIS.as_bytes())?,
    };
    let mut columns = Vec::new();
    for name in FEATURE_COLUMNS.iter().chain([&SPECIES_COLUMN]) {
        let i = table
            .headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "Iris file lacks column '{name}' (header: {})",
                    table.headers.join(",")
                ))
            })?;
        columns.push(i);
    }
    let all_rows: Vec<usize> = (0..table.rows.len()).collect();
    let features = table.numeric(&columns[..4], &all_rows)?;
    let species = table.species(columns[4])?;
    Ok(IrisData::new(features, species)?)
}

pub fn parse_subset(s: &str) -> CliResult<IrisSubset> {
    Ok(s.parse::<IrisSubset>()?)
}

/// Writes rows with a header; serialization is deterministic so a
/// read-then-write round trip reproduces the file byte for byte.
pub fn write_rows<T: Serialize, W: Write>(writer: W, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_rows_to<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let file = File::create(path).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(std::io::BufWriter::new(file), rows)
}

pub fn read_rows<T: DeserializeOwned, R: Read>(reader: R) -> CliResult<Vec<T>> {
    let mut r = csv::Reader::from_reader(reader);
    Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
}

pub fn read_rows_from<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let file = File::open(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    read_rows(file)
}

/// One set of shape metrics, as written by `metrics` and the raw ball output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub n: usize,
    pub bins: usize,
    pub volume: usize,
    pub radius: u32,
    pub surface: usize,
    pub sp: f64,
    pub sphericity: f64,
    pub degenerate_radius: bool,
    pub erosion_empty: bool,
}

impl MetricsRow {
    pub fn new(bins: usize, m: &ShapeMetrics) -> Self {
        MetricsRow {
            n: m.n,
            bins,
            volume: m.volume,
            radius: m.radius,
            surface: m.surface,
            sp: m.sp,
            sphericity: m.sphericity,
            degenerate_radius: m.degenerate_radius,
            erosion_empty: m.erosion_empty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRawRow {
    pub dim: usize,
    pub bins: usize,
    pub sample: usize,
    pub seed: u64,
    pub volume: usize,
    pub radius: u32,
    pub surface: usize,
    pub sp: f64,
    pub sphericity: f64,
    pub degenerate_radius: bool,
    pub erosion_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSummaryRow {
    pub dim: usize,
    pub bins: usize,
    pub count: usize,
    pub sp_mean: f64,
    pub sp_q025: f64,
    pub sp_median: f64,
    pub sp_q975: f64,
    pub sphericity_mean: f64,
    pub sphericity_q025: f64,
    pub sphericity_median: f64,
    pub sphericity_q975: f64,
}

impl BallSummaryRow {
    pub fn new(dim: usize, bins: usize, sp: &QuantileSummary, sph: &QuantileSummary) -> Self {
        BallSummaryRow {
            dim,
            bins,
            count: sp.count,
            sp_mean: sp.mean,
            sp_q025: sp.q025,
            sp_median: sp.median,
            sp_q975: sp.q975,
            sphericity_mean: sph.mean,
            sphericity_q025: sph.q025,
            sphericity_median: sph.median,
            sphericity_q975: sph.q975,
        }
    }
}

/// One `(subset, bins)` row of the Iris bootstrap table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrisSummaryRow {
    pub subset: String,
    pub bins: usize,
    pub replicates: usize,
    pub seed: u64,
    pub sp_q025: f64,
    pub sp_median: f64,
    pub sp_q975: f64,
    pub sp_mean: f64,
    pub sphericity_q025: f64,
    pub sphericity_median: f64,
    pub sphericity_q975: f64,
    pub sphericity_mean: f64,
    pub full_sp: f64,
    pub full_sphericity: f64,
    pub full_radius: u32,
    pub full_erosion_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrisReplicateRow {
    pub subset: String,
    pub bins: usize,
    pub replicate: usize,
    pub volume: usize,
    pub radius: u32,
    pub surface: usize,
    pub sp: f64,
    pub sphericity: f64,
}

/// Five-number summary of one metric in one `(subset, bins)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRow {
    pub subset: String,
    pub bins: usize,
    pub metric: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl BoxRow {
    pub fn new(subset: &str, bins: usize, metric: &str, f: &FiveNumber) -> Self {
        BoxRow {
            subset: subset.to_string(),
            bins,
            metric: metric.to_string(),
            min: f.min,
            q1: f.q1,
            median: f.median,
            q3: f.q3,
            max: f.max,
        }
    }
}
