use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use hypershape::analytic::{mc_sp_oracle, sp_closed_form, sphericity_closed_form};
use hypershape::binning::cell_budget_from_env;
use hypershape::iris::{run_iris_experiment, IrisExperiment, IrisSubset};
use hypershape::sim::{derive_seed, run_ball_experiment, BallExperiment};
use hypershape::stats::{five_number, summarize};
use hypershape::{analyze, AnalyticShape, BinningSpec, SpVariant};
use serde::Serialize;
use serde_json::json;

use crate::args::{AnalyticArgs, IrisArgs, MetricsArgs, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;
use crate::svg::{self, BoxStats, Group, Interval, Series, Stroke, PALETTE};
use crate::table::{
    load_iris, parse_subset, read_rows_from, write_rows, write_rows_to, BallRawRow, BallSummaryRow,
    BoxRow, IrisReplicateRow, IrisSummaryRow, MetricsRow, RawTable,
};

/// File names written by `simulate-ball`.
pub mod ball_files {
    pub const RAW: &str = "ball_raw.csv";
    pub const SUMMARY: &str = "ball_summary.csv";
    pub const SPHERICITY_SVG: &str = "ball_sphericity.svg";
    pub const SP_SVG: &str = "ball_sp.svg";
    pub const LOG_SP_SVG: &str = "ball_log_sp.svg";
}

/// File names written by `iris`.
pub mod iris_files {
    pub const SUMMARY: &str = "iris_summary.csv";
    pub const REPLICATES: &str = "iris_replicates.csv";
    pub const BOXES: &str = "iris_boxes.csv";
    pub const LOG_SP_SVG: &str = "iris_log_sp_intervals.svg";
    pub const LOG_SPHERICITY_SVG: &str = "iris_log_sphericity_intervals.svg";
    pub const SP_BOX_SVG: &str = "iris_sp_boxes.svg";
    pub const SPHERICITY_BOX_SVG: &str = "iris_sphericity_boxes.svg";
}

pub const MANIFEST: &str = "manifest.json";

/// Absolute agreement threshold between the two SP closed forms.
const VARIANT_TOLERANCE: f64 = 1e-12;

fn out_err(e: std::io::Error) -> CliError {
    CliError::Write {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Serialize)]
struct AnalyticRow {
    shape: String,
    n: usize,
    variant: &'static str,
    sp: f64,
    sp_paper: f64,
    sp_geometric: f64,
    variants_agree: bool,
    sphericity: Option<f64>,
    oracle_samples: Option<u64>,
    oracle_sp: Option<f64>,
    oracle_se: Option<f64>,
    oracle_z_paper: Option<f64>,
    oracle_z_geometric: Option<f64>,
}

pub fn analytic(args: &AnalyticArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let variant: SpVariant = args.variant.parse()?;
    let mut rows = Vec::new();
    for n in args.dims.values() {
        let shape = AnalyticShape::parse(&args.shape, n)?;
        let paper = sp_closed_form(&shape, SpVariant::PaperFormula)?;
        let geometric = sp_closed_form(&shape, SpVariant::GeometricReference)?;
        let agree = (paper - geometric).abs() <= VARIANT_TOLERANCE;
        if !agree {
            writeln!(
                err,
                "note: {shape} n={n}: printed formula gives {paper}, circumradius-1 geometry gives {geometric}"
            )
            .map_err(out_err)?;
        }
        let oracle = match args.oracle {
            Some(samples) => Some(mc_sp_oracle(
                &shape,
                samples,
                derive_seed(args.seed, &[n as u64]),
            )?),
            None => None,
        };
        rows.push(AnalyticRow {
            shape: shape.to_string(),
            n,
            variant: variant.name(),
            sp: if variant == SpVariant::PaperFormula {
                paper
            } else {
                geometric
            },
            sp_paper: paper,
            sp_geometric: geometric,
            variants_agree: agree,
            sphericity: sphericity_closed_form(&shape),
            oracle_samples: oracle.map(|o| o.samples),
            oracle_sp: oracle.map(|o| o.estimate),
            oracle_se: oracle.map(|o| o.std_error),
            oracle_z_paper: oracle.map(|o| o.z_score(paper)),
            oracle_z_geometric: oracle.map(|o| o.z_score(geometric)),
        });
    }
    write_rows(out, &rows)
}

pub fn metrics(args: &MetricsArgs, out: &mut dyn Write) -> CliResult<()> {
    let table = RawTable::from_path(&args.input)?;
    let label = table
        .headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(&args.label_column));
    let columns: Vec<usize> = match &args.columns {
        Some(keys) => keys
            .iter()
            .map(|k| table.column_index(k))
            .collect::<CliResult<_>>()?,
        None => (0..table.headers.len())
            .filter(|&c| Some(c) != label)
            .collect(),
    };
    if columns.is_empty() {
        return Err(CliError::Usage("no feature columns selected".into()));
    }
    let rows: Vec<usize> = match &args.subset {
        Some(s) => {
            let subset = parse_subset(s)?;
            let label = label.ok_or_else(|| {
                CliError::Usage(format!("--subset needs a '{}' column", args.label_column))
            })?;
            let species = table.species(label)?;
            (0..species.len())
                .filter(|&i| subset.contains(species[i]))
                .collect()
        }
        None => (0..table.rows.len()).collect(),
    };
    if rows.is_empty() {
        return Err(CliError::Usage("no rows left after filtering".into()));
    }
    let points = table.numeric(&columns, &rows)?;

    let budget = cell_budget_from_env()?;
    let mut spec = BinningSpec::new(args.bins).with_cell_budget(budget);
    if let Some(ranges) = &args.ranges {
        if ranges.len() != columns.len() {
            return Err(CliError::Usage(format!(
                "{} ranges given for {} columns",
                ranges.len(),
                columns.len()
            )));
        }
        spec = spec.with_ranges(ranges.iter().map(|r| (r.0, r.1)).collect());
    }
    let m = analyze(&points, &spec)?;
    let row = [MetricsRow::new(args.bins, &m)];
    write_rows(&mut *out, &row)?;

    if let Some(dir) = &args.out {
        create_dir(dir)?;
        write_rows_to(&dir.join("metrics.csv"), &row)?;
        let mut manifest = Manifest::new(
            "metrics",
            json!({
                "input": args.input,
                "bins": args.bins,
                "columns": columns.iter().map(|&c| &table.headers[c]).collect::<Vec<_>>(),
                "subset": args.subset,
                "ranges": spec.ranges,
                "rows_used": rows.len(),
            }),
        );
        manifest.cell_budget = budget;
        manifest.outputs = vec!["metrics.csv".into()];
        manifest.write(&dir.join(MANIFEST))?;
    }
    Ok(())
}

pub fn simulate_ball(args: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.dims.start < 2 {
        return Err(CliError::Usage("--dims must start at 2 or more".into()));
    }
    if args.samples == 0 || args.points == 0 {
        return Err(CliError::Usage(
            "--samples and --points must be positive".into(),
        ));
    }
    let budget = cell_budget_from_env()?;
    let cfg = BallExperiment::new(
        args.dims.values(),
        args.bins.values(),
        args.samples,
        args.points,
    )
    .with_seed(args.seed)
    .with_cell_budget(budget);
    let records = run_ball_experiment(&cfg)?;

    create_dir(&args.out)?;
    let raw: Vec<BallRawRow> = records
        .iter()
        .map(|r| BallRawRow {
            dim: r.dim,
            bins: r.bins,
            sample: r.sample,
            seed: r.seed,
            volume: r.metrics.volume,
            radius: r.metrics.radius,
            surface: r.metrics.surface,
            sp: r.metrics.sp,
            sphericity: r.metrics.sphericity,
            degenerate_radius: r.metrics.degenerate_radius,
            erosion_empty: r.metrics.erosion_empty,
        })
        .collect();
    write_rows_to(&args.out.join(ball_files::RAW), &raw)?;

    let mut cells: BTreeMap<(usize, usize), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for r in &raw {
        let e = cells.entry((r.dim, r.bins)).or_default();
        e.0.push(r.sp);
        e.1.push(r.sphericity);
    }
    let summary = cells
        .iter()
        .map(|(&(dim, bins), (sp, sph))| {
            Ok(BallSummaryRow::new(
                dim,
                bins,
                &summarize(sp)?,
                &summarize(sph)?,
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let summary_path = args.out.join(ball_files::SUMMARY);
    write_rows_to(&summary_path, &summary)?;

    // figures come from the summary file alone
    let summary: Vec<BallSummaryRow> = read_rows_from(&summary_path)?;
    let figures = ball_figures(&summary);
    for (name, svg) in &figures {
        write_text(&args.out.join(name), svg)?;
    }

    let mut manifest = Manifest::new(
        "simulate-ball",
        json!({
            "dims": args.dims.values(),
            "bins": args.bins.values(),
            "samples_per_cell": args.samples,
            "points": args.points,
            "seed_derivation": "cell seed = derive_seed(seed, [dim, bins, sample])",
        }),
    );
    manifest.seed = Some(args.seed);
    manifest.cell_budget = budget;
    manifest.outputs = [ball_files::RAW, ball_files::SUMMARY]
        .into_iter()
        .map(String::from)
        .chain(figures.iter().map(|(n, _)| n.to_string()))
        .collect();
    manifest.write(&args.out.join(MANIFEST))?;
    for name in &manifest.outputs {
        writeln!(out, "{}", args.out.join(name).display()).map_err(out_err)?;
    }
    Ok(())
}

/// Sphericity, SP and ln SP against bins, one colour per dimension.
pub fn ball_figures(rows: &[BallSummaryRow]) -> Vec<(&'static str, String)> {
    let mut dims: Vec<usize> = rows.iter().map(|r| r.dim).collect();
    dims.dedup();
    type Pick = fn(&BallSummaryRow) -> [f64; 3];
    let build = |title: &str, y: &str, pick: Pick, reference: f64| {
        let mut series = Vec::new();
        for (i, &d) in dims.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()].to_string();
            let cell: Vec<&BallSummaryRow> = rows.iter().filter(|r| r.dim == d).collect();
            for (k, label) in [(0, Some(format!("n = {d} mean"))), (1, None), (2, None)] {
                series.push(Series {
                    label,
                    color: color.clone(),
                    stroke: if k == 0 {
                        Stroke::Solid
                    } else {
                        Stroke::Dotted
                    },
                    points: cell.iter().map(|r| (r.bins as f64, pick(r)[k])).collect(),
                });
            }
        }
        series.push(Series {
            label: Some("2.5% / 97.5%".into()),
            color: "#777777".into(),
            stroke: Stroke::Dotted,
            points: Vec::new(),
        });
        svg::line_chart(
            title,
            "bins per axis",
            y,
            &series,
            Some((reference, "unit ball")),
        )
    };
    vec![
        (
            ball_files::SPHERICITY_SVG,
            build(
                "Sphericity of simulated balls",
                "sphericity",
                |r| [r.sphericity_mean, r.sphericity_q025, r.sphericity_q975],
                1.0,
            ),
        ),
        (
            ball_files::SP_SVG,
            build(
                "Shape proportion of simulated balls",
                "SP",
                |r| [r.sp_mean, r.sp_q025, r.sp_q975],
                1.0,
            ),
        ),
        (
            ball_files::LOG_SP_SVG,
            build(
                "ln shape proportion of simulated balls",
                "ln SP",
                |r| [r.sp_mean.ln(), r.sp_q025.ln(), r.sp_q975.ln()],
                0.0,
            ),
        ),
    ]
}

pub fn iris(args: &IrisArgs, out: &mut dyn Write) -> CliResult<()> {
    let data = load_iris(args.input.as_deref())?;
    let subsets: Vec<IrisSubset> = if args.subsets.is_empty() {
        IrisSubset::ALL.to_vec()
    } else {
        args.subsets
            .iter()
            .map(|s| parse_subset(s))
            .collect::<CliResult<_>>()?
    };
    if args.replicates == 0 {
        return Err(CliError::Usage("--replicates must be positive".into()));
    }
    let budget = cell_budget_from_env()?;
    let cfg = IrisExperiment::new(subsets.clone(), args.bins.values(), args.replicates)
        .with_seed(args.seed)
        .with_cell_budget(budget);
    let cells = run_iris_experiment(&data, &cfg)?;

    create_dir(&args.out)?;
    let mut summary = Vec::new();
    let mut replicates = Vec::new();
    let mut boxes = Vec::new();
    for c in &cells {
        let label = c.subset.label();
        let b = &c.bootstrap;
        summary.push(IrisSummaryRow {
            subset: label.to_string(),
            bins: c.bins,
            replicates: b.replicates.len(),
            seed: c.seed,
            sp_q025: b.sp.q025,
            sp_median: b.sp.median,
            sp_q975: b.sp.q975,
            sp_mean: b.sp.mean,
            sphericity_q025: b.sphericity.q025,
            sphericity_median: b.sphericity.median,
            sphericity_q975: b.sphericity.q975,
            sphericity_mean: b.sphericity.mean,
            full_sp: c.full_sample.sp,
            full_sphericity: c.full_sample.sphericity,
            full_radius: c.full_sample.radius,
            full_erosion_empty: c.full_sample.erosion_empty,
        });
        for (i, m) in b.replicates.iter().enumerate() {
            replicates.push(IrisReplicateRow {
                subset: label.to_string(),
                bins: c.bins,
                replicate: i,
                volume: m.volume,
                radius: m.radius,
                surface: m.surface,
                sp: m.sp,
                sphericity: m.sphericity,
            });
        }
        boxes.push(BoxRow::new(
            label,
            c.bins,
            "sp",
            &five_number(&b.sp_values())?,
        ));
        boxes.push(BoxRow::new(
            label,
            c.bins,
            "sphericity",
            &five_number(&b.sphericity_values())?,
        ));
    }
    let summary_path = args.out.join(iris_files::SUMMARY);
    let boxes_path = args.out.join(iris_files::BOXES);
    write_rows_to(&summary_path, &summary)?;
    write_rows_to(&args.out.join(iris_files::REPLICATES), &replicates)?;
    write_rows_to(&boxes_path, &boxes)?;

    let summary: Vec<IrisSummaryRow> = read_rows_from(&summary_path)?;
    let boxes: Vec<BoxRow> = read_rows_from(&boxes_path)?;
    let figures = iris_figures(&summary, &boxes);
    for (name, svg) in &figures {
        write_text(&args.out.join(name), svg)?;
    }

    let mut manifest = Manifest::new(
        "iris",
        json!({
            "input": args.input.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "bundled iris.csv".into()),
            "subsets": subsets.iter().map(|s| s.label()).collect::<Vec<_>>(),
            "bins": args.bins.values(),
            "replicates": args.replicates,
            "seed_derivation": "cell seed = derive_seed(seed, [subset ordinal, bins]); replicate i uses derive_seed(cell seed, [i])",
            "resample_degenerate_axis": "zero-width axis widened to [v - 0.5, v + 0.5]",
        }),
    );
    manifest.seed = Some(args.seed);
    manifest.cell_budget = budget;
    manifest.outputs = [
        iris_files::SUMMARY,
        iris_files::REPLICATES,
        iris_files::BOXES,
    ]
    .into_iter()
    .map(String::from)
    .chain(figures.iter().map(|(n, _)| n.to_string()))
    .collect();
    manifest.write(&args.out.join(MANIFEST))?;
    for name in &manifest.outputs {
        writeln!(out, "{}", args.out.join(name).display()).map_err(out_err)?;
    }
    Ok(())
}

fn subset_order(rows: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for s in rows {
        if !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen
}

/// Interval plots of ln SP and ln sphericity (bars span the 2.5% to 97.5%
/// quantiles around the mean) and box plots of both metrics.
pub fn iris_figures(summary: &[IrisSummaryRow], boxes: &[BoxRow]) -> Vec<(&'static str, String)> {
    let subsets = subset_order(summary.iter().map(|r| r.subset.clone()));
    type Pick = fn(&IrisSummaryRow) -> [f64; 3];
    let intervals = |pick: Pick| -> Vec<Group<Interval>> {
        subsets
            .iter()
            .enumerate()
            .map(|(i, s)| Group {
                label: s.clone(),
                color: PALETTE[i % PALETTE.len()].to_string(),
                items: summary
                    .iter()
                    .filter(|r| &r.subset == s)
                    .map(|r| {
                        let [lo, center, hi] = pick(r).map(f64::ln);
                        Interval {
                            x: r.bins as f64,
                            lo,
                            center,
                            hi,
                        }
                    })
                    .collect(),
            })
            .collect()
    };
    let box_groups = |metric: &str| -> Vec<Group<BoxStats>> {
        subsets
            .iter()
            .enumerate()
            .map(|(i, s)| Group {
                label: s.clone(),
                color: PALETTE[i % PALETTE.len()].to_string(),
                items: boxes
                    .iter()
                    .filter(|b| &b.subset == s && b.metric == metric)
                    .map(|b| BoxStats {
                        x: b.bins as f64,
                        min: b.min,
                        q1: b.q1,
                        median: b.median,
                        q3: b.q3,
                        max: b.max,
                    })
                    .collect(),
            })
            .collect()
    };
    vec![
        (
            iris_files::LOG_SP_SVG,
            svg::interval_chart(
                "Iris: ln SP, bootstrap mean with 95% interval",
                "bins per axis",
                "ln SP",
                &intervals(|r| [r.sp_q025, r.sp_mean, r.sp_q975]),
            ),
        ),
        (
            iris_files::LOG_SPHERICITY_SVG,
            svg::interval_chart(
                "Iris: ln sphericity, bootstrap mean with 95% interval",
                "bins per axis",
                "ln sphericity",
                &intervals(|r| [r.sphericity_q025, r.sphericity_mean, r.sphericity_q975]),
            ),
        ),
        (
            iris_files::SP_BOX_SVG,
            svg::box_chart(
                "Iris: bootstrap SP",
                "bins per axis",
                "SP",
                &box_groups("sp"),
            ),
        ),
        (
            iris_files::SPHERICITY_BOX_SVG,
            svg::box_chart(
                "Iris: bootstrap sphericity",
                "bins per axis",
                "sphericity",
                &box_groups("sphericity"),
            ),
        ),
    ]
}
